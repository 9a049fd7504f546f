#include "topocc/lp.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "topocc/error.hpp"
#include "topocc/kernels.hpp"
#include "topocc/simplex.hpp"

namespace topocc {

using Rational = boost::multiprecision::cpp_rational;

namespace simplex {
template <>
struct Traits<Rational> {
    static bool positive(const Rational& v) { return v > 0; }
    static bool negative(const Rational& v) { return v < 0; }
};
}  // namespace simplex

namespace {

template <class Scalar>
Scalar from_demand(const Demand& d) {
    if constexpr (std::is_same_v<Scalar, Rational>) {
        return Rational(d.numerator(), d.denominator());
    } else {
        return static_cast<Scalar>(to_double(d));
    }
}

template <class Scalar>
double as_double(const Scalar& v) {
    if constexpr (std::is_same_v<Scalar, Rational>) {
        return v.template convert_to<double>();
    } else {
        return static_cast<double>(v);
    }
}

template <class Scalar>
bool violated(const Scalar& slack, double tol) {
    if constexpr (std::is_same_v<Scalar, Rational>) {
        (void)tol;
        return slack < 0;
    } else {
        return slack < -tol;
    }
}

bool steiner_separable(const BValueSpec& spec, LPKind kind) {
    return spec.family == DemandFamily::Steiner && spec.steiner_sets.size() == spec.size() &&
           (kind == LPKind::Upper || spec.size() == 1);
}

LPInstance build(const Graph& g, const BValueSpec& spec, LPKind kind) {
    if (!g.is_connected()) throw Error(ErrorCode::DisconnectedGraph, "cut LPs need a connected graph");
    LPInstance lp;
    lp.kind = kind;
    lp.graph = g;
    lp.label = spec.label;
    lp.copies = kind == LPKind::Lower ? 1 : spec.size();
    if (steiner_separable(spec, kind)) lp.steiner_sets = spec.steiner_sets;
    if (g.vertex_count() > kCutEnumerationMaxVertices) {
        if (lp.steiner_sets.empty())
            throw Error(ErrorCode::InstanceTooLarge, "demand family needs cut enumeration; graph too large");
        return lp;
    }
    const std::size_t m = g.edge_count();
    for_each_cut(g, [&](const Cut& c) {
        std::vector<std::size_t> crossing;  // computed lazily
        auto crossing_edges_once = [&]() -> const std::vector<std::size_t>& {
            if (crossing.empty()) crossing = crossing_edges(g, c);
            return crossing;
        };
        if (kind == LPKind::Lower) {
            const Demand rhs = spec.total(c);
            if (rhs > 0) lp.constraints.push_back({c.side(), 0, crossing_edges_once(), rhs});
            return;
        }
        for (std::size_t i = 0; i < spec.size(); ++i) {
            const Demand rhs = spec.terms[i](c);
            if (rhs <= 0) continue;
            std::vector<std::size_t> vars;
            for (std::size_t e : crossing_edges_once()) vars.push_back(i * m + e);
            lp.constraints.push_back({c.side(), i, std::move(vars), rhs});
        }
    });
    lp.materialized = true;
    return lp;
}

// Undirected max-flow (Edmonds-Karp) with capacities x_e on both arcs.
template <class Scalar>
struct FlowResult {
    Scalar value = 0;
    VertexSet source_side;
};

template <class Scalar>
FlowResult<Scalar> max_flow(const Graph& g, std::span<const Scalar> cap, Vertex s, Vertex t, double tol) {
    const std::size_t n = g.vertex_count();
    const std::size_t m = g.edge_count();
    // residual[2e] : u->v, residual[2e+1] : v->u
    std::vector<Scalar> residual(2 * m);
    for (std::size_t e = 0; e < m; ++e) residual[2 * e] = residual[2 * e + 1] = cap[e];
    auto usable = [&](const Scalar& r) {
        if constexpr (std::is_same_v<Scalar, Rational>) {
            return r > 0;
        } else {
            return r > tol * 1e-3;
        }
    };
    FlowResult<Scalar> out;
    while (true) {
        std::vector<std::ptrdiff_t> via(n, -1);  // arc used to reach vertex
        std::vector<bool> seen(n, false);
        std::vector<Vertex> queue{s};
        seen[s] = true;
        for (std::size_t head = 0; head < queue.size() && !seen[t]; ++head) {
            const Vertex u = queue[head];
            for (Vertex w : g.neighbors(u)) {
                const std::size_t e = *g.edge_index(u, w);
                const std::size_t arc = 2 * e + (g.edge(e).u == u ? 0 : 1);
                if (!seen[w] && usable(residual[arc])) {
                    seen[w] = true;
                    via[w] = static_cast<std::ptrdiff_t>(arc);
                    queue.push_back(w);
                }
            }
        }
        if (!seen[t]) {
            out.source_side = VertexSet(n);
            for (std::size_t v = 0; v < n; ++v)
                if (seen[v]) out.source_side.set(v);
            return out;
        }
        Scalar bottleneck = std::numeric_limits<double>::max();
        bool first = true;
        for (Vertex v = t; v != s;) {
            const auto arc = static_cast<std::size_t>(via[v]);
            if (first || residual[arc] < bottleneck) bottleneck = residual[arc];
            first = false;
            const Edge& e = g.edge(arc / 2);
            v = (arc % 2 == 0) ? e.u : e.v;
        }
        for (Vertex v = t; v != s;) {
            const auto arc = static_cast<std::size_t>(via[v]);
            residual[arc] -= bottleneck;
            residual[arc ^ 1u] += bottleneck;
            const Edge& e = g.edge(arc / 2);
            v = (arc % 2 == 0) ? e.u : e.v;
        }
        out.value += bottleneck;
    }
}

template <class Scalar>
struct BlockResult {
    std::vector<Scalar> x;
    Scalar objective = 0;
    std::size_t rounds = 0;
    std::size_t active = 0;
    double margin = std::numeric_limits<double>::infinity();
};

template <class Scalar>
BlockResult<Scalar> solve_enumerate(std::size_t vars, const kernels::RowSet& rows, const std::vector<Scalar>& rhs,
                                    const SolveOptions& opts) {
    BlockResult<Scalar> out;
    out.x.assign(vars, Scalar(0));
    std::vector<bool> active(rows.rows(), false);
    std::vector<std::size_t> active_list;
    const std::size_t batch = std::max<std::size_t>(16, vars);
    const double tol = opts.tolerance * 1e-3;
    while (true) {
        const auto slacks =
            kernels::parallel::row_slacks<Scalar>(rows, std::span<const Scalar>(rhs), std::span<const Scalar>(out.x));
        std::vector<std::size_t> bad;
        for (std::size_t r = 0; r < slacks.size(); ++r)
            if (violated(slacks[r], tol) && !active[r]) bad.push_back(r);
        if (bad.empty()) {
            for (const auto& s : slacks) out.margin = std::min(out.margin, as_double(s));
            break;
        }
        if (++out.rounds > opts.max_rounds) throw Error(ErrorCode::IterationLimit, "cutting-plane round limit");
        std::stable_sort(bad.begin(), bad.end(), [&](std::size_t a, std::size_t b) { return slacks[a] < slacks[b]; });
        if (bad.size() > batch) bad.resize(batch);
        for (std::size_t r : bad) {
            active[r] = true;
            active_list.push_back(r);
        }
        std::sort(active_list.begin(), active_list.end());
        kernels::RowSet sub;
        std::vector<Scalar> sub_rhs;
        for (std::size_t r : active_list) {
            sub.add_row(std::span<const std::size_t>(rows.vars.data() + rows.offsets[r], rows.offsets[r + 1] - rows.offsets[r]));
            sub_rhs.push_back(rhs[r]);
        }
        auto res = simplex::solve_covering<Scalar>(vars, sub, std::span<const Scalar>(sub_rhs));
        out.x = std::move(res.x);
        out.objective = res.objective;
    }
    if (rows.rows() == 0) out.margin = 0.0;
    out.active = active_list.size();
    return out;
}

template <class Scalar>
BlockResult<Scalar> solve_generate(const Graph& g, std::vector<Vertex> terminals, const SolveOptions& opts) {
    BlockResult<Scalar> out;
    const std::size_t m = g.edge_count();
    out.x.assign(m, Scalar(0));
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    if (terminals.size() < 2) {
        out.margin = 0.0;
        return out;
    }
    kernels::RowSet active;
    std::vector<Scalar> rhs;
    std::vector<VertexSet> seen_sides;
    const double tol = opts.tolerance * 1e-3;
    while (true) {
        std::vector<VertexSet> fresh;
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t j = 1; j < terminals.size(); ++j) {
            auto flow = max_flow<Scalar>(g, std::span<const Scalar>(out.x), terminals[0], terminals[j], opts.tolerance);
            const Scalar slack = flow.value - Scalar(1);
            margin = std::min(margin, as_double(slack));
            if (!violated(slack, tol)) continue;
            if (std::find(seen_sides.begin(), seen_sides.end(), flow.source_side) != seen_sides.end() ||
                std::find(fresh.begin(), fresh.end(), flow.source_side) != fresh.end())
                continue;
            fresh.push_back(std::move(flow.source_side));
        }
        if (fresh.empty()) {
            out.margin = margin;
            break;
        }
        if (++out.rounds > opts.max_rounds) throw Error(ErrorCode::IterationLimit, "constraint generation round limit");
        for (auto& side : fresh) {
            const auto vars = crossing_edges(g, Cut::from_side(side));
            active.add_row(vars);
            rhs.push_back(Scalar(1));
            seen_sides.push_back(std::move(side));
        }
        auto res = simplex::solve_covering<Scalar>(m, active, std::span<const Scalar>(rhs));
        out.x = std::move(res.x);
        out.objective = res.objective;
    }
    out.active = active.rows();
    return out;
}

template <class Scalar>
LPSolution solve_impl(const LPInstance& lp, SolveMode mode, const SolveOptions& opts) {
    const std::size_t m = lp.edge_count();
    LPSolution sol;
    sol.values.assign(lp.variable_count(), 0.0);
    Scalar total = 0;
    sol.feasibility_margin = std::numeric_limits<double>::infinity();
    for (std::size_t copy = 0; copy < lp.copies; ++copy) {
        const std::size_t offset = copy * m;
        const std::size_t block_vars = lp.kind == LPKind::Lower ? lp.variable_count() : m;
        BlockResult<Scalar> block;
        if (mode == SolveMode::Enumerate) {
            if (!lp.materialized) throw Error(ErrorCode::UnsupportedMode, "enumerate mode needs materialized rows");
            kernels::RowSet rows;
            std::vector<Scalar> rhs;
            for (const auto& c : lp.constraints) {
                if (c.copy != copy) continue;
                std::vector<std::size_t> local;
                for (std::size_t v : c.vars) local.push_back(v - offset);
                rows.add_row(local);
                rhs.push_back(from_demand<Scalar>(c.rhs));
            }
            block = solve_enumerate<Scalar>(block_vars, rows, rhs, opts);
        } else {
            if (lp.steiner_sets.size() != lp.copies)
                throw Error(ErrorCode::UnsupportedMode, "generate mode needs single-set Steiner demands per copy");
            block = solve_generate<Scalar>(lp.graph, lp.steiner_sets[copy], opts);
        }
        for (std::size_t j = 0; j < block_vars; ++j) sol.values[offset + j] = as_double(block.x[j]);
        total += block.objective;
        sol.rounds += block.rounds;
        sol.active_rows += block.active;
        sol.feasibility_margin = std::min(sol.feasibility_margin, block.margin);
    }
    if (lp.copies == 0) sol.feasibility_margin = 0.0;
    sol.objective = as_double(total);
    if constexpr (std::is_same_v<Scalar, Rational>) sol.exact_objective = total.str();
    return sol;
}

}  // namespace

std::string LPInstance::variable_name(std::size_t var) const {
    const std::size_t m = edge_count();
    const Edge& e = graph.edge(var % m);
    std::ostringstream os;
    os << "x";
    if (kind == LPKind::Upper) os << "_" << var / m;
    os << "_" << e.u << "_" << e.v;
    return os.str();
}

LPInstance build_lower_lp(const Graph& g, const BValueSpec& spec) { return build(g, spec, LPKind::Lower); }
LPInstance build_upper_lp(const Graph& g, const BValueSpec& spec) { return build(g, spec, LPKind::Upper); }

LPSolution solve(const LPInstance& lp, SolveMode mode, const SolveOptions& opts) {
    if (opts.exact_rational) {
        if (lp.edge_count() > kExactRationalMaxEdges)
            throw Error(ErrorCode::InstanceTooLarge, "exact rational mode limited to 12 edges");
        return solve_impl<Rational>(lp, mode, opts);
    }
    return solve_impl<double>(lp, mode, opts);
}

LPSolution solve(const LPInstance& lp, const SolveOptions& opts) {
    return solve(lp, lp.materialized ? SolveMode::Enumerate : SolveMode::Generate, opts);
}

double min_slack(const LPInstance& lp, const std::vector<double>& x) {
    if (!lp.materialized) {
        double margin = std::numeric_limits<double>::infinity();
        const std::size_t m = lp.edge_count();
        for (std::size_t copy = 0; copy < lp.steiner_sets.size(); ++copy) {
            auto terms = lp.steiner_sets[copy];
            std::sort(terms.begin(), terms.end());
            terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
            const std::span<const double> block(x.data() + copy * m, m);
            for (std::size_t j = 1; j < terms.size(); ++j)
                margin = std::min(margin, max_flow<double>(lp.graph, block, terms[0], terms[j], 1e-6).value - 1.0);
        }
        return margin;
    }
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& c : lp.constraints) {
        double sum = 0.0;
        for (std::size_t v : c.vars) sum += x[v];
        margin = std::min(margin, sum - to_double(c.rhs));
    }
    return margin;
}

double lp_st(const Graph& g, std::span<const Vertex> terminals, const SolveOptions& opts) {
    return solve(build_lower_lp(g, steiner_spec({{terminals.begin(), terminals.end()}})), opts).objective;
}

double lp_mdn(const Graph& g, std::span<const Vertex> terminals, const SolveOptions& opts) {
    return solve(build_lower_lp(g, mdn_spec({{terminals.begin(), terminals.end()}})), opts).objective;
}

double lp_mtch(const Graph& g, std::span<const VertexPair> pairs, const SolveOptions& opts) {
    return solve(build_lower_lp(g, match_spec({{pairs.begin(), pairs.end()}})), opts).objective;
}

Demand tree_closed_form(const Graph& tree, const BValueSpec& spec) {
    if (!tree.is_tree()) throw Error(ErrorCode::NotATree, "closed form needs a tree");
    Demand total = 0;
    const std::size_t n = tree.vertex_count();
    for (std::size_t i = 0; i < tree.edge_count(); ++i) {
        const Edge cut_edge = tree.edge(i);
        // component of cut_edge.u once cut_edge is removed
        VertexSet side(n);
        std::vector<Vertex> stack{cut_edge.u};
        side.set(cut_edge.u);
        while (!stack.empty()) {
            const Vertex u = stack.back();
            stack.pop_back();
            for (Vertex w : tree.neighbors(u)) {
                if (side[w] || (u == cut_edge.u && w == cut_edge.v)) continue;
                side.set(w);
                stack.push_back(w);
            }
        }
        total += spec.total(Cut::from_side(std::move(side)));
    }
    return total;
}

RoutingAssignment upper_lp_by_routing(const Graph& g, const GroupedTerminals& groups, RoutingMode mode) {
    const std::size_t m = g.edge_count();
    RoutingAssignment out;
    out.values.assign(groups.group_count() * m, 0.0);
    if (mode == RoutingMode::Steiner) {
        for (std::size_t i = 0; i < groups.group_count(); ++i) {
            const auto tree = steiner_tree_approx(g, groups.groups[i]);
            for (const auto& e : tree.edges) out.values[i * m + *g.edge_index(e.u, e.v)] += 1.0;
            out.cost += tree.cost;
        }
        out.spec = steiner_spec(groups.groups);
    } else {
        if (!groups.matchings) throw Error(ErrorCode::MissingMatchings, "matching routing needs per-group matchings");
        for (std::size_t i = 0; i < groups.group_count(); ++i) {
            for (auto [a, b] : (*groups.matchings)[i]) {
                const auto path = g.shortest_path(a, b);
                for (std::size_t p = 0; p + 1 < path.size(); ++p)
                    out.values[i * m + *g.edge_index(path[p], path[p + 1])] += 1.0;
                out.cost += static_cast<int>(path.size()) - 1;
            }
        }
        out.spec = match_spec(*groups.matchings);
    }
    if (g.vertex_count() <= kCutEnumerationMaxVertices) {
        const auto lp = build_upper_lp(g, out.spec);
        out.feasible = lp.constraints.empty() || min_slack(lp, out.values) >= -1e-9;
    }
    return out;
}

GapReport gap_report(const Graph& g, const BValueSpec& spec, const SolveOptions& opts) {
    GapReport r;
    r.lower = solve(build_lower_lp(g, spec), opts).objective;
    r.upper = solve(build_upper_lp(g, spec), opts).objective;
    if (r.lower <= opts.tolerance) {
        if (r.upper <= opts.tolerance) {
            r.ratio = 1.0;
        } else {
            r.ratio = std::numeric_limits<double>::infinity();
            r.infinite = true;
        }
    } else {
        r.ratio = r.upper / r.lower;
    }
    return r;
}

std::string to_lp_format(const LPInstance& lp) {
    std::ostringstream os;
    os << "\\ " << (lp.kind == LPKind::Lower ? "LP^L" : "LP^U") << " " << lp.label << ": " << lp.graph.vertex_count()
       << " vertices, " << lp.edge_count() << " edges, " << lp.constraints.size() << " rows\n";
    os << "Minimize\n obj:";
    for (std::size_t v = 0; v < lp.variable_count(); ++v) os << (v ? " + " : " ") << lp.variable_name(v);
    os << "\nSubject To\n";
    std::size_t row = 0;
    for (const auto& c : lp.constraints) {
        os << " c" << row++ << ":";
        for (std::size_t k = 0; k < c.vars.size(); ++k) os << (k ? " + " : " ") << lp.variable_name(c.vars[k]);
        os << " >= ";
        if (c.rhs.denominator() == 1) {
            os << c.rhs.numerator();
        } else {
            os << to_double(c.rhs);
        }
        os << "\n";
    }
    os << "Bounds\n";
    for (std::size_t v = 0; v < lp.variable_count(); ++v) os << " " << lp.variable_name(v) << " >= 0\n";
    os << "End\n";
    return os.str();
}

}  // namespace topocc

#include "topocc/multicut_family.hpp"

#include <algorithm>
#include <map>

#include <boost/multiprecision/cpp_int.hpp>

#include "topocc/detail/disjoint_sets.hpp"
#include "topocc/error.hpp"

namespace topocc {

namespace {

std::vector<Vertex> distinct_terminals(const Graph& g, std::span<const Vertex> terminals) {
    std::vector<Vertex> out(terminals.begin(), terminals.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (Vertex v : out)
        if (v >= g.vertex_count()) throw Error(ErrorCode::InvalidTerminals, "terminal out of range");
    if (out.size() < 2) throw Error(ErrorCode::TooFewTerminals, "multicut construction needs at least 2 terminals");
    const auto dist = g.bfs(out.front());
    for (Vertex v : out)
        if (dist[v] < 0) throw Error(ErrorCode::DisconnectedGraph, "terminals in different components");
    return out;
}

void order_parts(TerminalPartition& parts) {
    std::sort(parts.begin(), parts.end(), [](const VertexSet& a, const VertexSet& b) { return a.find_first() < b.find_first(); });
}

}  // namespace

VertexSet ball(const Graph& g, const VertexSet& s, int r) {
    if (s.size() != g.vertex_count()) throw Error(ErrorCode::ShapeMismatch, "vertex set size differs from |V|");
    if (s.none()) throw Error(ErrorCode::EmptySet, "ball around an empty set");
    const auto src = members(s);
    const auto dist = g.bfs(std::span<const Vertex>(src));
    VertexSet out(g.vertex_count());
    for (std::size_t v = 0; v < dist.size(); ++v)
        if (dist[v] >= 0 && dist[v] <= r) out.set(v);
    return out;
}

std::vector<TerminalPartition> build_partition_sequence(const Graph& g, std::span<const Vertex> terminals) {
    const auto terms = distinct_terminals(g, terminals);
    const std::size_t n = g.vertex_count();
    TerminalPartition current;
    for (Vertex v : terms) current.push_back(make_vertex_set(n, std::span<const Vertex>(&v, 1)));
    std::vector<TerminalPartition> seq{current};
    for (int i = 1; current.size() > 1; ++i) {
        std::vector<VertexSet> balls;
        for (const auto& s : current) balls.push_back(ball(g, s, i));
        detail::DisjointSets ds(current.size());
        for (std::size_t a = 0; a < current.size(); ++a)
            for (std::size_t b = a + 1; b < current.size(); ++b)
                if (balls[a].intersects(balls[b])) ds.unite(a, b);
        std::map<std::size_t, VertexSet> merged;
        for (std::size_t a = 0; a < current.size(); ++a) {
            auto [it, fresh] = merged.try_emplace(ds.find(a), current[a]);
            if (!fresh) it->second |= current[a];
        }
        TerminalPartition next;
        for (auto& [root, part] : merged) next.push_back(std::move(part));
        order_parts(next);
        current = std::move(next);
        seq.push_back(current);
    }
    return seq;
}

std::vector<Multicut> build_multicuts(const Graph& g, std::span<const Vertex> terminals) {
    const auto seq = build_partition_sequence(g, terminals);
    std::vector<Multicut> out;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        std::vector<VertexSet> sets;
        for (const auto& s : seq[i]) sets.push_back(ball(g, s, static_cast<int>(i)));
        out.emplace_back(g.vertex_count(), std::move(sets));
    }
    return out;
}

MulticutFamily chunk_into_family(const Graph& g, std::span<const Vertex> terminals) {
    const auto seq = build_partition_sequence(g, terminals);
    auto cuts = build_multicuts(g, terminals);
    const std::size_t t = cuts.size();
    MulticutFamily fam;
    fam.terminal_count = seq.front().size();
    std::size_t start = 0;
    while (start < t) {
        const auto& base = seq[start];
        std::size_t end = start;
        for (std::size_t j = start; j < t; ++j) {
            std::size_t singles = 0;
            for (const auto& part : seq[j]) {
                std::size_t inside = 0;
                for (const auto& b : base)
                    if (b.is_subset_of(part)) ++inside;
                if (inside == 1) ++singles;
            }
            if (singles * fam.alpha_den < fam.alpha_num * base.size()) break;
            end = j;
        }
        MulticutCollection coll;
        coll.first_step = start + 1;
        for (std::size_t j = start; j <= end; ++j) coll.multicuts.push_back(cuts[j]);
        fam.collections.push_back(std::move(coll));
        start = end + 1;
    }
    return fam;
}

std::size_t singleton_count(const Multicut& first, const Multicut& last) {
    std::size_t count = 0;
    for (const auto& x : last.explicit_sets()) {
        std::size_t inside = 0;
        for (const auto& y : first.explicit_sets())
            if (y.is_subset_of(x)) ++inside;
        if (inside == 1) ++count;
    }
    return count;
}

std::size_t family_length_bound(std::size_t k) {
    std::size_t m = 0;
    boost::multiprecision::cpp_int pow3 = 1;
    boost::multiprecision::cpp_int pow2 = 1;
    while (pow3 < k * pow2) {
        pow3 *= 3;
        pow2 *= 2;
        ++m;
    }
    return m + 1;
}

bool FamilyReport::ok() const {
    if (!length_bound || !first_is_terminal_singletons) return false;
    return std::all_of(collections.begin(), collections.end(),
                       [](const CollectionCheck& c) { return c.containment && c.disjointness && c.singleton; });
}

FamilyReport verify_family(const Graph& g, const MulticutFamily& fam, std::span<const Vertex> terminals) {
    FamilyReport report;
    for (const auto& coll : fam.collections) {
        CollectionCheck check;
        if (coll.multicuts.empty()) {
            check.containment = check.disjointness = check.singleton = false;
            report.collections.push_back(check);
            continue;
        }
        for (std::size_t j = 0; j + 1 < coll.multicuts.size(); ++j) {
            const auto& prev = coll.multicuts[j];
            const auto& next = coll.multicuts[j + 1];
            const VertexSet implicit = prev.implicit_set();
            for (const auto& x : next.explicit_sets()) {
                VertexSet covered(x.size());
                std::size_t pieces = 0;
                for (const auto& y : prev.explicit_sets()) {
                    if (y.is_subset_of(x)) {
                        covered |= y;
                        ++pieces;
                    } else if (y.intersects(x)) {
                        check.containment = false;
                    }
                }
                if (pieces == 0 || !(x - covered).is_subset_of(implicit)) check.containment = false;
            }
        }
        std::vector<bool> used(g.edge_count(), false);
        for (const auto& mc : coll.multicuts) {
            for (std::size_t e : crossing_edges(g, mc)) {
                if (used[e]) check.disjointness = false;
                used[e] = true;
            }
        }
        check.first_size = coll.multicuts.front().size();
        check.singletons = singleton_count(coll.multicuts.front(), coll.multicuts.back());
        check.singleton = check.singletons * fam.alpha_den >= fam.alpha_num * check.first_size;
        report.collections.push_back(check);
    }
    report.length_bound = fam.ell() <= family_length_bound(fam.terminal_count);
    if (!terminals.empty()) {
        std::vector<Vertex> terms(terminals.begin(), terminals.end());
        std::sort(terms.begin(), terms.end());
        terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
        std::vector<VertexSet> expected;
        for (Vertex v : terms) expected.push_back(make_vertex_set(g.vertex_count(), std::span<const Vertex>(&v, 1)));
        report.first_is_terminal_singletons = !fam.collections.empty() && !fam.collections.front().multicuts.empty() &&
                                              fam.collections.front().multicuts.front().explicit_sets() == expected;
    }
    return report;
}

FamilyCost family_cost_check(const Graph& g, std::span<const Vertex> terminals) {
    FamilyCost out;
    for (const auto& mc : build_multicuts(g, terminals)) out.sum_sizes += mc.size();
    out.mst_closure_cost = closure_mst_cost(g, terminals);
    out.st_approx = steiner_tree_approx(g, terminals).cost;
    if (g.vertex_count() <= kSteinerExactMaxVertices) out.st_exact = steiner_tree_exact(g, terminals).cost;
    out.ok = 2 * out.sum_sizes >= static_cast<std::size_t>(out.mst_closure_cost);
    return out;
}

std::vector<WeightedEdge> boruvka_mst(const MetricClosure& closure) {
    const auto& terms = closure.terminals;
    auto local = [&](Vertex v) {
        return static_cast<std::size_t>(std::lower_bound(terms.begin(), terms.end(), v) - terms.begin());
    };
    auto lighter = [](const WeightedEdge& a, const WeightedEdge& b) {
        if (a.weight != b.weight) return a.weight < b.weight;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    };
    detail::DisjointSets ds(terms.size());
    std::vector<WeightedEdge> forest;
    std::size_t components = terms.size();
    while (components > 1) {
        std::vector<const WeightedEdge*> cheapest(terms.size(), nullptr);
        for (const auto& e : closure.edges) {
            const auto a = ds.find(local(e.u));
            const auto b = ds.find(local(e.v));
            if (a == b) continue;
            for (auto c : {a, b})
                if (!cheapest[c] || lighter(e, *cheapest[c])) cheapest[c] = &e;
        }
        bool merged = false;
        for (const auto* e : cheapest) {
            if (e && ds.unite(local(e->u), local(e->v))) {
                forest.push_back(*e);
                --components;
                merged = true;
            }
        }
        if (!merged) break;
    }
    return forest;
}

TerminalPartition threshold_partition(std::size_t n, std::span<const Vertex> terminals,
                                      std::span<const WeightedEdge> forest, int w) {
    detail::DisjointSets ds(n);
    for (const auto& e : forest)
        if (e.weight <= w) ds.unite(e.u, e.v);
    std::map<std::size_t, VertexSet> parts;
    for (Vertex v : terminals) {
        auto [it, fresh] = parts.try_emplace(ds.find(v), VertexSet(n));
        it->second.set(v);
    }
    TerminalPartition out;
    for (auto& [root, part] : parts) out.push_back(std::move(part));
    order_parts(out);
    return out;
}

}  // namespace topocc

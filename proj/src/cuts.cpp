#include "topocc/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "topocc/error.hpp"
#include "topocc/kernels.hpp"
#include "topocc/rng.hpp"

namespace topocc {

Cut Cut::from_side(VertexSet side) {
    const std::size_t n = side.size();
    const std::size_t count = side.count();
    if (count == 0 || count == n) throw Error(ErrorCode::InvalidCut, "cut side must be a nonempty proper subset");
    if (!side[0]) side.flip();
    return Cut(std::move(side));
}

Cut Cut::from_members(std::size_t n, std::span<const Vertex> side) { return from_side(make_vertex_set(n, side)); }

Multicut::Multicut(std::size_t n, std::vector<VertexSet> explicit_sets)
    : n_(n), sets_(std::move(explicit_sets)), owner_(n, 0) {
    if (sets_.empty()) throw Error(ErrorCode::InvalidCut, "multicut needs at least one explicit set");
    std::fill(owner_.begin(), owner_.end(), sets_.size());
    for (std::size_t i = 0; i < sets_.size(); ++i) {
        if (sets_[i].size() != n || sets_[i].none())
            throw Error(ErrorCode::InvalidCut, "explicit set " + std::to_string(i) + " empty or mis-sized");
        for (auto v = sets_[i].find_first(); v != VertexSet::npos; v = sets_[i].find_next(v)) {
            if (owner_[v] != sets_.size()) throw Error(ErrorCode::InvalidCut, "explicit sets overlap");
            owner_[v] = i;
        }
    }
}

VertexSet Multicut::implicit_set() const {
    VertexSet out(n_);
    for (std::size_t v = 0; v < n_; ++v)
        if (owner_[v] == sets_.size()) out.set(v);
    return out;
}

Demand BValueSpec::total(const Cut& c) const {
    Demand sum = 0;
    for (const auto& term : terms) sum += term(c);
    return sum;
}

int b_steiner(const Cut& c, std::span<const Vertex> terminals) {
    bool in = false, out = false;
    for (Vertex v : terminals) (c.on_side(v) ? in : out) = true;
    return (in && out) ? 1 : 0;
}

int b_mdn(const Cut& c, std::span<const Vertex> terminals) {
    int in = 0;
    for (Vertex v : terminals) in += c.on_side(v) ? 1 : 0;
    return std::min(in, static_cast<int>(terminals.size()) - in);
}

int b_match(const Cut& c, std::span<const VertexPair> pairs) {
    int count = 0;
    for (auto [a, b] : pairs) count += c.separates(a, b) ? 1 : 0;
    return count;
}

int b_grouped(const Cut& c, const GroupedTerminals& groups) {
    int count = 0;
    for (const auto& group : groups.groups) count += b_steiner(c, group);
    return count;
}

BValueSpec steiner_spec(std::vector<std::vector<Vertex>> sets) {
    BValueSpec spec;
    spec.label = "steiner";
    spec.family = DemandFamily::Steiner;
    for (const auto& set : sets) spec.terms.emplace_back([set](const Cut& c) { return Demand(b_steiner(c, set)); });
    spec.steiner_sets = std::move(sets);
    return spec;
}

BValueSpec mdn_spec(std::vector<std::vector<Vertex>> sets) {
    BValueSpec spec;
    spec.label = "median";
    spec.family = DemandFamily::Median;
    for (auto& set : sets) spec.terms.emplace_back([set = std::move(set)](const Cut& c) { return Demand(b_mdn(c, set)); });
    return spec;
}

BValueSpec match_spec(std::vector<std::vector<VertexPair>> matchings) {
    BValueSpec spec;
    spec.label = "matching";
    spec.family = DemandFamily::Matching;
    for (auto& m : matchings)
        spec.terms.emplace_back([m = std::move(m)](const Cut& c) { return Demand(b_match(c, m)); });
    return spec;
}

BValueSpec grouped_spec(GroupedTerminals groups) {
    BValueSpec spec;
    spec.label = "grouped";
    spec.family = DemandFamily::Grouped;
    spec.terms.emplace_back([groups = std::move(groups)](const Cut& c) { return Demand(b_grouped(c, groups)); });
    return spec;
}

BValueSpec zero_spec(std::size_t terms) {
    BValueSpec spec;
    spec.label = "zero";
    for (std::size_t i = 0; i < terms; ++i) spec.terms.emplace_back([](const Cut&) { return Demand(0); });
    return spec;
}

void for_each_cut(const Graph& g, const std::function<void(const Cut&)>& fn) {
    const std::size_t n = g.vertex_count();
    if (n > kCutEnumerationMaxVertices)
        throw Error(ErrorCode::InstanceTooLarge,
                    "cut enumeration limited to " + std::to_string(kCutEnumerationMaxVertices) + " vertices");
    if (n < 2) return;
    // side always holds vertex 0; the other n-1 vertices choose freely except "all"
    const std::uint32_t rest = (1u << (n - 1)) - 1u;
    for (std::uint32_t mask = 0; mask < rest; ++mask) {
        VertexSet side(n);
        side.set(0);
        for (std::size_t v = 1; v < n; ++v)
            if (mask >> (v - 1) & 1u) side.set(v);
        fn(Cut::from_side(std::move(side)));
    }
}

std::vector<Cut> enumerate_cuts(const Graph& g) {
    std::vector<Cut> out;
    for_each_cut(g, [&](const Cut& c) { out.push_back(c); });
    return out;
}

std::vector<std::size_t> crossing_edges(const Graph& g, const Cut& c) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < g.edge_count(); ++i)
        if (c.separates(g.edge(i).u, g.edge(i).v)) out.push_back(i);
    return out;
}

std::vector<std::size_t> crossing_edges(const Graph& g, const Multicut& c) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const auto pu = c.part_of(g.edge(i).u), pv = c.part_of(g.edge(i).v);
        // the implicit set is not a part whose internal edges count, but an
        // edge leaving an explicit set into it does
        if (pu != pv) out.push_back(i);
    }
    return out;
}

SubadditivityReport check_subadditive(const Graph& g, const BValueSpec& spec, std::size_t max_report) {
    const std::size_t n = g.vertex_count();
    if (n > kSubadditivityMaxVertices)
        throw Error(ErrorCode::InstanceTooLarge,
                    "sub-additivity check limited to " + std::to_string(kSubadditivityMaxVertices) + " vertices");
    SubadditivityReport report;
    if (n < 3) return report;
    const std::uint32_t full = (1u << n) - 1u;
    auto side_of = [n](std::uint32_t mask) {
        VertexSet s(n);
        for (std::size_t v = 0; v < n; ++v)
            if (mask >> v & 1u) s.set(v);
        return s;
    };
    kernels::DemandTable<Demand> table(spec.size(), std::vector<Demand>(full + 1, Demand(0)));
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        const Cut c = Cut::from_side(side_of(mask));
        for (std::size_t t = 0; t < spec.size(); ++t) table[t][mask] = spec.terms[t](c);
    }
    report.triples_checked = kernels::serial::subadditivity_triples(n) * spec.size();
    for (const auto& v : kernels::parallel::subadditivity_scan(n, table, max_report)) {
        report.violations.push_back({side_of(v.s1), side_of(v.s2), v.term, table[v.term][v.s1], table[v.term][v.s2],
                                     table[v.term][v.s1 | v.s2]});
    }
    return report;
}

std::vector<int> separation_counts(std::size_t n, std::span<const Cut> cuts) {
    std::vector<int> out(n * n, 0);
    for (const auto& c : cuts)
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v)
                if (c.separates(static_cast<Vertex>(u), static_cast<Vertex>(v))) {
                    ++out[u * n + v];
                    ++out[v * n + u];
                }
    return out;
}

bool separates_by_distance(const Graph& g, std::span<const Cut> cuts) {
    const auto d = shortest_path_matrix(g);
    const auto counts = separation_counts(g.vertex_count(), cuts);
    const std::size_t n = g.vertex_count();
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (counts[u * n + v] < d(static_cast<Vertex>(u), static_cast<Vertex>(v))) return false;
    return true;
}

int max_edge_load(const Graph& g, std::span<const Cut> cuts) {
    int best = 0;
    for (const auto& e : g.edges()) {
        int load = 0;
        for (const auto& c : cuts) load += c.separates(e.u, e.v) ? 1 : 0;
        best = std::max(best, load);
    }
    return best;
}

namespace {

std::vector<Cut> sample_threshold_cuts(const Graph& g, Rng& rng, std::size_t per_scale) {
    const std::size_t n = g.vertex_count();
    const auto scales = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n))));
    std::vector<Cut> cuts;
    for (std::size_t j = 0; j <= scales; ++j) {
        const std::size_t size = std::min<std::size_t>(n, std::size_t{1} << j);
        for (std::size_t rep = 0; rep < per_scale; ++rep) {
            // uniform subset of the given size (partial Fisher-Yates)
            std::vector<Vertex> pool(n);
            for (std::size_t v = 0; v < n; ++v) pool[v] = static_cast<Vertex>(v);
            for (std::size_t i = 0; i < size; ++i) std::swap(pool[i], pool[i + rng.uniform(0, n - 1 - i)]);
            pool.resize(size);
            const auto coord = g.bfs(std::span<const Vertex>(pool));
            const int top = *std::max_element(coord.begin(), coord.end());
            for (int theta = 0; theta < top; ++theta) {
                VertexSet side(n);
                for (std::size_t v = 0; v < n; ++v)
                    if (coord[v] <= theta) side.set(v);
                cuts.push_back(Cut::from_side(std::move(side)));
            }
        }
    }
    return cuts;
}

// Greedy removal from the back, keeping pair separation >= distance.
std::vector<Cut> prune_collection(const Graph& g, std::vector<Cut> cuts) {
    const std::size_t n = g.vertex_count();
    const auto d = shortest_path_matrix(g);
    auto counts = separation_counts(n, cuts);
    std::vector<bool> keep(cuts.size(), true);
    for (std::size_t idx = cuts.size(); idx-- > 0;) {
        bool removable = true;
        for (std::size_t u = 0; u < n && removable; ++u)
            for (std::size_t v = u + 1; v < n; ++v)
                if (cuts[idx].separates(static_cast<Vertex>(u), static_cast<Vertex>(v)) &&
                    counts[u * n + v] - 1 < d(static_cast<Vertex>(u), static_cast<Vertex>(v))) {
                    removable = false;
                    break;
                }
        if (!removable) continue;
        keep[idx] = false;
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v)
                if (cuts[idx].separates(static_cast<Vertex>(u), static_cast<Vertex>(v))) {
                    --counts[u * n + v];
                    --counts[v * n + u];
                }
    }
    std::vector<Cut> out;
    for (std::size_t i = 0; i < cuts.size(); ++i)
        if (keep[i]) out.push_back(std::move(cuts[i]));
    return out;
}

}  // namespace

BourgainCollection bourgain_cut_collection(const Graph& g, std::uint64_t seed, const BourgainOptions& opts) {
    const std::size_t n = g.vertex_count();
    if (!g.is_connected()) throw Error(ErrorCode::DisconnectedGraph, "Bourgain cuts need a connected graph");
    BourgainCollection out;
    if (n < 2) return out;
    const std::size_t per_scale =
        opts.subsets_per_scale ? opts.subsets_per_scale
                               : static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
    const Rng root(seed);
    for (std::size_t attempt = 0; attempt < opts.retry_budget; ++attempt) {
        Rng rng = root.split(attempt);
        auto cuts = sample_threshold_cuts(g, rng, per_scale);
        if (!separates_by_distance(g, cuts)) continue;
        if (opts.prune) cuts = prune_collection(g, std::move(cuts));
        out.cuts = std::move(cuts);
        out.beta = max_edge_load(g, out.cuts);
        out.attempts = attempt + 1;
        return out;
    }
    throw Error(ErrorCode::BudgetExceeded,
                "no distance-separating collection in " + std::to_string(opts.retry_budget) + " draws");
}

}  // namespace topocc

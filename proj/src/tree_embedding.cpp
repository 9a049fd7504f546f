#include "topocc/tree_embedding.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "topocc/detail/disjoint_sets.hpp"
#include "topocc/error.hpp"
#include "topocc/kernels.hpp"
#include "topocc/rng.hpp"

namespace topocc {

namespace {

Graph random_mst(const Graph& g, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(g.edge_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e) order.emplace_back(rng.unit_open_left(), e);
    std::sort(order.begin(), order.end());
    detail::DisjointSets ds(g.vertex_count());
    std::vector<Edge> tree;
    for (auto [w, e] : order)
        if (ds.unite(g.edge(e).u, g.edge(e).v)) tree.push_back(g.edge(e));
    return Graph(g.vertex_count(), std::move(tree));
}

Graph bfs_tree(const Graph& g, Vertex root) {
    const auto dist = g.bfs(root);
    std::vector<Edge> tree;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (v == root) continue;
        // neighbours are sorted, so the first one a layer up is the smallest
        for (Vertex w : g.neighbors(v)) {
            if (dist[w] == dist[v] - 1) {
                tree.push_back({w, v});
                break;
            }
        }
    }
    return Graph(g.vertex_count(), std::move(tree));
}

double score(const Stretch& s, bool weighted) { return weighted ? s.weighted_avg : s.avg; }

template <class Value>
std::vector<Value> transfer_impl(const Graph& g, const Graph& t, std::span<const Value> x) {
    require_spanning_subtree(g, t);
    if (x.size() != g.edge_count()) throw Error(ErrorCode::ShapeMismatch, "x must have one value per edge of g");
    std::vector<Value> out(t.edge_count(), Value(0));
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (x[e] == Value(0)) continue;
        for (std::size_t te : tree_path_edges(t, g.edge(e).u, g.edge(e).v)) out[te] += x[e];
    }
    return out;
}

}  // namespace

TreeStrategy parse_tree_strategy(const std::string& name) {
    if (name == "random-mst") return TreeStrategy::RandomMst;
    if (name == "shortest-path-tree") return TreeStrategy::ShortestPathTree;
    if (name == "low-stretch-heuristic") return TreeStrategy::LowStretchHeuristic;
    throw Error(ErrorCode::UnsupportedMode, "unknown tree strategy '" + name + "'");
}

std::string to_string(TreeStrategy s) {
    switch (s) {
        case TreeStrategy::RandomMst: return "random-mst";
        case TreeStrategy::ShortestPathTree: return "shortest-path-tree";
        case TreeStrategy::LowStretchHeuristic: return "low-stretch-heuristic";
    }
    return "unknown";
}

Graph sample_subtree(const Graph& g, TreeStrategy strategy, std::uint64_t seed, std::span<const double> edge_weights) {
    if (!g.is_connected()) throw Error(ErrorCode::DisconnectedGraph, "spanning trees need a connected graph");
    switch (strategy) {
        case TreeStrategy::RandomMst: return random_mst(g, seed);
        case TreeStrategy::ShortestPathTree: return bfs_tree(g, static_cast<Vertex>(seed % g.vertex_count()));
        case TreeStrategy::LowStretchHeuristic: break;
    }
    const bool weighted = !edge_weights.empty();
    std::vector<Graph> candidates;
    for (Vertex r = 0; r < g.vertex_count(); ++r) candidates.push_back(bfs_tree(g, r));
    const Rng base(seed);
    for (std::size_t i = 0; i < kLowStretchRandomCandidates; ++i)
        candidates.push_back(random_mst(g, base.split(i).seed()));
    std::vector<double> scores(candidates.size());
    kernels::parallel::for_each_index(candidates.size(), [&](std::size_t i) {
        scores[i] = score(stretch(g, candidates[i], edge_weights), weighted);
    });
    const auto best = std::min_element(scores.begin(), scores.end()) - scores.begin();
    return candidates[static_cast<std::size_t>(best)];
}

void require_spanning_subtree(const Graph& g, const Graph& t) {
    if (t.vertex_count() != g.vertex_count() || !t.is_tree())
        throw Error(ErrorCode::NotSpanning, "not a spanning tree of the graph");
    for (const auto& e : t.edges())
        if (!g.has_edge(e.u, e.v)) throw Error(ErrorCode::NotSpanning, "tree edge missing from the graph");
}

Stretch stretch(const Graph& g, const Graph& t, std::span<const double> edge_weights) {
    require_spanning_subtree(g, t);
    if (!edge_weights.empty() && edge_weights.size() != g.edge_count())
        throw Error(ErrorCode::ShapeMismatch, "edge weights must match the edge count");
    const std::size_t n = g.vertex_count();
    const auto dg = kernels::parallel::all_pairs_bfs(g);
    const auto dt = kernels::parallel::all_pairs_bfs(t);
    Stretch s;
    double sum = 0.0;
    double worst = 1.0;
    std::size_t pairs = 0;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            const double r = static_cast<double>(dt[u * n + v]) / dg[u * n + v];
            sum += r;
            worst = std::max(worst, r);
            ++pairs;
        }
    }
    if (pairs > 0) s.avg = sum / static_cast<double>(pairs);
    s.max = worst;
    double wsum = 0.0;
    double wtot = 0.0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const int len = dt[g.edge(e).u * n + g.edge(e).v];
        s.max_edge_stretch = std::max(s.max_edge_stretch, len);
        const double w = edge_weights.empty() ? 1.0 : edge_weights[e];
        wsum += w * len;
        wtot += w;
    }
    s.weighted_avg = wtot > 0.0 ? wsum / wtot : 1.0;
    return s;
}

std::vector<std::size_t> tree_path_edges(const Graph& t, Vertex u, Vertex v) {
    const auto path = t.shortest_path(u, v);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) out.push_back(*t.edge_index(path[i], path[i + 1]));
    return out;
}

std::vector<int> tree_edge_lengths(const Graph& g, const Graph& t) {
    require_spanning_subtree(g, t);
    std::vector<int> out(g.edge_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e)
        out[e] = static_cast<int>(tree_path_edges(t, g.edge(e).u, g.edge(e).v).size());
    return out;
}

std::vector<double> transfer_solution(const Graph& g, const Graph& t, std::span<const double> x) {
    return transfer_impl<double>(g, t, x);
}

std::vector<Demand> transfer_solution(const Graph& g, const Graph& t, std::span<const Demand> x) {
    return transfer_impl<Demand>(g, t, x);
}

TransferReport verify_transfer(const Graph& g, const Graph& t, const BValueSpec& spec, const SolveOptions& opts) {
    TransferReport r;
    r.stretch = stretch(g, t);
    const auto lp_g = build_lower_lp(g, spec);
    const auto sol_g = solve(lp_g, opts);
    r.lp_g = sol_g.objective;
    const auto x_t = transfer_solution(g, t, std::span<const double>(sol_g.values));
    const auto lp_t = build_lower_lp(t, spec);
    r.lp_t = solve(lp_t, opts).objective;
    r.cost_x = std::accumulate(sol_g.values.begin(), sol_g.values.end(), 0.0);
    r.cost_transferred = std::accumulate(x_t.begin(), x_t.end(), 0.0);
    r.min_slack = min_slack(lp_t, x_t);  // +inf when LP^L(T) has no rows
    r.feasible = r.min_slack >= -opts.tolerance;
    // cost(x') = sum_e d_T(e) x_e and every d_T(e) <= max stretch, so the bound holds term by term
    const auto lengths = tree_edge_lengths(g, t);
    r.cost_bounded = std::all_of(lengths.begin(), lengths.end(), [&](int len) { return len <= r.stretch.max_edge_stretch; });
    r.cost_bounded = r.cost_bounded && r.cost_transferred <= r.stretch.max * r.cost_x + opts.tolerance;
    r.lp_bounded = r.lp_t <= r.cost_transferred + opts.tolerance;
    r.ratio_bounded = r.lp_t <= r.stretch.max * r.lp_g + opts.tolerance;
    return r;
}

}  // namespace topocc

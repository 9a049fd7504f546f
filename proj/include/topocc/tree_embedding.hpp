#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "topocc/cuts.hpp"
#include "topocc/graph.hpp"
#include "topocc/lp.hpp"

namespace topocc {

enum class TreeStrategy { RandomMst, ShortestPathTree, LowStretchHeuristic };

/// "random-mst", "shortest-path-tree", "low-stretch-heuristic".
TreeStrategy parse_tree_strategy(const std::string& name);
std::string to_string(TreeStrategy s);

inline constexpr std::size_t kLowStretchRandomCandidates = 32;

/// Spanning subtree of g. ShortestPathTree roots at seed mod |V|.
/// LowStretchHeuristic keeps the candidate with the smallest weighted
/// stretch against `edge_weights` (plain average stretch when empty).
Graph sample_subtree(const Graph& g, TreeStrategy strategy, std::uint64_t seed,
                     std::span<const double> edge_weights = {});

struct Stretch {
    double avg = 1.0;
    double max = 1.0;
    double weighted_avg = 1.0;
    /// max is attained on an edge of g, so it is an integer.
    int max_edge_stretch = 1;
};

/// Throws NotSpanning unless t is a spanning tree of g (as a subgraph).
void require_spanning_subtree(const Graph& g, const Graph& t);

Stretch stretch(const Graph& g, const Graph& t, std::span<const double> edge_weights = {});

/// Edge indices of t on the unique u-v path.
std::vector<std::size_t> tree_path_edges(const Graph& t, Vertex u, Vertex v);

/// d_T(u, v) for every edge (u, v) of g, by g's edge index.
std::vector<int> tree_edge_lengths(const Graph& g, const Graph& t);

/// x'_{e'} = sum over edges (u,v) of g whose tree path uses e' of x_{(u,v)}.
std::vector<double> transfer_solution(const Graph& g, const Graph& t, std::span<const double> x);
std::vector<Demand> transfer_solution(const Graph& g, const Graph& t, std::span<const Demand> x);

struct TransferReport {
    double lp_g = 0.0;
    double lp_t = 0.0;
    double cost_x = 0.0;
    double cost_transferred = 0.0;
    Stretch stretch;
    double min_slack = 0.0;
    bool feasible = false;       // x' satisfies every LP^L(T) row
    bool cost_bounded = false;   // cost(x') <= max stretch * cost(x), term by term
    bool lp_bounded = false;     // LP^L(T) <= cost(x')
    bool ratio_bounded = false;  // LP^L(T) / LP^L(G) <= max stretch

    [[nodiscard]] bool ok() const { return feasible && cost_bounded && lp_bounded && ratio_bounded; }
};

TransferReport verify_transfer(const Graph& g, const Graph& t, const BValueSpec& spec, const SolveOptions& opts = {});

}  // namespace topocc

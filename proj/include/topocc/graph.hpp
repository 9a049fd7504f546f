#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace topocc {

using Vertex = std::uint32_t;
using VertexSet = boost::dynamic_bitset<>;

struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

using VertexPair = std::pair<Vertex, Vertex>;

VertexSet make_vertex_set(std::size_t n, std::span<const Vertex> members);
std::vector<Vertex> members(const VertexSet& s);

/// Undirected, unit-weight, simple graph. Edges are normalized to u < v and
/// kept sorted, so edge indices are stable and reproducible.
class Graph {
public:
    Graph() = default;
    Graph(std::size_t vertex_count, std::vector<Edge> edges);

    [[nodiscard]] std::size_t vertex_count() const noexcept { return n_; }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const Edge& edge(std::size_t i) const { return edges_[i]; }
    [[nodiscard]] std::span<const Vertex> neighbors(Vertex v) const;
    [[nodiscard]] std::optional<std::size_t> edge_index(Vertex a, Vertex b) const;
    [[nodiscard]] bool has_edge(Vertex a, Vertex b) const { return edge_index(a, b).has_value(); }

    [[nodiscard]] bool is_connected() const;
    [[nodiscard]] bool is_tree() const { return n_ > 0 && edges_.size() + 1 == n_ && is_connected(); }

    /// BFS hop distances from `source`; -1 marks unreachable vertices.
    [[nodiscard]] std::vector<int> bfs(Vertex source) const;
    /// Multi-source BFS: distance to the nearest member of `sources`.
    [[nodiscard]] std::vector<int> bfs(std::span<const Vertex> sources) const;
    /// A shortest path from `from` to `to` as a vertex sequence. Among equal
    /// length paths the one found by BFS with sorted adjacency wins.
    [[nodiscard]] std::vector<Vertex> shortest_path(Vertex from, Vertex to) const;

    /// Same graph with vertex v renamed to perm[v].
    [[nodiscard]] Graph relabeled(std::span<const Vertex> perm) const;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> adjacency_;
    std::vector<std::size_t> adjacency_edge_;
};

/// Row-major |V| x |V| hop-distance matrix.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t n, std::vector<int> data) : n_(n), data_(std::move(data)) {}

    [[nodiscard]] int operator()(Vertex u, Vertex v) const { return data_[static_cast<std::size_t>(u) * n_ + v]; }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] const std::vector<int>& data() const noexcept { return data_; }

private:
    std::size_t n_ = 0;
    std::vector<int> data_;
};

/// Terminal groups K_1..K_t. A vertex may sit in several groups (each
/// occurrence is an independent input slot) but at most once per group.
struct GroupedTerminals {
    std::vector<std::vector<Vertex>> groups;
    std::optional<std::vector<std::vector<VertexPair>>> matchings;

    [[nodiscard]] std::size_t group_count() const noexcept { return groups.size(); }
    [[nodiscard]] std::size_t slot_count() const;
    /// Distinct terminal vertices across all groups, sorted.
    [[nodiscard]] std::vector<Vertex> flat() const;
    /// Every slot's vertex in (group, position) order, repeats kept.
    [[nodiscard]] std::vector<Vertex> multiset() const;
    [[nodiscard]] bool has_matchings() const noexcept { return matchings.has_value(); }

    /// Throws InvalidTerminals / OddTerminalCount / OverlappingPairs.
    void validate(const Graph& g) const;
};

struct SteinerTree {
    std::vector<Edge> edges;
    int cost = 0;
    bool spans_terminals = false;

    [[nodiscard]] std::vector<Vertex> vertices() const;
};

struct WeightedEdge {
    Vertex u = 0;
    Vertex v = 0;
    int weight = 0;
};

struct MetricClosure {
    std::vector<Vertex> terminals;
    std::vector<WeightedEdge> edges;
};

struct Median {
    int value = 0;
    Vertex median = 0;
};

struct WorstMatching {
    std::vector<VertexPair> pairs;
    int value = 0;
    bool heuristic = false;
};

inline constexpr std::size_t kSteinerExactMaxVertices = 12;
inline constexpr std::size_t kWorstMatchingExactMaxTerminals = 10;

DistanceMatrix shortest_path_matrix(const Graph& g);

MetricClosure metric_closure(const Graph& g, std::span<const Vertex> terminals);

/// Kruskal MST over the closure; edges ordered by (weight, u, v).
std::vector<WeightedEdge> closure_mst(const MetricClosure& closure);
int closure_mst_cost(const Graph& g, std::span<const Vertex> terminals);

SteinerTree steiner_tree_approx(const Graph& g, std::span<const Vertex> terminals);
SteinerTree steiner_tree_exact(const Graph& g, std::span<const Vertex> terminals);

Median sigma(const Graph& g, std::span<const Vertex> terminals);
/// Per-group nearest-terminal status; also reports the median and the
/// per-group representatives achieving it.
struct GroupedMedian {
    int value = 0;
    Vertex median = 0;
    std::vector<Vertex> representatives;
};
GroupedMedian sigma_grouped_detail(const Graph& g, const GroupedTerminals& groups);
int sigma_grouped(const Graph& g, const GroupedTerminals& groups);

int matching_distance(const Graph& g, std::span<const VertexPair> pairs);
WorstMatching worst_case_matching(const Graph& g, std::span<const Vertex> terminals);

}  // namespace topocc

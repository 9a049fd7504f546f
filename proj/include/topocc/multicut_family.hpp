#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "topocc/cuts.hpp"
#include "topocc/graph.hpp"

namespace topocc {

/// B_G(S, r): vertices within distance r of some member of S.
VertexSet ball(const Graph& g, const VertexSet& s, int r);

/// A partition of the terminal set; parts ordered by smallest member.
using TerminalPartition = std::vector<VertexSet>;

/// S_1 .. S_{t+1}: S_1 is the terminal singletons, S_{i+1} the connected
/// components of the "radius-i balls intersect" graph on S_i.
std::vector<TerminalPartition> build_partition_sequence(const Graph& g, std::span<const Vertex> terminals);

/// C_1 .. C_t with C_i = { B(S, i-1) : S in S_i }.
std::vector<Multicut> build_multicuts(const Graph& g, std::span<const Vertex> terminals);

struct MulticutCollection {
    /// Position of the first multicut in the C_1 .. C_t sequence (1-based).
    std::size_t first_step = 1;
    std::vector<Multicut> multicuts;
};

struct MulticutFamily {
    std::vector<MulticutCollection> collections;
    std::size_t terminal_count = 0;
    /// alpha = 1/3, kept as a fraction so checks stay exact.
    std::size_t alpha_num = 1;
    std::size_t alpha_den = 3;

    [[nodiscard]] std::size_t ell() const noexcept { return collections.size(); }
};

MulticutFamily chunk_into_family(const Graph& g, std::span<const Vertex> terminals);

/// Explicit sets of `last` that contain exactly one explicit set of `first`.
std::size_t singleton_count(const Multicut& first, const Multicut& last);

/// Smallest m with (3/2)^m >= k, plus one.
std::size_t family_length_bound(std::size_t k);

struct CollectionCheck {
    bool containment = true;
    bool disjointness = true;
    bool singleton = true;
    std::size_t first_size = 0;
    std::size_t singletons = 0;
};

struct FamilyReport {
    std::vector<CollectionCheck> collections;
    bool length_bound = true;
    bool first_is_terminal_singletons = true;

    [[nodiscard]] bool ok() const;
};

FamilyReport verify_family(const Graph& g, const MulticutFamily& fam, std::span<const Vertex> terminals = {});

struct FamilyCost {
    std::size_t sum_sizes = 0;
    int mst_closure_cost = 0;
    int st_approx = 0;
    std::optional<int> st_exact;
    /// 2 * sum_sizes >= mst_closure_cost
    bool ok = false;
};

FamilyCost family_cost_check(const Graph& g, std::span<const Vertex> terminals);

/// Borůvka's algorithm on the metric closure of the terminals; ties broken
/// by (weight, u, v).
std::vector<WeightedEdge> boruvka_mst(const MetricClosure& closure);

/// Components of the terminals joined by `forest` edges of weight <= w.
TerminalPartition threshold_partition(std::size_t n, std::span<const Vertex> terminals,
                                      std::span<const WeightedEdge> forest, int w);

}  // namespace topocc

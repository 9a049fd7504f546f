#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "topocc/graph.hpp"

namespace topocc {

/// Per-cut demand value b^i(C).
using Demand = boost::rational<std::int64_t>;

inline double to_double(const Demand& d) { return boost::rational_cast<double>(d); }

/// Bipartition of V, stored by the side that contains vertex 0.
class Cut {
public:
    /// Accepts either side; throws InvalidCut unless 0 < |side| < |V|.
    static Cut from_side(VertexSet side);
    static Cut from_members(std::size_t n, std::span<const Vertex> side);

    [[nodiscard]] const VertexSet& side() const noexcept { return side_; }
    [[nodiscard]] VertexSet complement() const { return ~side_; }
    [[nodiscard]] std::size_t vertex_count() const noexcept { return side_.size(); }
    [[nodiscard]] bool on_side(Vertex v) const { return side_[v]; }
    [[nodiscard]] bool separates(Vertex a, Vertex b) const { return side_[a] != side_[b]; }

    friend bool operator==(const Cut&, const Cut&) = default;

private:
    explicit Cut(VertexSet side) : side_(std::move(side)) {}
    VertexSet side_;
};

/// Partition-style cut: explicit sets plus the implicit complement.
class Multicut {
public:
    Multicut(std::size_t n, std::vector<VertexSet> explicit_sets);

    [[nodiscard]] std::size_t size() const noexcept { return sets_.size(); }
    [[nodiscard]] std::size_t vertex_count() const noexcept { return n_; }
    [[nodiscard]] const std::vector<VertexSet>& explicit_sets() const noexcept { return sets_; }
    [[nodiscard]] VertexSet implicit_set() const;
    /// Index of the explicit set holding v, or size() for the implicit set.
    [[nodiscard]] std::size_t part_of(Vertex v) const { return owner_[v]; }

private:
    std::size_t n_ = 0;
    std::vector<VertexSet> sets_;
    std::vector<std::size_t> owner_;
};

enum class DemandFamily { Steiner, Median, Matching, Grouped, Custom };

/// The l demand functions of a cut LP. `steiner_sets` is filled for the
/// Steiner family only; it enables min-cut separation in the LP engine.
struct BValueSpec {
    std::string label;
    DemandFamily family = DemandFamily::Custom;
    std::vector<std::function<Demand(const Cut&)>> terms;
    std::vector<std::vector<Vertex>> steiner_sets;

    [[nodiscard]] std::size_t size() const noexcept { return terms.size(); }
    [[nodiscard]] Demand total(const Cut& c) const;
};

int b_steiner(const Cut& c, std::span<const Vertex> terminals);
int b_mdn(const Cut& c, std::span<const Vertex> terminals);
int b_match(const Cut& c, std::span<const VertexPair> pairs);
int b_grouped(const Cut& c, const GroupedTerminals& groups);

/// One Steiner term per terminal set.
BValueSpec steiner_spec(std::vector<std::vector<Vertex>> sets);
/// One min-side-count term per terminal set.
BValueSpec mdn_spec(std::vector<std::vector<Vertex>> sets);
/// One matching term per pair list.
BValueSpec match_spec(std::vector<std::vector<VertexPair>> matchings);
/// Single term counting the separated groups.
BValueSpec grouped_spec(GroupedTerminals groups);
BValueSpec zero_spec(std::size_t terms = 1);

inline constexpr std::size_t kCutEnumerationMaxVertices = 16;
inline constexpr std::size_t kSubadditivityMaxVertices = 12;

/// Calls fn on each unordered bipartition once (2^{|V|-1} - 1 cuts).
void for_each_cut(const Graph& g, const std::function<void(const Cut&)>& fn);
std::vector<Cut> enumerate_cuts(const Graph& g);

std::vector<std::size_t> crossing_edges(const Graph& g, const Cut& c);
std::vector<std::size_t> crossing_edges(const Graph& g, const Multicut& c);

struct SubadditivityViolation {
    VertexSet s1;
    VertexSet s2;
    std::size_t term = 0;
    Demand b1, b2, b3;
};

struct SubadditivityReport {
    std::uint64_t triples_checked = 0;
    std::vector<SubadditivityViolation> violations;
    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

SubadditivityReport check_subadditive(const Graph& g, const BValueSpec& spec, std::size_t max_report = 64);

struct BourgainOptions {
    std::size_t retry_budget = 64;
    /// Random subsets drawn per scale; 0 means ceil(log2 |V|) + 1.
    std::size_t subsets_per_scale = 0;
    /// Drop cuts whose removal keeps every separation requirement.
    bool prune = true;
};

struct BourgainCollection {
    std::vector<Cut> cuts;
    int beta = 0;
    std::size_t attempts = 0;
};

/// Number of cuts in `cuts` separating u and v, for every pair (row-major).
std::vector<int> separation_counts(std::size_t n, std::span<const Cut> cuts);
/// True iff every pair (u, v) is separated by at least d_G(u, v) cuts.
bool separates_by_distance(const Graph& g, std::span<const Cut> cuts);
/// Largest number of cuts crossing any single edge.
int max_edge_load(const Graph& g, std::span<const Cut> cuts);

BourgainCollection bourgain_cut_collection(const Graph& g, std::uint64_t seed, const BourgainOptions& opts = {});

}  // namespace topocc

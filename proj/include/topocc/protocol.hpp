#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "topocc/cuts.hpp"
#include "topocc/graph.hpp"
#include "topocc/rng.hpp"

namespace topocc {

using BitString = boost::dynamic_bitset<>;

/// values[group][position] is the n-bit input of that terminal slot.
struct InputAssignment {
    std::size_t n = 0;
    std::vector<std::vector<BitString>> values;

    [[nodiscard]] const BitString& at(std::size_t group, std::size_t pos) const { return values[group][pos]; }
    /// Throws ShapeMismatch unless every slot of `groups` holds n bits.
    void validate(const GroupedTerminals& groups) const;
};

/// Per-edge, per-direction bit counters. Every send is charged to exactly
/// one direction of one edge; multi-hop routes are charged hop by hop.
class Network {
public:
    explicit Network(const Graph& g);

    void send(Vertex from, Vertex to, std::size_t bits);
    /// Sends `bits` along a vertex path, one hop at a time.
    void route(const std::vector<Vertex>& path, std::size_t bits);

    [[nodiscard]] const Graph& graph() const noexcept { return *g_; }
    [[nodiscard]] const std::vector<std::uint64_t>& forward() const noexcept { return forward_; }
    [[nodiscard]] const std::vector<std::uint64_t>& backward() const noexcept { return backward_; }
    [[nodiscard]] std::uint64_t total() const noexcept { return total_; }
    /// Synchronous rounds: a message can leave a vertex one round after the
    /// last message it depended on arrived.
    [[nodiscard]] std::size_t rounds() const noexcept { return rounds_; }

private:
    const Graph* g_;
    std::vector<std::uint64_t> forward_;   // u -> v with u < v
    std::vector<std::uint64_t> backward_;  // v -> u
    std::vector<std::size_t> ready_;
    std::uint64_t total_ = 0;
    std::size_t rounds_ = 0;
};

enum class ProtocolKind { XorAggregate, EqualityHash, EdMedian, DisjAnd, EdXor, XorEd, XorIp, Silent };

ProtocolKind parse_protocol(const std::string& name);
std::string to_string(ProtocolKind kind);

struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::XorAggregate;
    /// Input length; 0 takes it from the assignment.
    std::size_t n = 0;
    /// 0 selects the protocol default.
    std::size_t hash_bits = 0;
};

inline constexpr std::size_t kEqualityHashBits = 2;
inline constexpr std::size_t kEdHashConstant = 4;

/// c * max(1, ceil(log2 k)) with c = 4.
std::size_t default_ed_hash_bits(std::size_t k);

struct ProtocolTrace {
    std::string protocol;
    std::uint64_t seed = 0;
    std::map<std::string, std::uint64_t> params;
    /// Indexed like graph edges: bits_uv[e] travels edge(e).u -> edge(e).v.
    std::vector<Edge> edges;
    std::vector<std::uint64_t> bits_uv;
    std::vector<std::uint64_t> bits_vu;
    std::uint64_t total = 0;
    bool output = false;
    /// Full aggregate for xor_aggregate / disj_and (the xor, resp. the AND);
    /// `output` is then "xor is nonzero", resp. "intersection is empty".
    BitString output_value;
    /// DISJ only: the intersecting indicator, stored next to output (1 = disjoint).
    std::optional<bool> output_negated;
    Vertex output_vertex = 0;
    std::size_t rounds = 0;
    /// Bits charged per protocol stage, e.g. "pair_exchange", "aggregation", "fold".
    std::map<std::string, std::uint64_t> stage_bits;

    [[nodiscard]] std::uint64_t edge_total(std::size_t e) const { return bits_uv[e] + bits_vu[e]; }
};

/// Runs one protocol. Deterministic in (inputs, seed); the seed drives the
/// public coins. Throws ShapeMismatch on group/matching/input shape errors.
ProtocolTrace run(const Graph& g, const GroupedTerminals& groups, const ProtocolSpec& spec,
                  const InputAssignment& inputs, std::uint64_t seed);

/// Hash bits `run` uses for spec on these groups.
std::size_t resolved_hash_bits(const ProtocolSpec& spec, const GroupedTerminals& groups);

/// Cost formula of each protocol. `exact` means every run costs exactly
/// `value`; otherwise `value` is an upper bound.
struct CostBound {
    std::uint64_t value = 0;
    bool exact = false;
};
CostBound cost_bound(const Graph& g, const GroupedTerminals& groups, const ProtocolSpec& spec, std::size_t n);

// Direct evaluation of the computed functions.
BitString xor_all(const std::vector<BitString>& xs);
BitString and_all(const std::vector<BitString>& xs);
/// 1 iff no coordinate is 1 in every string.
bool disjoint(const std::vector<BitString>& xs);
bool all_equal(const std::vector<BitString>& xs);
bool all_distinct(const std::vector<BitString>& xs);
/// Inner product over a matching: parity of the bits of xor_{(u,v)} (X_u & X_v).
bool inner_product(const GroupedTerminals& groups, const InputAssignment& in, std::size_t group);
/// The function `kind` computes on `in` (XorAggregate: the xor is nonzero).
bool expected_output(const GroupedTerminals& groups, ProtocolKind kind, const InputAssignment& in);
BitString expected_xor(const InputAssignment& in, std::size_t group = 0);

/// Bits on the crossing edges of c, both directions.
std::uint64_t cut_projection(const Graph& g, const ProtocolTrace& trace, const Cut& c);

using Sampler = std::function<InputAssignment(std::uint64_t seed)>;

struct FeasibilityViolation {
    VertexSet side;
    double mass = 0.0;       // mean crossing bits / scale
    double demand = 0.0;     // sum_i b^i(C)
    double tolerance = 0.0;  // three standard errors / scale
};

struct FeasibilityReport {
    std::vector<double> mean_edge_bits;
    std::vector<double> stderr_edge_bits;
    std::size_t runs = 0;
    std::size_t cuts_checked = 0;
    bool deterministic = false;
    double error_rate = 0.0;
    std::vector<FeasibilityViolation> violations;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

/// Mean per-edge communication over `runs` seeded samples, scaled by
/// 1/scale, checked against every LP^L cut row of `spec`.
FeasibilityReport measured_vector_feasibility(const Graph& g, const GroupedTerminals& groups, const ProtocolSpec& spec,
                                              const Sampler& sampler, std::size_t runs, const BValueSpec& demands,
                                              double scale, std::uint64_t seed);

/// Stream seeds used for run r of a batch: inputs first, public coins second.
std::uint64_t input_seed(std::uint64_t seed, std::size_t run);
std::uint64_t coin_seed(std::uint64_t seed, std::size_t run);

}  // namespace topocc

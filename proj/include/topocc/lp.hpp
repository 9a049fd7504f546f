#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "topocc/cuts.hpp"
#include "topocc/graph.hpp"

namespace topocc {

enum class LPKind { Lower, Upper };

struct LPConstraint {
    VertexSet side;
    std::size_t copy = 0;
    std::vector<std::size_t> vars;
    Demand rhs;
};

/// LP^L has one variable per edge and one row per cut with positive total
/// demand; LP^U has a block of |E| variables per demand term and a row per
/// (term, cut). Rows are materialized when cut enumeration is affordable.
struct LPInstance {
    LPKind kind = LPKind::Lower;
    Graph graph;
    std::string label;
    std::size_t copies = 1;
    std::vector<LPConstraint> constraints;
    bool materialized = false;
    /// Steiner terminal sets, one per copy (or one for a single-term LP^L);
    /// present iff min-cut separation is available.
    std::vector<std::vector<Vertex>> steiner_sets;

    [[nodiscard]] std::size_t edge_count() const { return graph.edge_count(); }
    [[nodiscard]] std::size_t variable_count() const { return copies * graph.edge_count(); }
    [[nodiscard]] std::string variable_name(std::size_t var) const;
};

enum class SolveMode { Enumerate, Generate };

struct SolveOptions {
    bool exact_rational = false;
    std::size_t max_rounds = 10000;
    double tolerance = 1e-6;
};

enum class SolveStatus { Optimal };

struct LPSolution {
    std::vector<double> values;
    double objective = 0.0;
    /// Exact optimum as "p/q" when solved in rational mode.
    std::optional<std::string> exact_objective;
    double feasibility_margin = 0.0;
    SolveStatus status = SolveStatus::Optimal;
    std::size_t rounds = 0;
    std::size_t active_rows = 0;
};

inline constexpr std::size_t kExactRationalMaxEdges = 12;

LPInstance build_lower_lp(const Graph& g, const BValueSpec& spec);
LPInstance build_upper_lp(const Graph& g, const BValueSpec& spec);

/// Cutting-plane solve. Enumerate separates by scanning every materialized
/// row; Generate separates by terminal-pair minimum cuts (Steiner only).
LPSolution solve(const LPInstance& lp, SolveMode mode, const SolveOptions& opts = {});
/// Generate when Steiner separation exists and rows are not materialized.
LPSolution solve(const LPInstance& lp, const SolveOptions& opts = {});

/// Smallest slack over every row of `lp` at x (both LP kinds).
double min_slack(const LPInstance& lp, const std::vector<double>& x);

double lp_st(const Graph& g, std::span<const Vertex> terminals, const SolveOptions& opts = {});
double lp_mdn(const Graph& g, std::span<const Vertex> terminals, const SolveOptions& opts = {});
double lp_mtch(const Graph& g, std::span<const VertexPair> pairs, const SolveOptions& opts = {});

/// Sum over tree edges e of sum_i b^i(C_e).
Demand tree_closed_form(const Graph& tree, const BValueSpec& spec);

enum class RoutingMode { Steiner, Matching };

struct RoutingAssignment {
    /// values[i * |E| + e] = x_{i,e}
    std::vector<double> values;
    int cost = 0;
    /// Checked against every row when |V| allows enumeration.
    std::optional<bool> feasible;
    BValueSpec spec;
};

RoutingAssignment upper_lp_by_routing(const Graph& g, const GroupedTerminals& groups, RoutingMode mode);

struct GapReport {
    double lower = 0.0;
    double upper = 0.0;
    double ratio = 1.0;
    bool infinite = false;
};

GapReport gap_report(const Graph& g, const BValueSpec& spec, const SolveOptions& opts = {});

/// CPLEX-style LP text: Minimize / Subject To / Bounds / End.
std::string to_lp_format(const LPInstance& lp);

}  // namespace topocc

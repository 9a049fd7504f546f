#include "topocc/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "topocc/cuts.hpp"
#include "topocc/lp.hpp"
#include "topocc/multicut_family.hpp"
#include "topocc/protocol.hpp"
#include "topocc/tree_embedding.hpp"

namespace topocc {

namespace {

std::size_t ceil_log2(std::size_t k) {
    std::size_t b = 0;
    while ((std::size_t{1} << b) < k) ++b;
    return b;
}

Json lp_field(const Graph& g, const BValueSpec& spec, const std::string& source, const BoundsOptions& opts) {
    const auto lp = build_lower_lp(g, spec);
    const bool exact = opts.exact_rational && g.edge_count() <= kExactRationalMaxEdges;
    const auto sol = solve(lp, SolveOptions{.exact_rational = exact});
    Json out = field(sol.objective, source, exact ? Mode::Exact : Mode::Lp);
    if (sol.exact_objective) out["exact"] = *sol.exact_objective;
    return out;
}

}  // namespace

Json bounds_report(const Instance& inst, const BoundsOptions& opts) {
    const Graph& g = inst.graph;
    const auto& groups = inst.groups;
    const auto& k = groups.groups.at(0);
    const bool small = g.vertex_count() <= kSteinerExactMaxVertices;
    const bool enumerable = g.vertex_count() <= kCutEnumerationMaxVertices;

    Json q = Json::object();
    const int st_approx = steiner_tree_approx(g, k).cost;
    q["st_approx"] = field(st_approx, "Steiner tree via MST of the metric closure (2-approximation)", Mode::Heuristic);
    std::optional<int> st_exact;
    if (small) {
        st_exact = steiner_tree_exact(g, k).cost;
        q["st_exact"] = field(*st_exact, "Steiner tree, exhaustive search over Steiner points", Mode::Exact);
    }
    q["mst_closure"] = field(closure_mst_cost(g, k), "MST of the terminal metric closure", Mode::Exact);
    const auto med = sigma(g, k);
    q["sigma"] = field(med.value, "1-median status min_v sum_u d(v,u)", Mode::Exact);
    q["sigma"]["median"] = med.median;
    const auto gmed = sigma_grouped_detail(g, groups);
    q["sigma_grouped"] = field(gmed.value, "1-median status with one representative per group", Mode::Exact);
    q["sigma_grouped"]["representatives"] = gmed.representatives;
    if (k.size() % 2 == 0) {
        const auto wm = worst_case_matching(g, k);
        q["worst_matching"] = field(wm.value, "largest d(G,M) over perfect matchings of K",
                                    wm.heuristic ? Mode::Heuristic : Mode::Exact);
    }
    if (groups.matchings) {
        Json d = Json::array();
        for (const auto& m : *groups.matchings) d.push_back(matching_distance(g, m));
        q["matching_distance"] = field(d, "d(G,M_i) = sum of pair distances, per group", Mode::Exact);
    }

    q["lp_st"] = lp_field(g, steiner_spec({k}), "Steiner cut-covering LP", opts);
    if (enumerable) {
        q["lp_mdn"] = lp_field(g, mdn_spec({k}), "min-side terminal count cut LP", opts);
        if (groups.matchings && !(*groups.matchings)[0].empty())
            q["lp_mtch"] = lp_field(g, match_spec({(*groups.matchings)[0]}), "matching-separation cut LP", opts);
        const auto gap = gap_report(g, steiner_spec(groups.groups));
        q["lp_lower_steiner_groups"] = field(gap.lower, "single-copy cut LP over all Steiner groups", Mode::Lp);
        q["lp_upper_steiner_groups"] = field(gap.upper, "per-group copy cut LP over all Steiner groups", Mode::Lp);
    }

    // measured parameters standing in for asymptotic log factors
    const auto bc = bourgain_cut_collection(g, opts.seed);
    q["beta"] = field(bc.beta, "max edge load of a distance-separating cut collection", Mode::Measured);
    const Graph tree = sample_subtree(g, TreeStrategy::LowStretchHeuristic, opts.seed);
    const auto st = stretch(g, tree);
    q["tree_stretch"] = field(Json{{"avg", st.avg}, {"max", st.max}}, "stretch of the low-stretch subtree heuristic",
                              Mode::Measured);
    const auto fam = chunk_into_family(g, k);
    q["family_length"] = field(fam.ell(), "collections in the chunked multicut family", Mode::Exact);

    const std::size_t n = opts.n;
    Json params{{"n", n}, {"groups", groups.group_count()}, {"slots", groups.slot_count()}};

    std::uint64_t sum_sigma = 0;
    for (const auto& grp : groups.groups) sum_sigma += static_cast<std::uint64_t>(sigma(g, grp).value);

    // protocol costs; tree-based ones route over the 2-approximate Steiner tree
    const std::vector<std::pair<ProtocolKind, std::string>> protocols{
        {ProtocolKind::XorAggregate, "XOR_n folded over the Steiner tree: n * |E(tree)|"},
        {ProtocolKind::DisjAnd, "DISJ by a running AND over the Steiner tree: n * |E(tree)|"},
        {ProtocolKind::EqualityHash, "Equality: flag bit plus hash per tree edge: (1 + hb) * |E(tree)|"},
        {ProtocolKind::EdMedian, "hashed ED routed to the median: hb * sigma"},
        {ProtocolKind::EdXor,
         "ED o XOR: group xor of linear hashes up and down each group tree, then ED at the grouped median: "
         "hb * (sigma_grouped + 2 sum |E(T_i)|)"},
        {ProtocolKind::XorEd, "XOR_1 o ED: hashed ED per group at its median, then a 1-bit fold: "
                              "hb * sum sigma_i + |E(tree over medians)|"},
        {ProtocolKind::XorIp, "XOR o IP: pair exchange n * sum d(G,M_i), xor aggregation per group, 1-bit fold"},
    };
    Json up = Json::object();
    for (const auto& [kind, source] : protocols) {
        const bool single = kind == ProtocolKind::XorAggregate || kind == ProtocolKind::DisjAnd ||
                            kind == ProtocolKind::EqualityHash || kind == ProtocolKind::EdMedian;
        if (kind == ProtocolKind::XorIp && !groups.matchings) continue;
        const GroupedTerminals scope = single ? GroupedTerminals{{k}, std::nullopt} : groups;
        const ProtocolSpec spec{kind, n, 0};
        const auto b = cost_bound(g, scope, spec, n);
        Json f = field(b.value, source, kind == ProtocolKind::EdMedian ? Mode::Exact : Mode::Heuristic);
        f["relation"] = b.exact ? "equal" : "upper";
        if (kind == ProtocolKind::EqualityHash || kind == ProtocolKind::EdMedian || kind == ProtocolKind::EdXor ||
            kind == ProtocolKind::XorEd)
            f["hash_bits"] = resolved_hash_bits(spec, scope);
        up[to_string(kind)] = f;
    }

    Json lo = Json::object();
    const double st_value = st_exact ? *st_exact : st_approx;
    const Mode st_mode = st_exact ? Mode::Measured : Mode::Heuristic;
    lo["xor"] = field(static_cast<double>(n) * st_value, "XOR_n: ST(G,K) * n", st_mode);
    lo["ed"] = field(static_cast<double>(med.value) / bc.beta, "ED: sigma_K / beta", Mode::Measured);
    double sum_group_st = 0.0;
    for (const auto& grp : groups.groups)
        sum_group_st += small ? steiner_tree_exact(g, grp).cost : steiner_tree_approx(g, grp).cost;
    lo["ed_xor"] = field(static_cast<double>(gmed.value) / bc.beta + sum_group_st / st.avg,
                         "ED o XOR: sigma_grouped / beta + sum ST(G,K_i) / avg stretch", st_mode);
    const double rep_st = small ? steiner_tree_exact(g, gmed.representatives).cost
                                : steiner_tree_approx(g, gmed.representatives).cost;
    lo["xor_ed"] = field(rep_st + static_cast<double>(sum_sigma) / bc.beta,
                         "XOR_1 o ED: ST(G,{u_i}) + sum sigma_i / beta, u_i the grouped-median representatives",
                         st_mode);
    double family_mass = 0.0;
    for (const auto& c : fam.collections)
        family_mass += static_cast<double>(c.multicuts.size()) * static_cast<double>(c.multicuts.front().size());
    const double alpha = static_cast<double>(fam.alpha_num) / fam.alpha_den;
    const double logk = std::max<std::size_t>(1, ceil_log2(k.size()));
    lo["disj"] = field(alpha * static_cast<double>(n) / (static_cast<double>(fam.ell()) * logk) * family_mass,
                       "DISJ: alpha * n / (ell * ceil(log2 k)) * sum_i m_i * |C_i^(1)| over the multicut family",
                       Mode::Measured);

    return Json{{"schema", kReportSchema},
                {"instance", {{"name", inst.name}, {"vertices", g.vertex_count()}, {"edges", g.edge_count()},
                              {"groups", groups.groups}}},
                {"params", params},
                {"quantities", q},
                {"upper_bounds", up},
                {"lower_bound_expressions", lo}};
}

}  // namespace topocc

#include "topocc/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "topocc/cuts.hpp"
#include "topocc/distributions.hpp"
#include "topocc/error.hpp"
#include "topocc/generators.hpp"
#include "topocc/lp.hpp"
#include "topocc/multicut_family.hpp"
#include "topocc/protocol.hpp"
#include "topocc/tree_embedding.hpp"

namespace topocc {

namespace {

constexpr double kTol = 1e-6;

class Recorder {
public:
    explicit Recorder(SuiteResult& out) : out_(out) {}
    void instance(const std::string& name) { instance_ = name; }
    bool operator()(const std::string& name, bool passed, std::string detail = {}) {
        out_.checks.push_back({instance_, name, passed, std::move(detail)});
        return passed;
    }

private:
    SuiteResult& out_;
    std::string instance_;
};

std::string num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

GroupedTerminals with_matchings(std::vector<std::vector<Vertex>> groups, Rng& rng) {
    GroupedTerminals out{std::move(groups), std::vector<std::vector<VertexPair>>{}};
    for (const auto& k : out.groups) out.matchings->push_back(random_matching(k, rng));
    return out;
}

Instance make_instance(Graph g, std::uint64_t seed, const std::string& name) {
    Rng rng(seed);
    const std::size_t n = g.vertex_count();
    std::size_t k0 = 2 + 2 * rng.uniform(0, 2);
    k0 = std::min(k0, n - n % 2);
    auto first = random_terminals(g, k0, rng);
    std::vector<Vertex> rest;
    for (Vertex v = 0; v < n; ++v)
        if (std::find(first.begin(), first.end(), v) == first.end()) rest.push_back(v);
    std::vector<Vertex> second;
    if (rest.size() >= 2) {
        std::shuffle(rest.begin(), rest.end(), rng);
        second = {std::min(rest[0], rest[1]), std::max(rest[0], rest[1])};
    }
    std::vector<std::vector<Vertex>> groups{first};
    if (!second.empty()) groups.push_back(second);
    return Instance{name, std::move(g), with_matchings(std::move(groups), rng)};
}

std::vector<std::vector<VertexPair>> matchings_of(const Instance& inst) {
    std::vector<std::vector<VertexPair>> out;
    if (inst.groups.matchings)
        for (const auto& m : *inst.groups.matchings)
            if (!m.empty()) out.push_back(m);
    return out;
}

bool enumerable(const Instance& inst) { return inst.graph.vertex_count() <= kCutEnumerationMaxVertices; }

void lp_relations(Recorder& rec, const Instance& inst, const SuiteOptions& opts) {
    const Graph& g = inst.graph;
    const auto& k = inst.groups.groups[0];
    const double lst = lp_st(g, k);
    const int approx = steiner_tree_approx(g, k).cost;
    rec("lp_st <= st_approx", lst <= approx + kTol, num(lst) + " <= " + std::to_string(approx));
    if (g.vertex_count() <= kSteinerExactMaxVertices) {
        const int st = steiner_tree_exact(g, k).cost;
        rec("lp_st <= st <= 2 lp_st", lst <= st + kTol && st <= 2 * lst + kTol,
            num(lst) + " <= " + std::to_string(st) + " <= " + num(2 * lst));
    }
    if (!enumerable(inst)) return;
    const auto steiner = steiner_spec(inst.groups.groups);
    const auto gs = gap_report(g, steiner);
    rec("steiner LP^L <= LP^U", gs.lower <= gs.upper + kTol, num(gs.lower) + " <= " + num(gs.upper));
    const auto ms = matchings_of(inst);
    if (!ms.empty()) {
        const auto gm = gap_report(g, match_spec(ms));
        rec("matching LP^L <= LP^U", gm.lower <= gm.upper + kTol, num(gm.lower) + " <= " + num(gm.upper));
        const double lm = lp_mtch(g, ms[0]);
        const int dm = matching_distance(g, ms[0]);
        rec("lp_mtch <= d(G,M)", lm <= dm + kTol, num(lm) + " <= " + std::to_string(dm));
    }
    const double lmdn = lp_mdn(g, k);
    const auto sig = sigma(g, k);
    rec("lp_mdn <= sigma", lmdn <= sig.value + kTol, num(lmdn) + " <= " + std::to_string(sig.value));
    const auto bc = bourgain_cut_collection(g, opts.seed);
    rec("bourgain collection separates by distance", separates_by_distance(g, bc.cuts),
        std::to_string(bc.cuts.size()) + " cuts, beta " + std::to_string(bc.beta));
    const double lower = static_cast<double>(sig.value) / bc.beta;
    rec("lp_mdn >= sigma / beta", lmdn + kTol >= lower, num(lmdn) + " >= " + num(lower));
}

Graph tree_of(const Graph& g) { return g.is_tree() ? g : sample_subtree(g, TreeStrategy::ShortestPathTree, 0); }

void tree_equality(Recorder& rec, const Instance& inst, const SuiteOptions&) {
    const Graph t = tree_of(inst.graph);
    std::vector<BValueSpec> specs{steiner_spec(inst.groups.groups), mdn_spec({inst.groups.groups[0]})};
    if (const auto ms = matchings_of(inst); !ms.empty()) specs.push_back(match_spec(ms));
    for (const auto& spec : specs) {
        const double lo = solve(build_lower_lp(t, spec)).objective;
        const double up = solve(build_upper_lp(t, spec)).objective;
        const double closed = to_double(tree_closed_form(t, spec));
        rec(spec.label + " LP^L = LP^U = closed form",
            std::abs(lo - up) <= kTol && std::abs(lo - closed) <= kTol && std::abs(up - closed) <= kTol,
            num(lo) + ", " + num(up) + ", " + num(closed) + (inst.graph.is_tree() ? "" : " (BFS subtree)"));
    }
}

void embedding_transfer(Recorder& rec, const Instance& inst, const SuiteOptions& opts) {
    if (!enumerable(inst)) return;
    std::vector<BValueSpec> specs{steiner_spec({inst.groups.groups[0]}), mdn_spec({inst.groups.groups[0]})};
    if (const auto ms = matchings_of(inst); !ms.empty()) specs.push_back(match_spec({ms[0]}));
    Rng rng(opts.seed);
    for (auto strategy : {TreeStrategy::RandomMst, TreeStrategy::ShortestPathTree, TreeStrategy::LowStretchHeuristic}) {
        const Graph t = sample_subtree(inst.graph, strategy, rng());
        for (const auto& spec : specs) {
            const auto r = verify_transfer(inst.graph, t, spec);
            rec(to_string(strategy) + " " + spec.label + " transfer", r.ok(),
                "LP(G) " + num(r.lp_g) + ", LP(T) " + num(r.lp_t) + ", max stretch " + num(r.stretch.max) +
                    ", min slack " + num(r.min_slack));
        }
    }
}

void multicut_family(Recorder& rec, const Instance& inst, const SuiteOptions&) {
    const Graph& g = inst.graph;
    for (std::size_t i = 0; i < inst.groups.group_count(); ++i) {
        const auto& k = inst.groups.groups[i];
        if (k.size() < 2) continue;
        const std::string tag = "group " + std::to_string(i) + " ";
        const auto fam = chunk_into_family(g, k);
        const auto rep = verify_family(g, fam, k);
        rec(tag + "family properties", rep.ok(),
            "ell " + std::to_string(fam.ell()) + " <= " + std::to_string(rep.length_bound));
        const auto cost = family_cost_check(g, k);
        rec(tag + "2 sum |C_i| >= MST(closure)", cost.ok,
            std::to_string(cost.sum_sizes) + " vs " + std::to_string(cost.mst_closure_cost));
        if (k.size() <= 8) {
            const auto seq = build_partition_sequence(g, k);
            const auto forest = boruvka_mst(metric_closure(g, k));
            bool same = true;
            for (std::size_t s = 1; s < seq.size(); ++s)
                same = same && seq[s] == threshold_partition(g.vertex_count(), k, forest, 2 * static_cast<int>(s));
            rec(tag + "Boruvka threshold partitions", same, std::to_string(seq.size() - 1) + " steps");
        }
    }
}

void subadditivity(Recorder& rec, const Instance& inst, const SuiteOptions&) {
    if (inst.graph.vertex_count() > kSubadditivityMaxVertices) {
        rec("size", false, "sub-additivity scan needs |V| <= " + std::to_string(kSubadditivityMaxVertices));
        return;
    }
    std::vector<BValueSpec> specs{steiner_spec(inst.groups.groups), mdn_spec(inst.groups.groups)};
    if (const auto ms = matchings_of(inst); !ms.empty()) specs.push_back(match_spec(ms));
    for (const auto& spec : specs) {
        const auto r = check_subadditive(inst.graph, spec);
        rec(spec.label + " sub-additive", r.ok(),
            std::to_string(r.triples_checked) + " triples, " + std::to_string(r.violations.size()) + " violations");
    }
}

/// b(C) = 1 iff the side holding vertex 0 has exactly two vertices.
BValueSpec pair_side_spec() {
    BValueSpec spec;
    spec.label = "pair-side";
    spec.terms.push_back([](const Cut& c) { return Demand(c.side().count() == 2 ? 1 : 0); });
    return spec;
}

template <class Fn>
std::size_t for_inputs(const GroupedTerminals& groups, std::size_t n, std::uint64_t seed, Fn&& fn) {
    const std::size_t bits = groups.slot_count() * n;
    constexpr std::size_t kExhaustiveBits = 16;
    constexpr std::size_t kSampled = 2000;
    if (bits <= kExhaustiveBits) {
        const std::uint64_t total = std::uint64_t{1} << bits;
        for (std::uint64_t code = 0; code < total; ++code) {
            InputAssignment in;
            in.n = n;
            std::uint64_t rest = code;
            for (const auto& group : groups.groups) {
                in.values.emplace_back();
                for (std::size_t p = 0; p < group.size(); ++p, rest >>= n)
                    in.values.back().emplace_back(n, rest & ((std::uint64_t{1} << n) - 1));
            }
            fn(in);
        }
        return total;
    }
    for (std::size_t s = 0; s < kSampled; ++s) fn(dist_uniform_iid(groups, n, input_seed(seed, s)));
    return kSampled;
}

void protocol_correctness(Recorder& rec, const Instance& inst, const SuiteOptions& opts) {
    const Graph& g = inst.graph;
    const GroupedTerminals single{{inst.groups.groups[0]}, std::nullopt};
    auto holders = inst.groups.groups[0];
    std::sort(holders.begin(), holders.end());
    const std::size_t tree_edges = steiner_tree_approx(g, holders).edges.size();
    for (std::size_t n = 1; n <= 3; ++n) {
        std::size_t wrong = 0, bad_cost = 0;
        const auto inputs = for_inputs(single, n, opts.seed, [&](const InputAssignment& in) {
            const auto x = run(g, single, {ProtocolKind::XorAggregate, n, 0}, in, 0);
            const auto d = run(g, single, {ProtocolKind::DisjAnd, n, 0}, in, 0);
            wrong += x.output_value != expected_xor(in) || d.output != disjoint(in.values[0]);
            bad_cost += x.total != n * tree_edges || d.total != n * tree_edges;
        });
        rec("xor_aggregate, disj_and n=" + std::to_string(n), wrong == 0 && bad_cost == 0,
            std::to_string(inputs) + " inputs, " + std::to_string(wrong) + " wrong, " + std::to_string(bad_cost) +
                " cost mismatches");
    }
    const auto ms = matchings_of(inst);
    if (ms.size() != inst.groups.group_count()) return;
    std::uint64_t pair_dist = 0;
    for (const auto& m : ms) pair_dist += static_cast<std::uint64_t>(matching_distance(g, m));
    for (std::size_t n = 1; n <= 3; ++n) {
        std::size_t wrong = 0, bad_cost = 0;
        const auto inputs = for_inputs(inst.groups, n, opts.seed, [&](const InputAssignment& in) {
            const auto t = run(g, inst.groups, {ProtocolKind::XorIp, n, 0}, in, 0);
            wrong += t.output != expected_output(inst.groups, ProtocolKind::XorIp, in);
            std::uint64_t staged = 0;
            for (const auto& [stage, b] : t.stage_bits) staged += b;
            bad_cost += t.stage_bits.at("pair_exchange") != n * pair_dist || staged != t.total;
        });
        rec("xor_ip n=" + std::to_string(n), wrong == 0 && bad_cost == 0,
            std::to_string(inputs) + " inputs, " + std::to_string(wrong) + " wrong, " + std::to_string(bad_cost) +
                " cost mismatches");
    }
}

void feasibility(Recorder& rec, const Instance& inst, const SuiteOptions& opts) {
    if (!enumerable(inst)) {
        rec("size", false, "cut enumeration needs |V| <= " + std::to_string(kCutEnumerationMaxVertices));
        return;
    }
    constexpr std::size_t n = 8;
    const GroupedTerminals single{{inst.groups.groups[0]}, std::nullopt};
    const auto r = measured_vector_feasibility(inst.graph, single, {ProtocolKind::XorAggregate, n, 0},
                                               make_sampler("uniform_iid", single, n), opts.runs,
                                               steiner_spec(single.groups), static_cast<double>(n), opts.seed);
    rec("xor_aggregate / n is LP_ST feasible", r.ok() && r.deterministic && r.error_rate == 0.0,
        std::to_string(r.cuts_checked) + " cuts, " + std::to_string(r.violations.size()) + " violations, error rate " +
            num(r.error_rate));
}

using SuiteFn = std::function<void(Recorder&, const Instance&, const SuiteOptions&)>;

const std::map<std::string, SuiteFn>& suites() {
    static const std::map<std::string, SuiteFn> table{
        {"lp-relations", lp_relations},         {"tree-equality", tree_equality},
        {"embedding-transfer", embedding_transfer}, {"multicut-family", multicut_family},
        {"subadditivity", subadditivity},       {"protocol-correctness", protocol_correctness},
        {"feasibility", feasibility}};
    return table;
}

}  // namespace

std::size_t SuiteResult::failures() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"lp-relations",    "tree-equality", "embedding-transfer",
                                                "multicut-family", "subadditivity", "protocol-correctness",
                                                "feasibility"};
    return names;
}

Instance random_instance(std::size_t n, std::uint64_t seed, const std::string& name) {
    Rng rng(seed);
    Graph g = random_connected_graph(n, 0.4, rng);
    return make_instance(std::move(g), rng(), name);
}

Instance random_tree_instance(std::size_t n, std::uint64_t seed, const std::string& name) {
    Rng rng(seed);
    Graph g = random_tree(n, rng);
    return make_instance(std::move(g), rng(), name);
}

std::vector<Instance> builtin_fixtures() {
    using M = std::vector<std::vector<VertexPair>>;
    return {
        {"path", path_graph(4), {{{0, 3}}, M{{{0, 3}}}}},
        {"star", star_graph(4), {{{1, 2, 3, 4}}, M{{{1, 2}, {3, 4}}}}},
        {"cycle", cycle_graph(6), {{{0, 1, 3, 4}}, M{{{0, 3}, {1, 4}}}}},
        {"grid3x3", grid_graph(3, 3), {{{0, 2, 6, 8}}, M{{{0, 8}, {2, 6}}}}},
    };
}

std::vector<Instance> default_instances(const std::string& suite, std::uint64_t seed) {
    if (!suites().contains(suite)) throw Error(ErrorCode::UnsupportedMode, "unknown suite '" + suite + "'");
    std::vector<Instance> out;
    Rng rng(seed);
    auto randoms = [&](std::size_t count, std::size_t lo, std::size_t hi, bool trees) {
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t n = lo + rng.uniform(0, hi - lo);
            const auto name = (trees ? "random-tree-" : "random-") + std::to_string(i);
            out.push_back(trees ? random_tree_instance(n, rng(), name) : random_instance(n, rng(), name));
        }
    };
    if (suite == "tree-equality") {
        randoms(10, 3, 10, true);
        return out;
    }
    if (suite != "lp-relations") out = builtin_fixtures();
    if (suite == "subadditivity" || suite == "protocol-correctness")
        randoms(5, 4, suite == "subadditivity" ? 8 : 6, false);
    else
        randoms(20, 4, 10, false);
    return out;
}

SuiteResult run_suite(const std::string& suite, std::span<const Instance> instances, const SuiteOptions& opts) {
    const auto it = suites().find(suite);
    if (it == suites().end()) throw Error(ErrorCode::UnsupportedMode, "unknown suite '" + suite + "'");
    SuiteResult out{suite, {}};
    Recorder rec(out);
    for (const auto& inst : instances) {
        rec.instance(inst.name);
        if (inst.groups.group_count() == 0 || inst.groups.groups[0].size() < 2) {
            rec("terminals", false, "needs a first group with at least two terminals");
            continue;
        }
        try {
            it->second(rec, inst, opts);
        } catch (const Error& e) {
            rec("run", false, e.what());
        }
    }
    if (suite == "subadditivity") {
        rec.instance("adversarial-4-cycle");
        const auto r = check_subadditive(cycle_graph(4), pair_side_spec());
        rec("counterexample detected", !r.ok(), std::to_string(r.violations.size()) + " violations");
    }
    return out;
}

}  // namespace topocc

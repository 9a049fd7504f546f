#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

#include "topocc/bounds.hpp"
#include "topocc/distributions.hpp"
#include "topocc/error.hpp"
#include "topocc/lp.hpp"
#include "topocc/multicut_family.hpp"
#include "topocc/protocol.hpp"
#include "topocc/report.hpp"
#include "topocc/suites.hpp"
#include "topocc/tree_embedding.hpp"

using namespace topocc;

namespace {

struct Common {
    std::vector<std::string> graphs;
    std::uint64_t seed = 1;
    std::string json_out;
    std::string csv_out;
};

void emit_json(const Json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << j.dump(2) << "\n";
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) {
        if (path.empty()) return;
        file_.open(path);
        if (!file_) throw Error(ErrorCode::ParseError, "cannot write " + path);
    }
    void row(const std::vector<std::string>& cells) {
        if (!file_.is_open()) return;
        for (std::size_t i = 0; i < cells.size(); ++i) file_ << (i ? "," : "") << csv_escape(cells[i]);
        file_ << "\n";
    }

private:
    std::ofstream file_;
};

Instance single_instance(const Common& c) {
    if (c.graphs.size() != 1) throw CLI::ValidationError("--graph", "exactly one graph file is required");
    return load_instance(c.graphs.front());
}

int cmd_bounds(const Common& c, const BoundsOptions& bo, bool dump_lp, bool dump_cuts) {
    const auto inst = single_instance(c);
    Json report = bounds_report(inst, bo);
    const auto& k = inst.groups.groups.at(0);
    if (dump_lp && inst.graph.vertex_count() <= kCutEnumerationMaxVertices)
        report["dumps"]["lp_st"] = to_lp_format(build_lower_lp(inst.graph, steiner_spec({k})));
    if (dump_cuts) {
        report["dumps"]["bourgain_cuts"] = cuts_to_json(bourgain_cut_collection(inst.graph, bo.seed).cuts);
        if (inst.graph.vertex_count() <= kCutEnumerationMaxVertices) {
            std::vector<Cut> separating;
            for_each_cut(inst.graph, [&](const Cut& cut) {
                if (b_steiner(cut, k) > 0) separating.push_back(cut);
            });
            report["dumps"]["steiner_cuts"] = cuts_to_json(separating);
        }
    }
    emit_json(report, c.json_out);
    return 0;
}

int cmd_simulate(const Common& c, const std::string& protocol, const std::string& dist, std::size_t runs,
                 std::size_t n, std::size_t hash_bits) {
    const auto inst = single_instance(c);
    const ProtocolSpec spec{parse_protocol(protocol), n, hash_bits};
    const bool single = spec.kind == ProtocolKind::XorAggregate || spec.kind == ProtocolKind::DisjAnd ||
                        spec.kind == ProtocolKind::EqualityHash || spec.kind == ProtocolKind::EdMedian;
    GroupedTerminals groups = inst.groups;
    if (single && groups.group_count() > 1) {
        groups.groups.resize(1);
        if (groups.matchings) groups.matchings->resize(1);
    }
    const auto sampler = make_sampler(dist, groups, n);
    const auto bound = cost_bound(inst.graph, groups, spec, n);
    const bool deterministic = spec.kind == ProtocolKind::XorAggregate || spec.kind == ProtocolKind::DisjAnd ||
                               spec.kind == ProtocolKind::XorIp;

    CsvWriter csv(c.csv_out);
    csv.row({"run", "input_seed", "coin_seed", "total_bits", "output", "expected", "correct", "within_bound"});
    std::size_t errors = 0, over_bound = 0;
    double sum = 0.0;
    std::uint64_t worst = 0;
    for (std::size_t r = 0; r < runs; ++r) {
        const auto in = sampler(input_seed(c.seed, r));
        const auto t = run(inst.graph, groups, spec, in, coin_seed(c.seed, r));
        const bool want = expected_output(groups, spec.kind, in);
        const bool correct = t.output == want;
        const bool within = bound.exact ? t.total == bound.value : t.total <= bound.value;
        errors += !correct;
        over_bound += !within;
        sum += static_cast<double>(t.total);
        worst = std::max(worst, t.total);
        csv.row({std::to_string(r), std::to_string(input_seed(c.seed, r)), std::to_string(coin_seed(c.seed, r)),
                 std::to_string(t.total), std::to_string(t.output), std::to_string(want), std::to_string(correct),
                 std::to_string(within)});
    }
    const double error_rate = runs ? static_cast<double>(errors) / runs : 0.0;
    const bool error_ok = deterministic ? errors == 0 : error_rate <= 1.0 / 3.0;
    const bool ok = runs > 0 && error_ok && over_bound == 0;
    Json summary{
        {"schema", kReportSchema},
        {"instance", inst.name},
        {"protocol", protocol},
        {"distribution", dist},
        {"runs", runs},
        {"seed", c.seed},
        {"params", {{"n", n}, {"hash_bits", resolved_hash_bits(spec, groups)}}},
        {"mean_total_bits", field(runs ? sum / runs : 0.0, "mean bits over seeded runs", Mode::Measured)},
        {"max_total_bits", field(worst, "largest run", Mode::Measured)},
        {"error_rate", field(error_rate, "runs whose output differs from direct evaluation", Mode::Measured)},
        {"cost_formula", field(bound.value, "protocol cost accounting", Mode::Exact)},
        {"cost_relation", bound.exact ? "equal" : "upper"},
        {"runs_violating_formula", over_bound},
        {"ok", ok},
    };
    emit_json(summary, c.json_out);
    return ok ? 0 : 1;
}

int cmd_verify(const Common& c, const std::string& suite, std::size_t runs) {
    std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
    std::vector<Instance> given;
    for (const auto& path : c.graphs) given.push_back(load_instance(path));
    CsvWriter csv(c.csv_out);
    csv.row({"suite", "instance", "check", "passed", "detail"});
    Json out{{"schema", kReportSchema}, {"suites", Json::array()}};
    bool all_ok = true;
    for (const auto& name : names) {
        const auto instances = given.empty() ? default_instances(name, c.seed) : given;
        const auto result = run_suite(name, instances, SuiteOptions{c.seed, runs});
        Json checks = Json::array();
        for (const auto& ch : result.checks) {
            csv.row({name, ch.instance, ch.name, ch.passed ? "1" : "0", ch.detail});
            checks.push_back({{"instance", ch.instance}, {"check", ch.name}, {"passed", ch.passed},
                              {"detail", ch.detail}});
            if (!ch.passed) std::cerr << "FAIL " << name << " " << ch.instance << ": " << ch.name << " (" << ch.detail << ")\n";
        }
        std::cerr << (result.ok() ? "PASS " : "FAIL ") << name << ": " << result.checks.size() - result.failures()
                  << "/" << result.checks.size() << " checks on " << instances.size() << " instances\n";
        out["suites"].push_back({{"suite", name}, {"ok", result.ok()}, {"checks", checks}});
        all_ok = all_ok && result.ok();
    }
    out["ok"] = all_ok;
    if (!c.json_out.empty()) emit_json(out, c.json_out);
    return all_ok ? 0 : 1;
}

int cmd_multicut(const Common& c, bool dump_family) {
    const auto inst = single_instance(c);
    Json groups = Json::array();
    bool ok = true;
    for (std::size_t i = 0; i < inst.groups.group_count(); ++i) {
        const auto& k = inst.groups.groups[i];
        const auto fam = chunk_into_family(inst.graph, k);
        const auto rep = verify_family(inst.graph, fam, k);
        const auto cost = family_cost_check(inst.graph, k);
        Json checks = Json::array();
        for (const auto& cc : rep.collections)
            checks.push_back({{"containment", cc.containment}, {"disjointness", cc.disjointness},
                              {"singleton", cc.singleton}, {"singletons", cc.singletons}, {"base", cc.first_size}});
        Json g{{"group", i},
               {"terminals", k},
               {"ell", field(fam.ell(), "collections after chunking", Mode::Exact)},
               {"length_bound", field(family_length_bound(k.size()), "1 + smallest m with (3/2)^m >= k", Mode::Exact)},
               {"within_length_bound", rep.length_bound},
               {"alpha", std::to_string(fam.alpha_num) + "/" + std::to_string(fam.alpha_den)},
               {"collections", checks},
               {"sum_sizes", field(cost.sum_sizes, "sum of explicit-set counts over all multicuts", Mode::Exact)},
               {"mst_closure", field(cost.mst_closure_cost, "MST of the terminal metric closure", Mode::Exact)},
               {"st_approx", field(cost.st_approx, "Steiner 2-approximation", Mode::Heuristic)},
               {"ok", rep.ok() && cost.ok}};
        if (cost.st_exact) g["st_exact"] = field(*cost.st_exact, "exhaustive Steiner tree", Mode::Exact);
        if (dump_family) g["family"] = to_json(fam);
        ok = ok && rep.ok() && cost.ok;
        groups.push_back(g);
    }
    emit_json(Json{{"schema", kReportSchema}, {"instance", inst.name}, {"groups", groups}, {"ok", ok}}, c.json_out);
    return ok ? 0 : 1;
}

int cmd_embed(const Common& c, const std::string& strategy_name) {
    const auto inst = single_instance(c);
    const auto strategy = parse_tree_strategy(strategy_name);
    const Graph t = sample_subtree(inst.graph, strategy, c.seed);
    const auto s = stretch(inst.graph, t);
    Json tree = Json::array();
    for (const auto& e : t.edges()) tree.push_back({e.u, e.v});
    Json out{{"schema", kReportSchema},
             {"instance", inst.name},
             {"strategy", strategy_name},
             {"seed", c.seed},
             {"tree_edges", tree},
             {"stretch",
              {{"avg", field(s.avg, "mean d_T/d_G over vertex pairs", Mode::Measured)},
               {"max", field(s.max, "max d_T/d_G, attained on an edge", Mode::Measured)}}}};
    bool ok = true;
    if (inst.graph.vertex_count() <= kCutEnumerationMaxVertices) {
        const auto r = verify_transfer(inst.graph, t, steiner_spec({inst.groups.groups.at(0)}));
        out["transfer"] = {{"lp_g", field(r.lp_g, "Steiner cut LP on G", Mode::Lp)},
                           {"lp_t", field(r.lp_t, "Steiner cut LP on the tree", Mode::Lp)},
                           {"cost_x", r.cost_x},
                           {"cost_transferred", r.cost_transferred},
                           {"min_slack", r.min_slack},
                           {"feasible", r.feasible},
                           {"cost_bounded", r.cost_bounded},
                           {"lp_bounded", r.lp_bounded},
                           {"ratio_bounded", r.ratio_bounded}};
        ok = r.ok();
    }
    out["ok"] = ok;
    emit_json(out, c.json_out);
    return ok ? 0 : 1;
}

void add_common(CLI::App* sub, Common& c, bool many_graphs = false) {
    auto* g = sub->add_option("--graph", c.graphs, "instance file");
    if (!many_graphs) g->required()->expected(1);
    sub->add_option("--seed", c.seed, "base seed")->capture_default_str();
    sub->add_option("--json", c.json_out, "write the JSON report here (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topology-aware communication bounds: graph quantities, cut LPs, protocol simulation"};
    app.require_subcommand(1);
    Common c;

    auto* bounds = app.add_subcommand("bounds", "report graph quantities, LP values and bound expressions");
    add_common(bounds, c);
    BoundsOptions bo;
    bool dump_lp = false, dump_cuts = false;
    bounds->add_option("--n", bo.n, "input length for n-scaled costs")->capture_default_str();
    bounds->add_flag("--exact-rational", bo.exact_rational, "solve LPs in exact rationals (|E| <= 12)");
    bounds->add_flag("--dump-lp", dump_lp, "include the Steiner LP in CPLEX text form");
    bounds->add_flag("--dump-cuts", dump_cuts, "include the separating cuts and the cut collection");

    auto* simulate = app.add_subcommand("simulate", "run a protocol on sampled inputs");
    add_common(simulate, c);
    std::string protocol, dist = "uniform_iid";
    std::size_t runs = 100, n = 8, hash_bits = 0;
    simulate->add_option("--protocol", protocol, "protocol name")
        ->required()
        ->check(CLI::IsMember({"xor_aggregate", "equality_hash", "ed_median", "disj_and", "ed_xor", "xor_ed",
                               "xor_ip", "silent"}));
    simulate->add_option("--dist", dist, "input distribution")
        ->check(CLI::IsMember({"uniform_iid", "distinct", "xor_ed", "equal", "duplicated"}))
        ->capture_default_str();
    simulate->add_option("--runs", runs, "number of runs")->capture_default_str();
    simulate->add_option("--n", n, "input length")->capture_default_str();
    simulate->add_option("--hash-bits", hash_bits, "hash length (0 = protocol default)")->capture_default_str();
    simulate->add_option("--csv", c.csv_out, "per-run CSV output");

    auto* verify = app.add_subcommand("verify", "run a property battery; exit code 1 on any failure");
    add_common(verify, c, true);
    std::string suite;
    std::vector<std::string> suite_choices = suite_names();
    suite_choices.push_back("all");
    verify->add_option("--suite", suite, "suite name or 'all'")->required()->check(CLI::IsMember(suite_choices));
    verify->add_option("--runs", runs, "Monte Carlo runs for measured checks")->capture_default_str();
    verify->add_option("--csv", c.csv_out, "per-check CSV output");

    auto* multicut = app.add_subcommand("multicut", "build and certify the multicut family of each group");
    add_common(multicut, c);
    bool dump_family = false;
    multicut->add_flag("--dump-family", dump_family, "include every multicut");

    auto* embed = app.add_subcommand("embed", "sample a spanning subtree and check the LP transfer");
    add_common(embed, c);
    std::string strategy = "low-stretch-heuristic";
    embed->add_option("--strategy", strategy, "random-mst | shortest-path-tree | low-stretch-heuristic")
        ->check(CLI::IsMember({"random-mst", "shortest-path-tree", "low-stretch-heuristic"}))
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bounds) return cmd_bounds(c, BoundsOptions{c.seed, bo.n, bo.exact_rational}, dump_lp, dump_cuts);
        if (*simulate) return cmd_simulate(c, protocol, dist, runs, n, hash_bits);
        if (*verify) return cmd_verify(c, suite, runs);
        if (*multicut) return cmd_multicut(c, dump_family);
        if (*embed) return cmd_embed(c, strategy);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

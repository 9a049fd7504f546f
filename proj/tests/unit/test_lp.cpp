#include <doctest.h>

#include <numeric>

#include "../oracles/oracles.hpp"
#include "topocc/error.hpp"
#include "topocc/generators.hpp"
#include "topocc/lp.hpp"

using namespace topocc;

namespace {
const Graph path4 = path_graph(4);
const Graph star4 = star_graph(4);
const Graph triangle = complete_graph(3);
constexpr double kTol = 1e-6;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::ParseError;
}

std::vector<std::vector<Vertex>> one(std::vector<Vertex> k) { return {std::move(k)}; }
}  // namespace

TEST_CASE("LP_ST on a path: three binding edge cuts") {
    const auto lp = build_lower_lp(path4, steiner_spec(one({0, 3})));
    CHECK(lp.materialized);
    const auto sol = solve(lp);
    CHECK(sol.objective == doctest::Approx(3.0).epsilon(kTol));
    for (double x : sol.values) CHECK(x == doctest::Approx(1.0));
    int binding = 0;
    for (const auto& c : lp.constraints) {
        double s = 0;
        for (auto v : c.vars) s += sol.values[v];
        if (std::abs(s - to_double(c.rhs)) < kTol && c.vars.size() == 1) ++binding;
    }
    CHECK(binding == 3);
    CHECK(sol.feasibility_margin >= -kTol);
}

TEST_CASE("LP_ST on the triangle is 3/2, exactly in rational mode") {
    const std::vector<Vertex> all{0, 1, 2};
    CHECK(lp_st(triangle, all) == doctest::Approx(1.5));
    SolveOptions exact;
    exact.exact_rational = true;
    const auto sol = solve(build_lower_lp(triangle, steiner_spec(one(all))), exact);
    REQUIRE(sol.exact_objective);
    CHECK(*sol.exact_objective == "3/2");
    for (double x : sol.values) CHECK(x == doctest::Approx(0.5));
    CHECK(steiner_tree_exact(triangle, all).cost == 2);
}

TEST_CASE("zero demands give objective zero") {
    const auto lp = build_lower_lp(path4, zero_spec());
    CHECK(lp.constraints.empty());
    CHECK(solve(lp).objective == 0.0);
    CHECK(solve(build_upper_lp(path4, zero_spec(3))).objective == 0.0);
}

TEST_CASE("LP^U examples") {
    const auto spec1 = steiner_spec(one({0, 3}));
    CHECK(solve(build_upper_lp(path4, spec1)).objective == doctest::Approx(solve(build_lower_lp(path4, spec1)).objective));
    const auto two = steiner_spec({{0, 1}, {2, 3}});
    const auto up = solve(build_upper_lp(path4, two));
    CHECK(up.objective == doctest::Approx(2.0));
    CHECK(up.values.size() == 6);
    const std::vector<Vertex> all{0, 1, 2};
    CHECK(solve(build_upper_lp(triangle, steiner_spec({all, all}))).objective == doctest::Approx(3.0));
}

TEST_CASE("named specializations") {
    const std::vector<Vertex> leaves{1, 2, 3, 4};
    CHECK(lp_mdn(star4, leaves) == doctest::Approx(4.0));
    const std::vector<VertexPair> m{{0, 3}, {1, 2}};
    CHECK(lp_mtch(path4, m) == doctest::Approx(4.0));
}

TEST_CASE("constraint generation agrees with enumeration on Steiner LPs") {
    Rng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 3 + rng.uniform(0, 7);
        const Graph g = random_connected_graph(n, 0.4, rng);
        const auto k = random_terminals(g, 2 + rng.uniform(0, n - 2), rng);
        const auto lower = build_lower_lp(g, steiner_spec(one(k)));
        const auto a = solve(lower, SolveMode::Enumerate);
        const auto b = solve(lower, SolveMode::Generate);
        CHECK(a.objective == doctest::Approx(b.objective).epsilon(kTol));
        CHECK(min_slack(lower, b.values) >= -kTol);
        const auto k2 = random_terminals(g, 2, rng);
        const auto upper = build_upper_lp(g, steiner_spec({k, k2}));
        CHECK(solve(upper, SolveMode::Enumerate).objective ==
              doctest::Approx(solve(upper, SolveMode::Generate).objective).epsilon(kTol));
    }
    const auto mdn = build_lower_lp(path4, mdn_spec(one({0, 3})));
    CHECK(code_of([&] { solve(mdn, SolveMode::Generate); }) == ErrorCode::UnsupportedMode);
    const auto multi = build_lower_lp(path4, steiner_spec({{0, 1}, {2, 3}}));
    CHECK(code_of([&] { solve(multi, SolveMode::Generate); }) == ErrorCode::UnsupportedMode);
}

TEST_CASE("large graphs: Steiner falls back to separation, others refuse") {
    Rng rng(42);
    const Graph g = random_connected_graph(22, 0.2, rng);
    const auto k = random_terminals(g, 5, rng);
    const auto lp = build_lower_lp(g, steiner_spec(one(k)));
    CHECK_FALSE(lp.materialized);
    const double v = solve(lp).objective;
    CHECK(v <= steiner_tree_approx(g, k).cost + kTol);
    CHECK(2.0 * v >= steiner_tree_approx(g, k).cost / 2.0 - kTol);
    CHECK(code_of([&] { build_lower_lp(g, mdn_spec(one(k))); }) == ErrorCode::InstanceTooLarge);
    CHECK(code_of([&] { solve(lp, SolveMode::Enumerate); }) == ErrorCode::UnsupportedMode);
    SolveOptions exact;
    exact.exact_rational = true;
    CHECK(code_of([&] { solve(lp, exact); }) == ErrorCode::InstanceTooLarge);
}

TEST_CASE("rational and floating solves agree") {
    Rng rng(43);
    SolveOptions exact;
    exact.exact_rational = true;
    for (int trial = 0; trial < 10; ++trial) {
        const Graph g = random_connected_graph(5 + rng.uniform(0, 2), 0.45, rng);
        if (g.edge_count() > kExactRationalMaxEdges) continue;
        const auto k = random_terminals(g, 4, rng);
        for (const BValueSpec& spec : {steiner_spec(one(k)), mdn_spec(one(k))}) {
            const auto lp = build_lower_lp(g, spec);
            CHECK(solve(lp, exact).objective == doctest::Approx(solve(lp).objective).epsilon(1e-9));
        }
    }
}

TEST_CASE("LP relations on random instances") {
    Rng rng(44);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 4 + rng.uniform(0, 5);
        const Graph g = random_connected_graph(n, 0.4, rng);
        const auto k = random_terminals(g, 2 * (1 + rng.uniform(0, (n - 2) / 2)), rng);
        const auto pairs = random_matching(k, rng);
        const auto k2 = random_terminals(g, 3, rng);

        const double st = lp_st(g, k);
        const int exact = steiner_tree_exact(g, k).cost;
        CHECK(st <= exact + kTol);
        CHECK(exact <= 2 * st + kTol);

        for (const BValueSpec& spec : {steiner_spec({k, k2}), match_spec({pairs, {pairs.front()}})}) {
            const auto gap = gap_report(g, spec);
            CHECK(gap.lower <= gap.upper + kTol);
            CHECK(gap.ratio >= 1.0 - kTol);
        }

        const double mtch = lp_mtch(g, pairs);
        CHECK(mtch <= matching_distance(g, pairs) + kTol);
        const auto col = bourgain_cut_collection(g, rng());
        CHECK(mtch >= static_cast<double>(matching_distance(g, pairs)) / col.beta - kTol);
        CHECK(lp_mdn(g, k) >= static_cast<double>(sigma(g, k).value) / col.beta - kTol);

        GroupedTerminals gt{{k, k2}, std::nullopt};
        const auto route = upper_lp_by_routing(g, gt, RoutingMode::Steiner);
        REQUIRE(route.feasible);
        CHECK(*route.feasible);
        CHECK(route.cost >= solve(build_upper_lp(g, route.spec)).objective - kTol);
        CHECK(std::accumulate(route.values.begin(), route.values.end(), 0.0) == doctest::Approx(route.cost));

        std::vector<Vertex> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Vertex> kp;
        for (Vertex v : k) kp.push_back(perm[v]);
        CHECK(lp_st(g.relabeled(perm), kp) == doctest::Approx(st).epsilon(kTol));
        CHECK(lp_mdn(g.relabeled(perm), kp) == doctest::Approx(lp_mdn(g, k)).epsilon(kTol));
    }
}

TEST_CASE("trees: LP^L = LP^U = closed form") {
    Rng rng(45);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 3 + rng.uniform(0, 9);
        const Graph t = random_tree(n, rng);
        const auto k = random_terminals(t, 2 + rng.uniform(0, n - 2), rng);
        const auto k2 = random_terminals(t, 2, rng);
        const auto even = random_terminals(t, 2 * (1 + rng.uniform(0, (n - 2) / 2)), rng);
        const auto pairs = random_matching(even, rng);
        for (const BValueSpec& spec :
             {steiner_spec({k, k2}), match_spec({pairs}), steiner_spec(one(k)), mdn_spec(one(k))}) {
            const double closed = to_double(tree_closed_form(t, spec));
            const double lower = solve(build_lower_lp(t, spec)).objective;
            const double upper = solve(build_upper_lp(t, spec)).objective;
            CHECK(lower == doctest::Approx(closed).epsilon(kTol));
            CHECK(upper == doctest::Approx(closed).epsilon(kTol));
        }
    }
}

TEST_CASE("closed form examples") {
    CHECK(tree_closed_form(path4, steiner_spec(one({0, 3}))) == Demand(3));
    GroupedTerminals gt{{{0, 1}, {2, 3}}, std::nullopt};
    CHECK(tree_closed_form(path4, grouped_spec(gt)) == Demand(2));
    CHECK(tree_closed_form(star4, zero_spec()) == Demand(0));
    CHECK(code_of([] { tree_closed_form(complete_graph(3), zero_spec()); }) == ErrorCode::NotATree);
}

TEST_CASE("routing constructions") {
    GroupedTerminals m1{{{0, 3}}, std::vector<std::vector<VertexPair>>{{{0, 3}}}};
    const auto r = upper_lp_by_routing(path4, m1, RoutingMode::Matching);
    CHECK(r.cost == 3);
    CHECK(r.values == std::vector<double>{1, 1, 1});
    REQUIRE(r.feasible);
    CHECK(*r.feasible);
    CHECK(upper_lp_by_routing(path4, m1, RoutingMode::Steiner).cost == 3);
    GroupedTerminals star_groups{{{1, 2}, {3, 4}}, std::nullopt};
    const auto s = upper_lp_by_routing(star4, star_groups, RoutingMode::Steiner);
    CHECK(s.cost == 4);
    CHECK(*s.feasible);
    CHECK(code_of([&] { upper_lp_by_routing(star4, star_groups, RoutingMode::Matching); }) ==
          ErrorCode::MissingMatchings);
}

TEST_CASE("gap reports") {
    const auto tree = gap_report(path4, steiner_spec({{0, 1}, {1, 3}}));
    CHECK(tree.ratio == doctest::Approx(1.0).epsilon(kTol));
    CHECK(gap_report(triangle, steiner_spec(one({0, 1, 2}))).ratio == doctest::Approx(1.0));
    const auto tri = gap_report(triangle, steiner_spec({{0, 1}, {1, 2}, {0, 2}}));
    // each singleton cut splits two of the pairs, so 2 * sum(x) >= 6
    CHECK(tri.lower == doctest::Approx(3.0));
    CHECK(tri.upper == doctest::Approx(3.0));
    CHECK(tri.ratio >= 1.0);
    const auto both_zero = gap_report(path4, zero_spec());
    CHECK(both_zero.ratio == 1.0);
    CHECK_FALSE(both_zero.infinite);
}

TEST_CASE("LP text export") {
    const auto lp = build_lower_lp(path4, steiner_spec(one({0, 3})));
    const auto text = to_lp_format(lp);
    CHECK(text.find("Minimize") != std::string::npos);
    CHECK(text.find("Subject To") != std::string::npos);
    CHECK(text.find("x_0_1 >= 1") != std::string::npos);
    CHECK(text.find("End") != std::string::npos);
    const auto up = build_upper_lp(path4, steiner_spec({{0, 1}, {2, 3}}));
    CHECK(up.variable_name(4) == "x_1_1_2");
}

#include <doctest.h>

#include <set>

#include "../oracles/oracles.hpp"
#include "topocc/cuts.hpp"
#include "topocc/error.hpp"
#include "topocc/generators.hpp"
#include "topocc/kernels.hpp"

using namespace topocc;

namespace {
const Graph path4 = path_graph(4);
const Graph star4 = star_graph(4);

Cut side(std::size_t n, std::vector<Vertex> vs) { return Cut::from_members(n, vs); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::ParseError;
}
}  // namespace

TEST_CASE("cuts are canonical and reject trivial sides") {
    const Cut a = side(4, {0});
    const Cut b = side(4, {1, 2, 3});
    CHECK(a == b);
    CHECK(a.on_side(0));
    CHECK(a.separates(0, 1));
    CHECK(code_of([] { Cut::from_members(3, std::vector<Vertex>{}); }) == ErrorCode::InvalidCut);
    CHECK(code_of([] { Cut::from_members(2, std::vector<Vertex>{0, 1}); }) == ErrorCode::InvalidCut);
}

TEST_CASE("cut enumeration") {
    CHECK(enumerate_cuts(path_graph(3)).size() == 3);
    CHECK(enumerate_cuts(path4).size() == 7);
    const auto cuts = enumerate_cuts(cycle_graph(6));
    CHECK(cuts.size() == 31);
    std::set<std::vector<Vertex>> seen;
    for (const auto& c : cuts) {
        CHECK(c.on_side(0));
        seen.insert(members(c.side()));
    }
    CHECK(seen.size() == cuts.size());
    CHECK(code_of([] { enumerate_cuts(path_graph(17)); }) == ErrorCode::InstanceTooLarge);
}

TEST_CASE("crossing edges") {
    CHECK(crossing_edges(path4, side(4, {0})) == std::vector<std::size_t>{0});
    CHECK(crossing_edges(path4, side(4, {0, 1})) == std::vector<std::size_t>{1});
    const Multicut mc(5, {make_vertex_set(5, std::vector<Vertex>{1}), make_vertex_set(5, std::vector<Vertex>{2})});
    const auto e = crossing_edges(star4, mc);
    CHECK(e == std::vector<std::size_t>{*star4.edge_index(0, 1), *star4.edge_index(0, 2)});
    CHECK(mc.part_of(0) == 2);
    CHECK(members(mc.implicit_set()) == std::vector<Vertex>{0, 3, 4});
    CHECK(code_of([] {
              Multicut(3, {make_vertex_set(3, std::vector<Vertex>{0, 1}), make_vertex_set(3, std::vector<Vertex>{1})});
          }) == ErrorCode::InvalidCut);
    CHECK(code_of([] { Multicut(3, {}); }) == ErrorCode::InvalidCut);

    Rng rng(31);
    const Graph g = random_connected_graph(8, 0.4, rng);
    for (const auto& c : enumerate_cuts(g)) {
        const Cut flipped = Cut::from_side(c.complement());
        CHECK(crossing_edges(g, c) == crossing_edges(g, flipped));
        for (std::size_t i : crossing_edges(g, c)) CHECK(c.separates(g.edge(i).u, g.edge(i).v));
    }
}

TEST_CASE("demand functions on the listed examples") {
    const std::vector<Vertex> ad{0, 3};
    CHECK(b_steiner(side(4, {0}), ad) == 1);
    CHECK(b_steiner(side(4, {0, 3}), ad) == 0);
    CHECK(b_steiner(side(4, {1}), std::vector<Vertex>{1}) == 0);
    const std::vector<Vertex> leaves{1, 2, 3, 4};
    CHECK(b_mdn(side(5, {1}), leaves) == 1);
    CHECK(b_mdn(side(5, {1, 2}), leaves) == 2);
    CHECK(b_mdn(side(5, {0}), leaves) == 0);
    const std::vector<VertexPair> m{{0, 3}, {1, 2}};
    // a|d and b|c are both split by {a, b}
    CHECK(b_match(side(4, {0, 1}), m) == 2);
    CHECK(b_match(Cut::from_side(~make_vertex_set(4, std::vector<Vertex>{1, 2})), m) == 0);
    CHECK(b_match(side(4, {0}), m) == 1);
    const std::vector<VertexPair> m01{{0, 1}};
    CHECK(b_match(side(4, {0, 1}), m01) == 0);
    GroupedTerminals g{{{0, 1}, {2, 3}}, std::nullopt};
    CHECK(b_grouped(side(4, {0}), g) == 1);
    CHECK(b_grouped(side(4, {0, 1}), g) == 0);
    CHECK(b_grouped(side(4, {0, 2}), g) == 2);
}

TEST_CASE("demand functions are complement invariant") {
    Rng rng(32);
    const Graph g = random_connected_graph(8, 0.4, rng);
    const auto k = random_terminals(g, 6, rng);
    const auto pairs = random_matching(k, rng);
    GroupedTerminals gt{{{k[0], k[1]}, {k[2], k[3], k[4]}}, std::nullopt};
    for (std::uint32_t mask = 1; mask + 1 < (1u << 8); ++mask) {
        VertexSet s(8, mask);
        const Cut c = Cut::from_side(s);
        // evaluate on the raw side and its complement directly
        auto raw = [&](const VertexSet& x) {
            int in = 0;
            for (Vertex v : k) in += x[v];
            return in;
        };
        const int in = raw(s);
        CHECK(b_mdn(c, k) == std::min<int>(in, 6 - in));
        CHECK(b_steiner(c, k) == b_steiner(Cut::from_side(~s), k));
        CHECK(b_match(c, pairs) == b_match(Cut::from_side(~s), pairs));
        CHECK(b_grouped(c, gt) == b_grouped(Cut::from_side(~s), gt));
    }
}

TEST_CASE("sub-additivity") {
    Rng rng(33);
    for (int trial = 0; trial < 8; ++trial) {
        const Graph g = random_connected_graph(7, 0.4, rng);
        const auto k = random_terminals(g, 4, rng);
        const auto pairs = random_matching(k, rng);
        const auto st = check_subadditive(g, steiner_spec({k, {k[0], k[1]}}));
        CHECK(st.ok());
        CHECK(st.triples_checked == 2 * kernels::serial::subadditivity_triples(7));
        CHECK(check_subadditive(g, match_spec({pairs})).ok());
    }

    BValueSpec bad;
    bad.label = "pair-sides";
    bad.terms.push_back([](const Cut& c) { return Demand(c.side().count() == 2 || c.complement().count() == 2); });
    const auto rep = check_subadditive(cycle_graph(4), bad);
    CHECK_FALSE(rep.ok());
    bool found_singletons = false;
    for (const auto& v : rep.violations) {
        CHECK(v.b3 > v.b1 + v.b2);
        if (v.s1.count() == 1 && v.s2.count() == 1) found_singletons = true;
    }
    CHECK(found_singletons);
    CHECK(code_of([] { check_subadditive(path_graph(13), zero_spec()); }) == ErrorCode::InstanceTooLarge);
}

TEST_CASE("edge-cut sums dominate any cut on trees") {
    Rng rng(34);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 4 + rng.uniform(0, 6);
        const Graph t = random_tree(n, rng);
        const auto k = random_terminals(t, 2 + 2 * rng.uniform(0, (n - 2) / 2), rng);
        const auto pairs = random_matching(k, rng);
        for (const BValueSpec& spec : {steiner_spec({k}), match_spec({pairs})}) {
            std::vector<Demand> edge_cut(t.edge_count());
            for (std::size_t e = 0; e < t.edge_count(); ++e) {
                const Graph without = [&] {
                    std::vector<Edge> es = t.edges();
                    es.erase(es.begin() + static_cast<std::ptrdiff_t>(e));
                    return Graph(n, es);
                }();
                const auto d = without.bfs(t.edge(e).u);
                VertexSet s(n);
                for (Vertex v = 0; v < n; ++v)
                    if (d[v] >= 0) s.set(v);
                edge_cut[e] = spec.total(Cut::from_side(s));
            }
            for_each_cut(t, [&](const Cut& c) {
                Demand sum = 0;
                for (std::size_t e : crossing_edges(t, c)) sum += edge_cut[e];
                CHECK(sum >= spec.total(c));
            });
        }
    }
}

TEST_CASE("Bourgain-style collections") {
    const auto single = bourgain_cut_collection(path_graph(2), 1);
    CHECK(single.beta == 1);
    CHECK(single.cuts.size() == 1);

    const auto p = bourgain_cut_collection(path4, 2);
    CHECK(separates_by_distance(path4, p.cuts));
    CHECK(p.beta <= 3);
    const std::vector<Cut> prefix{side(4, {0}), side(4, {0, 1}), side(4, {0, 1, 2})};
    CHECK(separates_by_distance(path4, prefix));
    CHECK(max_edge_load(path4, prefix) == 1);

    Rng rng(35);
    for (int trial = 0; trial < 20; ++trial) {
        const Graph g = random_connected_graph(4 + rng.uniform(0, 8), 0.35, rng);
        const auto col = bourgain_cut_collection(g, rng());
        const std::size_t n = g.vertex_count();
        const auto counts = separation_counts(n, col.cuts);
        const auto d = oracle::distances(g);
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = 0; v < n; ++v) CHECK(counts[u * n + v] >= d[u][v]);
        CHECK(col.beta == max_edge_load(g, col.cuts));
        CHECK(col.attempts >= 1);
    }

    BourgainOptions starved;
    starved.retry_budget = 1;
    starved.subsets_per_scale = 1;
    CHECK(code_of([&] {
              for (std::uint64_t s = 0; s < 200; ++s) bourgain_cut_collection(cycle_graph(12), s, starved);
          }) == ErrorCode::BudgetExceeded);
}

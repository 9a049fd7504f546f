#include <doctest.h>

#include <cmath>
#include <set>

#include "topocc/distributions.hpp"
#include "topocc/error.hpp"
#include "topocc/generators.hpp"

using namespace topocc;

namespace {
const GroupedTerminals four{{{0, 1, 2, 3}}, std::nullopt};

bool same(const InputAssignment& a, const InputAssignment& b) { return a.n == b.n && a.values == b.values; }

std::uint64_t as_int(const BitString& x, std::size_t offset, std::size_t width) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(x[offset + i]) << i;
    return v;
}
}  // namespace

TEST_CASE("uniform iid") {
    const std::size_t samples = 10000, n = 8;
    std::vector<std::size_t> ones(n, 0);
    std::size_t equal_pairs = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const auto in = dist_uniform_iid(four, n, s);
        in.validate(four);
        for (std::size_t i = 0; i < n; ++i) ones[i] += in.at(0, 0)[i];
        equal_pairs += in.at(0, 1) == in.at(0, 2);
    }
    for (auto c : ones) {
        CHECK(static_cast<double>(c) / samples >= 0.48);
        CHECK(static_cast<double>(c) / samples <= 0.52);
    }
    const double p = 1.0 / 256;
    CHECK(std::abs(static_cast<double>(equal_pairs) / samples - p) <= 3 * std::sqrt(p / samples));
    CHECK(same(dist_uniform_iid(four, n, 7), dist_uniform_iid(four, n, 7)));
    CHECK_FALSE(same(dist_uniform_iid(four, n, 7), dist_uniform_iid(four, n, 8)));
}

TEST_CASE("distinct") {
    for (std::uint64_t s = 0; s < 2000; ++s) {
        const auto in = dist_distinct(four, 3, s);
        CHECK(all_distinct(in.values[0]));
    }
    // k = 2^n: every sample is a permutation of the alphabet, and all 24 occur
    std::set<std::vector<std::uint64_t>> perms;
    for (std::uint64_t s = 0; s < 2000; ++s) {
        const auto in = dist_distinct(four, 2, s);
        std::vector<std::uint64_t> p;
        for (const auto& x : in.values[0]) p.push_back(x.to_ulong());
        auto sorted = p;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<std::uint64_t>{0, 1, 2, 3});
        perms.insert(p);
    }
    CHECK(perms.size() == 24);
    try {
        dist_distinct(four, 1, 0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AlphabetTooSmall);
    }
}

TEST_CASE("udisj") {
    const std::size_t samples = 10000, m = 16;
    std::size_t u_ones = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const auto x = dist_udisj(m, s);
        CHECK((x.u & x.v).none());
        u_ones += x.u[s % m];
    }
    CHECK(std::abs(static_cast<double>(u_ones) / samples - 0.25) <= 0.02);
    CHECK(dist_udisj(0, 1).u.size() == 0);
}

TEST_CASE("xor_ed prefixes") {
    Rng rng(91);
    for (int trial = 0; trial < 20; ++trial) {
        const Graph g = random_connected_graph(10, 0.3, rng);
        GroupedTerminals groups{{random_terminals(g, 4, rng), random_terminals(g, 6, rng)}, {}};
        groups.matchings = std::vector<std::vector<VertexPair>>{random_matching(groups.groups[0], rng),
                                                                random_matching(groups.groups[1], rng)};
        const std::size_t n = 8;
        const std::size_t prefix = xor_ed_prefix_bits(groups);
        const std::size_t suffix = n - prefix;
        for (std::uint64_t s = 0; s < 50; ++s) {
            const auto in = dist_xor_ed(groups, n, rng());
            in.validate(groups);
            bool parity = false;
            for (std::size_t i = 0; i < 2; ++i) {
                const auto& k = groups.groups[i];
                auto pos = [&](Vertex v) { return std::find(k.begin(), k.end(), v) - k.begin(); };
                std::set<std::uint64_t> prefixes;
                for (auto [a, b] : (*groups.matchings)[i]) {
                    const auto& x = in.at(i, pos(a));
                    const auto& y = in.at(i, pos(b));
                    CHECK(as_int(x, suffix, prefix) == as_int(y, suffix, prefix));
                    prefixes.insert(as_int(x, suffix, prefix));
                    CHECK_FALSE((as_int(x, 0, suffix) == 2 && as_int(y, 0, suffix) == 2));
                    CHECK(x != y);
                }
                CHECK(prefixes.size() == (*groups.matchings)[i].size());
                CHECK(all_distinct(in.values[i]));
                parity ^= all_distinct(in.values[i]);
            }
            CHECK(parity == expected_output(groups, ProtocolKind::XorEd, in));
            CHECK_FALSE(parity);  // t = 2 groups, each distinct
        }
    }
    GroupedTerminals bare{{{0, 1}}, std::nullopt};
    try {
        dist_xor_ed(bare, 8, 0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingMatchings);
    }
    bare.matchings = std::vector<std::vector<VertexPair>>{{{0, 1}}};
    try {
        dist_xor_ed(bare, xor_ed_prefix_bits(bare) + 1, 0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AlphabetTooSmall);
    }
}

TEST_CASE("two-party ED over xor") {
    const std::size_t t = 4, n = 6, samples = 10000;
    std::size_t collisions = 0;
    std::size_t ones = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const auto l = dist_ed_xor_two_party(t, n, s);
        REQUIRE(l.x.size() == t);
        std::vector<BitString> xs;
        for (std::size_t i = 0; i < t; ++i) xs.push_back(l.x[i] ^ l.y[i]);
        ones += xs[0][0];
        collisions += !all_distinct(xs);
    }
    CHECK(std::abs(static_cast<double>(ones) / samples - 0.5) <= 0.02);
    CHECK(static_cast<double>(collisions) / samples <= t * t * std::pow(2.0, -static_cast<double>(n)));
}

TEST_CASE("multicut DISJ stand-in") {
    const std::size_t nv = 7;
    const GroupedTerminals k{{{0, 1, 2, 3, 4, 5}}, std::nullopt};
    const Multicut c(nv, {make_vertex_set(nv, std::vector<Vertex>{0, 1}), make_vertex_set(nv, std::vector<Vertex>{2}),
                          make_vertex_set(nv, std::vector<Vertex>{3, 4})});
    for (std::uint64_t s = 0; s < 500; ++s) {
        const auto in = dist_disj_multicut(k, c, 12, s);
        const auto& x = in.values[0];
        CHECK(x[0] == x[1]);
        CHECK(x[3] == x[4]);
        CHECK(x[5].all());
        CHECK((x[0] & x[2]).none());
        CHECK((x[0] & x[3]).none());
        CHECK((x[2] & x[3]).none());
        CHECK(disjoint(x));
    }
    CHECK(same(dist_disj_multicut(k, c, 12, 5), dist_disj_multicut(k, c, 12, 5)));
}

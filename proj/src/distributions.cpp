#include "topocc/distributions.hpp"

#include <algorithm>
#include <set>

#include "topocc/error.hpp"
#include "topocc/rng.hpp"

namespace topocc {

namespace {

BitString uniform_string(std::size_t n, Rng& rng) {
    BitString x(n);
    for (std::size_t b = 0; b < n; ++b)
        if (rng.coin()) x.set(b);
    return x;
}

InputAssignment empty_like(const GroupedTerminals& groups, std::size_t n) {
    InputAssignment in;
    in.n = n;
    for (const auto& k : groups.groups) in.values.emplace_back(k.size(), BitString(n));
    return in;
}

std::size_t ceil_log2(std::size_t x) {
    std::size_t b = 0;
    while ((std::size_t{1} << b) < x) ++b;
    return b;
}

}  // namespace

void write_bits(BitString& x, std::size_t offset, std::size_t width, std::uint64_t value) {
    for (std::size_t b = 0; b < width; ++b) x[offset + b] = b < 64 && ((value >> b) & 1u) != 0;
}

InputAssignment dist_uniform_iid(const GroupedTerminals& groups, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    auto in = empty_like(groups, n);
    for (auto& group : in.values)
        for (auto& x : group) x = uniform_string(n, rng);
    return in;
}

InputAssignment dist_distinct(const GroupedTerminals& groups, std::size_t n, std::uint64_t seed) {
    const std::size_t k = groups.slot_count();
    if (n < 63 && (std::uint64_t{1} << n) < k)
        throw Error(ErrorCode::AlphabetTooSmall, "2^n is smaller than the number of terminals");
    Rng rng(seed);
    auto in = empty_like(groups, n);
    // sequential rejection: each slot is uniform over the strings not yet used
    std::set<BitString> used;
    for (auto& group : in.values) {
        for (auto& x : group) {
            do {
                x = uniform_string(n, rng);
            } while (used.count(x));
            used.insert(x);
        }
    }
    return in;
}

TwoPartyStrings dist_udisj(std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    TwoPartyStrings out{BitString(m), BitString(m)};
    for (std::size_t j = 0; j < m; ++j) {
        const bool d = rng.coin();
        const bool bit = rng.coin();
        if (d) {
            out.u[j] = bit;
        } else {
            out.v[j] = bit;
        }
    }
    return out;
}

std::size_t xor_ed_prefix_bits(const GroupedTerminals& groups) {
    if (!groups.matchings) throw Error(ErrorCode::MissingMatchings, "xor_ed distribution needs matchings");
    std::size_t labels = 0;
    for (std::size_t i = 0; i < groups.group_count(); ++i) {
        const auto pairs = (*groups.matchings)[i].size();
        labels += pairs + (groups.groups[i].size() - 2 * pairs);
    }
    return ceil_log2(labels) + 1;
}

InputAssignment dist_xor_ed(const GroupedTerminals& groups, std::size_t n, std::uint64_t seed) {
    const std::size_t prefix = xor_ed_prefix_bits(groups);
    if (n < prefix + 2) throw Error(ErrorCode::AlphabetTooSmall, "n too small for distinct prefixes plus suffixes");
    const std::size_t suffix = n - prefix;
    constexpr std::uint64_t s_x0 = 0, s_y0 = 1, s_1 = 2;
    Rng rng(seed);
    auto in = empty_like(groups, n);
    std::uint64_t label = 0;
    auto assign = [&](BitString& x, std::uint64_t lab, std::uint64_t suf) {
        write_bits(x, 0, suffix, suf);
        write_bits(x, suffix, prefix, lab);
    };
    for (std::size_t i = 0; i < groups.group_count(); ++i) {
        const auto& k = groups.groups[i];
        std::vector<bool> matched(k.size(), false);
        auto position = [&](Vertex v) { return static_cast<std::size_t>(std::find(k.begin(), k.end(), v) - k.begin()); };
        for (auto [a, b] : (*groups.matchings)[i]) {
            const std::size_t pa = position(a), pb = position(b);
            matched[pa] = matched[pb] = true;
            const bool d = rng.coin();
            const bool pick = rng.coin();
            std::uint64_t xa = 0, yb = 0;
            if (!d) {
                xa = s_x0;
                yb = pick ? s_1 : s_y0;
            } else {
                yb = s_y0;
                xa = pick ? s_1 : s_x0;
            }
            assign(in.values[i][pa], label, xa);
            assign(in.values[i][pb], label, yb);
            ++label;
        }
        for (std::size_t p = 0; p < k.size(); ++p)
            if (!matched[p]) assign(in.values[i][p], label++, s_x0);
    }
    return in;
}

TwoPartyLists dist_ed_xor_two_party(std::size_t t, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    TwoPartyLists out;
    for (std::size_t i = 0; i < t; ++i) out.x.push_back(uniform_string(n, rng));
    for (std::size_t i = 0; i < t; ++i) out.y.push_back(uniform_string(n, rng));
    return out;
}

InputAssignment dist_disj_multicut(const GroupedTerminals& groups, const Multicut& c, std::size_t n,
                                   std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t s = c.size();
    std::vector<BitString> player(s, BitString(n));
    if (s > 0) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto owner = static_cast<std::size_t>(rng.uniform(0, s - 1));
            player[owner][j] = rng.coin();
        }
    }
    auto in = empty_like(groups, n);
    for (std::size_t i = 0; i < groups.group_count(); ++i) {
        for (std::size_t p = 0; p < groups.groups[i].size(); ++p) {
            const std::size_t part = c.part_of(groups.groups[i][p]);
            in.values[i][p] = part < s ? player[part] : ~BitString(n);
        }
    }
    return in;
}

Sampler make_sampler(const std::string& name, const GroupedTerminals& groups, std::size_t n) {
    if (name == "uniform_iid") return [groups, n](std::uint64_t s) { return dist_uniform_iid(groups, n, s); };
    if (name == "distinct") return [groups, n](std::uint64_t s) { return dist_distinct(groups, n, s); };
    if (name == "xor_ed") return [groups, n](std::uint64_t s) { return dist_xor_ed(groups, n, s); };
    if (name == "equal")
        return [groups, n](std::uint64_t s) {
            auto in = dist_uniform_iid(groups, n, s);
            for (auto& group : in.values)
                for (auto& x : group) x = group.front();
            return in;
        };
    if (name == "duplicated")
        return [groups, n](std::uint64_t s) {
            auto in = dist_distinct(groups, n, s);
            for (auto& group : in.values)
                if (group.size() >= 2) group[1] = group[0];
            return in;
        };
    throw Error(ErrorCode::UnsupportedMode, "unknown distribution '" + name + "'");
}

}  // namespace topocc

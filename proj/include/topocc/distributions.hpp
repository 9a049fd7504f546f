#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topocc/cuts.hpp"
#include "topocc/graph.hpp"
#include "topocc/protocol.hpp"

namespace topocc {

/// Every slot i.i.d. uniform over {0,1}^n.
InputAssignment dist_uniform_iid(const GroupedTerminals& groups, std::size_t n, std::uint64_t seed);

/// Pairwise distinct strings, uniform over distinct tuples. AlphabetTooSmall if 2^n < slots.
InputAssignment dist_distinct(const GroupedTerminals& groups, std::size_t n, std::uint64_t seed);

struct TwoPartyStrings {
    BitString u;
    BitString v;
};

/// Per coordinate a fair coin D: D = 0 gives U = 0 and V uniform, D = 1 the reverse.
TwoPartyStrings dist_udisj(std::size_t m, std::uint64_t seed);

/// Bits of the pair prefix: ceil(log2(pairs + unmatched slots)) + 1.
std::size_t xor_ed_prefix_bits(const GroupedTerminals& groups);

/// Matched pairs share a distinct prefix; suffixes follow the coin rule over
/// the three strings s_x0 = 0, s_y0 = 1, s1 = 2 (as (n - prefix)-bit
/// integers), so a pair never holds s1 twice. Unmatched slots get their own
/// prefix and suffix s_x0. Needs n >= prefix + 2.
InputAssignment dist_xor_ed(const GroupedTerminals& groups, std::size_t n, std::uint64_t seed);

struct TwoPartyLists {
    std::vector<BitString> x;
    std::vector<BitString> y;
};

/// 2t i.i.d. uniform n-bit strings.
TwoPartyLists dist_ed_xor_two_party(std::size_t t, std::size_t n, std::uint64_t seed);

/// Stand-in for the s-player star distribution: per coordinate one uniform
/// owner among the s explicit sets draws a fair bit, the others hold 0.
/// Terminals of explicit set j all receive X_j; implicit terminals get 1^n.
InputAssignment dist_disj_multicut(const GroupedTerminals& groups, const Multicut& c, std::size_t n,
                                   std::uint64_t seed);

/// Sampler factory for the CLI: "uniform_iid", "distinct", "xor_ed", plus two
/// adversarial families: "equal" (each group holds one uniform string) and
/// "duplicated" (distinct strings, then slot 1 copies slot 0 in every group).
Sampler make_sampler(const std::string& name, const GroupedTerminals& groups, std::size_t n);

/// Writes the integer `value` into bits [offset, offset + width) of x, least significant bit first.
void write_bits(BitString& x, std::size_t offset, std::size_t width, std::uint64_t value);

}  // namespace topocc

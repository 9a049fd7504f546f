#pragma once

// Data-parallel inner loops. Each kernel exists twice: a plain serial loop
// kept as the reference, and an OpenMP version that must agree with it
// exactly (tests compare the two; bench/ times them).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "topocc/graph.hpp"

namespace topocc::kernels {

/// Constraint rows in compressed form: row r covers vars[offsets[r] .. offsets[r+1]).
struct RowSet {
    std::vector<std::size_t> offsets{0};
    std::vector<std::size_t> vars;

    void add_row(std::span<const std::size_t> row) {
        vars.insert(vars.end(), row.begin(), row.end());
        offsets.push_back(vars.size());
    }
    [[nodiscard]] std::size_t rows() const noexcept { return offsets.size() - 1; }
};

/// One violating triple S3 = S1 u S2 (bitmask sides) for demand term `term`.
struct SubadditivityViolation {
    std::uint32_t s1 = 0;
    std::uint32_t s2 = 0;
    std::size_t term = 0;
};

/// Demand table: table[term][mask] is b^term evaluated on the cut whose one
/// side is `mask`, for every mask in [0, 2^n).
template <class Value>
using DemandTable = std::vector<std::vector<Value>>;

namespace detail {

// Checks every S1 (nonempty proper submask of s3) against S2 = s3 \ S1.
template <class Value>
void scan_superset(std::uint32_t s3, const DemandTable<Value>& table, std::vector<SubadditivityViolation>& out,
                   std::size_t max_report) {
    for (std::uint32_t s1 = (s3 - 1) & s3; s1 != 0; s1 = (s1 - 1) & s3) {
        const std::uint32_t s2 = s3 ^ s1;
        if (s1 > s2) continue;  // unordered pair {S1, S2}
        for (std::size_t term = 0; term < table.size(); ++term) {
            const auto& b = table[term];
            if (b[s3] > b[s1] + b[s2] && out.size() < max_report) out.push_back({s1, s2, term});
        }
    }
}

int omp_threads();
int omp_thread_id();

}  // namespace detail

namespace serial {

std::vector<int> all_pairs_bfs(const Graph& g);

template <class Scalar>
std::vector<Scalar> row_slacks(const RowSet& rows, std::span<const Scalar> rhs, std::span<const Scalar> x) {
    std::vector<Scalar> out(rows.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        Scalar sum = 0;
        for (std::size_t k = rows.offsets[r]; k < rows.offsets[r + 1]; ++k) sum += x[rows.vars[k]];
        out[r] = sum - rhs[r];
    }
    return out;
}

template <class Value>
std::vector<SubadditivityViolation> subadditivity_scan(std::size_t n, const DemandTable<Value>& table,
                                                       std::size_t max_report) {
    std::vector<SubadditivityViolation> out;
    const std::uint32_t full = (1u << n) - 1u;
    for (std::uint32_t s3 = 1; s3 < full; ++s3) detail::scan_superset(s3, table, out, max_report);
    return out;
}

std::uint64_t subadditivity_triples(std::size_t n);

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace serial

namespace parallel {

std::vector<int> all_pairs_bfs(const Graph& g);

template <class Scalar>
std::vector<Scalar> row_slacks(const RowSet& rows, std::span<const Scalar> rhs, std::span<const Scalar> x) {
    std::vector<Scalar> out(rows.rows());
    const auto count = static_cast<std::int64_t>(rows.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < count; ++r) {
        Scalar sum = 0;
        for (std::size_t k = rows.offsets[r]; k < rows.offsets[r + 1]; ++k) sum += x[rows.vars[k]];
        out[r] = sum - rhs[r];
    }
    return out;
}

template <class Value>
std::vector<SubadditivityViolation> subadditivity_scan(std::size_t n, const DemandTable<Value>& table,
                                                       std::size_t max_report) {
    const std::int64_t full = (1LL << n) - 1;
    std::vector<std::vector<SubadditivityViolation>> per_thread(static_cast<std::size_t>(detail::omp_threads()));
#pragma omp parallel
    {
        auto& local = per_thread[static_cast<std::size_t>(detail::omp_thread_id())];
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t s3 = 1; s3 < full; ++s3)
            detail::scan_superset(static_cast<std::uint32_t>(s3), table, local, max_report);
    }
    std::vector<SubadditivityViolation> out;
    for (auto& local : per_thread) out.insert(out.end(), local.begin(), local.end());
    // serial order: by superset, then S1 descending, then term
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        const auto sa = a.s1 | a.s2, sb = b.s1 | b.s2;
        if (sa != sb) return sa < sb;
        if (a.s1 != b.s1) return a.s1 > b.s1;
        return a.term < b.term;
    });
    if (out.size() > max_report) out.resize(max_report);
    return out;
}

/// Runs body(i) for every i; bodies must not share mutable state.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace parallel

}  // namespace topocc::kernels

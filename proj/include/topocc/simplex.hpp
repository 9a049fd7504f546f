#pragma once

// Dense tableau simplex for covering LPs
//
//     min  sum_j x_j   s.t.  sum_{j in row r} x_j >= rhs_r,  x >= 0,
//
// solved through the packing dual  max rhs.y  s.t.  A^T y <= 1, y >= 0.
// The slack basis of the dual is feasible from the start, so no phase one
// is needed; the primal x is read off the reduced costs of the dual slacks.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "topocc/error.hpp"
#include "topocc/kernels.hpp"

namespace topocc::simplex {

template <class Scalar>
struct Result {
    std::vector<Scalar> x;
    Scalar objective = 0;
    std::size_t pivots = 0;
};

template <class Scalar>
struct Traits {
    static bool positive(const Scalar& v) { return v > Scalar(1e-9); }
    static bool negative(const Scalar& v) { return v < Scalar(-1e-9); }
};

/// `rows` lists the variables of each covering row; rhs_r > 0 is assumed.
template <class Scalar>
Result<Scalar> solve_covering(std::size_t var_count, const kernels::RowSet& rows, std::span<const Scalar> rhs,
                              std::size_t pivot_limit = 200000) {
    using T = Traits<Scalar>;
    const std::size_t m = var_count;    // dual constraints
    const std::size_t k = rows.rows();  // dual variables
    const std::size_t cols = k + m;     // y columns then slack columns
    Result<Scalar> out;
    out.x.assign(var_count, Scalar(0));
    if (k == 0) return out;
    for (std::size_t r = 0; r < k; ++r)
        if (rows.offsets[r] == rows.offsets[r + 1])
            throw Error(ErrorCode::Infeasible, "covering row with no variables and positive demand");

    std::vector<Scalar> tab(m * cols, Scalar(0));
    std::vector<Scalar> b(m, Scalar(1));
    std::vector<Scalar> obj(cols, Scalar(0));  // reduced costs (maximization form: optimal when all >= 0)
    Scalar value = 0;
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t p = rows.offsets[r]; p < rows.offsets[r + 1]; ++p) tab[rows.vars[p] * cols + r] = Scalar(1);
        obj[r] = -rhs[r];
    }
    for (std::size_t i = 0; i < m; ++i) {
        tab[i * cols + k + i] = Scalar(1);
        basis[i] = k + i;
    }

    std::size_t degenerate_run = 0;
    while (true) {
        // Dantzig pricing; Bland's rule once pivots stall to rule out cycling.
        const bool bland = degenerate_run > 50;
        std::size_t enter = cols;
        for (std::size_t c = 0; c < cols; ++c) {
            if (!T::negative(obj[c])) continue;
            if (bland) {
                enter = c;
                break;
            }
            if (enter == cols || obj[c] < obj[enter]) enter = c;
        }
        if (enter == cols) break;

        std::size_t leave = m;
        Scalar best_ratio = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const Scalar& a = tab[i * cols + enter];
            if (!T::positive(a)) continue;
            const Scalar ratio = b[i] / a;
            if (leave == m || ratio < best_ratio || (!(best_ratio < ratio) && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == m) throw Error(ErrorCode::Infeasible, "dual unbounded: covering LP infeasible");
        if (++out.pivots > pivot_limit) throw Error(ErrorCode::IterationLimit, "simplex pivot limit reached");
        degenerate_run = T::positive(best_ratio) ? 0 : degenerate_run + 1;

        Scalar* prow = &tab[leave * cols];
        const Scalar pivot = prow[enter];
        for (std::size_t c = 0; c < cols; ++c) prow[c] /= pivot;
        b[leave] /= pivot;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            const Scalar f = tab[i * cols + enter];
            if (f == Scalar(0)) continue;
            Scalar* row = &tab[i * cols];
            for (std::size_t c = 0; c < cols; ++c)
                if (prow[c] != Scalar(0)) row[c] -= f * prow[c];
            b[i] -= f * b[leave];
        }
        const Scalar f = obj[enter];
        for (std::size_t c = 0; c < cols; ++c)
            if (prow[c] != Scalar(0)) obj[c] -= f * prow[c];
        value -= f * b[leave];
        basis[leave] = enter;
    }

    for (std::size_t j = 0; j < m; ++j) {
        Scalar xj = obj[k + j];
        if (xj < Scalar(0)) xj = Scalar(0);  // only rounding noise can make this negative
        out.x[j] = xj;
    }
    out.objective = value;
    return out;
}

}  // namespace topocc::simplex

#pragma once

#include <cstdint>

#include "topocc/graph_io.hpp"
#include "topocc/report.hpp"

namespace topocc {

struct BoundsOptions {
    std::uint64_t seed = 1;
    /// Input length used in the n-scaled protocol costs.
    std::size_t n = 8;
    bool exact_rational = false;
};

/// Every graph quantity, LP value and protocol-cost expression for one
/// instance, each wrapped by field(). Lower-bound expressions carry no
/// hidden constants: their log factors are replaced by measured
/// parameters (beta, stretch, family length), which are reported too.
Json bounds_report(const Instance& inst, const BoundsOptions& opts = {});

}  // namespace topocc

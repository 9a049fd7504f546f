#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "topocc/graph_io.hpp"

namespace topocc {

struct Check {
    std::string instance;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<Check> checks;

    [[nodiscard]] std::size_t failures() const;
    [[nodiscard]] bool ok() const { return !checks.empty() && failures() == 0; }
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    /// Monte Carlo runs for measured checks.
    std::size_t runs = 100;
};

/// "lp-relations", "tree-equality", "embedding-transfer", "multicut-family",
/// "subadditivity", "protocol-correctness", "feasibility".
const std::vector<std::string>& suite_names();

/// Seeded instances a suite runs on when no graph is given.
std::vector<Instance> default_instances(const std::string& suite, std::uint64_t seed);

/// Connected G(n, 0.4) with an even terminal group and a pair group, both matched.
Instance random_instance(std::size_t n, std::uint64_t seed, const std::string& name);
Instance random_tree_instance(std::size_t n, std::uint64_t seed, const std::string& name);
/// path, star, cycle and 3x3 grid with the same terminals as the fixture files.
std::vector<Instance> builtin_fixtures();

/// Throws UnsupportedMode for unknown suite names.
SuiteResult run_suite(const std::string& suite, std::span<const Instance> instances, const SuiteOptions& opts = {});

}  // namespace topocc

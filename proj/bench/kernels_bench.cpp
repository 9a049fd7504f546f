// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "topocc/generators.hpp"
#include "topocc/kernels.hpp"
#include "topocc/rng.hpp"

using namespace topocc;

namespace {

Graph bench_graph(std::size_t n) {
    Rng rng(42);
    return random_connected_graph(n, 8.0 / static_cast<double>(n), rng);
}

template <auto Fn>
void all_pairs(benchmark::State& state) {
    const Graph g = bench_graph(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(g));
}

struct Rows {
    kernels::RowSet rows;
    std::vector<double> rhs, x;
};

Rows bench_rows(std::size_t count) {
    Rng rng(7);
    Rows r;
    const std::size_t vars = 256;
    std::vector<std::size_t> row;
    for (std::size_t i = 0; i < count; ++i) {
        row.clear();
        for (std::size_t k = 0; k < 32; ++k) row.push_back(rng.uniform(0, vars - 1));
        r.rows.add_row(row);
        r.rhs.push_back(1.0);
    }
    for (std::size_t v = 0; v < vars; ++v) r.x.push_back(static_cast<double>(rng.uniform(0, 100)) / 100.0);
    return r;
}

template <bool Parallel>
void row_slacks(benchmark::State& state) {
    const auto r = bench_rows(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        if constexpr (Parallel)
            benchmark::DoNotOptimize(kernels::parallel::row_slacks<double>(r.rows, r.rhs, r.x));
        else
            benchmark::DoNotOptimize(kernels::serial::row_slacks<double>(r.rows, r.rhs, r.x));
    }
}

// demand table of a 3-term matching-like spec: number of pairs split by the mask
kernels::DemandTable<int> bench_table(std::size_t n) {
    kernels::DemandTable<int> table(3, std::vector<int>(std::size_t{1} << n));
    for (std::size_t term = 0; term < 3; ++term)
        for (std::uint32_t mask = 0; mask < table[term].size(); ++mask)
            for (std::size_t p = term; p + 1 < n; p += 2) table[term][mask] += ((mask >> p) & 1u) != ((mask >> (p + 1)) & 1u);
    return table;
}

template <bool Parallel>
void subadditivity(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto table = bench_table(n);
    for (auto _ : state) {
        if constexpr (Parallel)
            benchmark::DoNotOptimize(kernels::parallel::subadditivity_scan(n, table, 16));
        else
            benchmark::DoNotOptimize(kernels::serial::subadditivity_scan(n, table, 16));
    }
}

}  // namespace

BENCHMARK(all_pairs<kernels::serial::all_pairs_bfs>)->Name("all_pairs_bfs/serial")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(all_pairs<kernels::parallel::all_pairs_bfs>)->Name("all_pairs_bfs/parallel")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(row_slacks<false>)->Name("row_slacks/serial")->Range(1 << 12, 1 << 16);
BENCHMARK(row_slacks<true>)->Name("row_slacks/parallel")->Range(1 << 12, 1 << 16);
BENCHMARK(subadditivity<false>)->Name("subadditivity_scan/serial")->DenseRange(8, 12, 2);
BENCHMARK(subadditivity<true>)->Name("subadditivity_scan/parallel")->DenseRange(8, 12, 2);

BENCHMARK_MAIN();

#include "topocc/kernels.hpp"

#include <algorithm>

#include <omp.h>

namespace topocc::kernels {

namespace detail {

int omp_threads() { return omp_get_max_threads(); }
int omp_thread_id() { return omp_get_thread_num(); }

}  // namespace detail

namespace {

void bfs_row(const Graph& g, Vertex source, int* row) {
    const std::size_t n = g.vertex_count();
    std::fill(row, row + n, -1);
    std::vector<Vertex> queue;
    queue.reserve(n);
    row[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex u = queue[head];
        for (Vertex w : g.neighbors(u)) {
            if (row[w] < 0) {
                row[w] = row[u] + 1;
                queue.push_back(w);
            }
        }
    }
}

}  // namespace

namespace serial {

std::vector<int> all_pairs_bfs(const Graph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<int> out(n * n);
    for (std::size_t s = 0; s < n; ++s) bfs_row(g, static_cast<Vertex>(s), out.data() + s * n);
    return out;
}

std::uint64_t subadditivity_triples(std::size_t n) {
    std::uint64_t count = 0;
    const std::uint32_t full = (1u << n) - 1u;
    for (std::uint32_t s3 = 1; s3 < full; ++s3) {
        const auto bits = static_cast<unsigned>(__builtin_popcount(s3));
        count += ((1ULL << bits) - 2) / 2;
    }
    return count;
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body) {
    for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace serial

namespace parallel {

std::vector<int> all_pairs_bfs(const Graph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<int> out(n * n);
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t s = 0; s < count; ++s) bfs_row(g, static_cast<Vertex>(s), out.data() + s * n);
    return out;
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body) {
    const auto total = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < total; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace parallel

}  // namespace topocc::kernels

#include "topocc/generators.hpp"

#include <algorithm>
#include <queue>

#include "topocc/error.hpp"

namespace topocc {

Graph random_connected_graph(std::size_t n, double p, Rng& rng) {
    if (n == 0) throw Error(ErrorCode::InvalidGraph, "graph needs at least one vertex");
    std::bernoulli_distribution coin(p);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::vector<Edge> edges;
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = u + 1; v < n; ++v)
                if (coin(rng)) edges.push_back({u, v});
        Graph g(n, std::move(edges));
        if (g.is_connected()) return g;
    }
    throw Error(ErrorCode::BudgetExceeded, "no connected G(n, p) sample; p too small");
}

Graph random_tree(std::size_t n, Rng& rng) {
    if (n <= 1) return Graph(std::max<std::size_t>(n, 1), {});
    if (n == 2) return Graph(2, {{0, 1}});
    std::vector<Vertex> pruefer(n - 2);
    for (auto& x : pruefer) x = static_cast<Vertex>(rng.uniform(0, n - 1));
    std::vector<std::size_t> degree(n, 1);
    for (Vertex x : pruefer) ++degree[x];
    std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> leaves;
    for (Vertex v = 0; v < n; ++v)
        if (degree[v] == 1) leaves.push(v);
    std::vector<Edge> edges;
    for (Vertex x : pruefer) {
        const Vertex leaf = leaves.top();
        leaves.pop();
        edges.push_back({leaf, x});
        if (--degree[x] == 1) leaves.push(x);
    }
    const Vertex a = leaves.top();
    leaves.pop();
    edges.push_back({a, leaves.top()});
    return Graph(n, std::move(edges));
}

std::vector<Vertex> random_terminals(const Graph& g, std::size_t count, Rng& rng) {
    std::vector<Vertex> all(g.vertex_count());
    for (Vertex v = 0; v < all.size(); ++v) all[v] = v;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(count, all.size()));
    std::sort(all.begin(), all.end());
    return all;
}

std::vector<VertexPair> random_matching(std::vector<Vertex> vs, Rng& rng) {
    if (vs.size() % 2 != 0) throw Error(ErrorCode::OddTerminalCount, "cannot pair an odd number of vertices");
    std::shuffle(vs.begin(), vs.end(), rng);
    std::vector<VertexPair> out;
    for (std::size_t i = 0; i < vs.size(); i += 2) out.emplace_back(vs[i], vs[i + 1]);
    return out;
}

Graph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
    return Graph(n, std::move(edges));
}

Graph star_graph(std::size_t leaves) {
    std::vector<Edge> edges;
    for (Vertex v = 1; v <= leaves; ++v) edges.push_back({0, v});
    return Graph(leaves + 1, std::move(edges));
}

Graph cycle_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v) edges.push_back({v, static_cast<Vertex>((v + 1) % n)});
    return Graph(n, std::move(edges));
}

Graph grid_graph(std::size_t rows, std::size_t cols) {
    std::vector<Edge> edges;
    auto id = [&](std::size_t r, std::size_t c) { return static_cast<Vertex>(r * cols + c); };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
            if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
        }
    }
    return Graph(rows * cols, std::move(edges));
}

Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Graph(n, std::move(edges));
}

}  // namespace topocc

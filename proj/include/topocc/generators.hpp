#pragma once

#include <cstdint>
#include <vector>

#include "topocc/graph.hpp"
#include "topocc/rng.hpp"

namespace topocc {

/// G(n, p) resampled until connected.
Graph random_connected_graph(std::size_t n, double p, Rng& rng);
/// Uniform random labelled tree (Prüfer sequence).
Graph random_tree(std::size_t n, Rng& rng);
/// `count` distinct vertices of g, sorted.
std::vector<Vertex> random_terminals(const Graph& g, std::size_t count, Rng& rng);
/// Random disjoint pairing of an even-size vertex list.
std::vector<VertexPair> random_matching(std::vector<Vertex> vs, Rng& rng);

Graph path_graph(std::size_t n);
Graph star_graph(std::size_t leaves);
Graph cycle_graph(std::size_t n);
Graph grid_graph(std::size_t rows, std::size_t cols);
Graph complete_graph(std::size_t n);

}  // namespace topocc

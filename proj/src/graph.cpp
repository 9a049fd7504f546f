#include "topocc/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "topocc/detail/disjoint_sets.hpp"
#include "topocc/error.hpp"
#include "topocc/kernels.hpp"

namespace topocc {

VertexSet make_vertex_set(std::size_t n, std::span<const Vertex> m) {
    VertexSet s(n);
    for (Vertex v : m) {
        if (v >= n) throw Error(ErrorCode::InvalidTerminals, "vertex " + std::to_string(v) + " out of range");
        s.set(v);
    }
    return s;
}

std::vector<Vertex> members(const VertexSet& s) {
    std::vector<Vertex> out;
    out.reserve(s.count());
    for (auto i = s.find_first(); i != VertexSet::npos; i = s.find_next(i)) out.push_back(static_cast<Vertex>(i));
    return out;
}

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges) : n_(vertex_count) {
    if (n_ == 0) throw Error(ErrorCode::InvalidGraph, "graph needs at least one vertex");
    for (auto& e : edges) {
        if (e.u >= n_ || e.v >= n_)
            throw Error(ErrorCode::InvalidGraph,
                        "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
        if (e.u == e.v) throw Error(ErrorCode::InvalidGraph, "self-loop at " + std::to_string(e.u));
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    std::vector<std::size_t> degree(n_, 0);
    for (const auto& e : edges_) {
        ++degree[e.u];
        ++degree[e.v];
    }
    offsets_.assign(n_ + 1, 0);
    for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
    adjacency_.resize(offsets_[n_]);
    adjacency_edge_.resize(offsets_[n_]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        adjacency_[fill[e.u]] = e.v;
        adjacency_edge_[fill[e.u]++] = i;
        adjacency_[fill[e.v]] = e.u;
        adjacency_edge_[fill[e.v]++] = i;
    }
    for (std::size_t v = 0; v < n_; ++v) {
        // keep neighbours sorted so BFS order (and every tie-break built on it) is by vertex index
        std::vector<std::pair<Vertex, std::size_t>> tmp;
        for (auto k = offsets_[v]; k < offsets_[v + 1]; ++k) tmp.emplace_back(adjacency_[k], adjacency_edge_[k]);
        std::sort(tmp.begin(), tmp.end());
        for (std::size_t k = 0; k < tmp.size(); ++k) {
            adjacency_[offsets_[v] + k] = tmp[k].first;
            adjacency_edge_[offsets_[v] + k] = tmp[k].second;
        }
    }
}

std::span<const Vertex> Graph::neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::optional<std::size_t> Graph::edge_index(Vertex a, Vertex b) const {
    if (a >= n_ || b >= n_) return std::nullopt;
    auto nb = neighbors(a);
    auto it = std::lower_bound(nb.begin(), nb.end(), b);
    if (it == nb.end() || *it != b) return std::nullopt;
    return adjacency_edge_[offsets_[a] + static_cast<std::size_t>(it - nb.begin())];
}

bool Graph::is_connected() const {
    const auto d = bfs(Vertex{0});
    return std::all_of(d.begin(), d.end(), [](int x) { return x >= 0; });
}

std::vector<int> Graph::bfs(Vertex source) const {
    const Vertex src[] = {source};
    return bfs(std::span<const Vertex>(src));
}

std::vector<int> Graph::bfs(std::span<const Vertex> sources) const {
    std::vector<int> dist(n_, -1);
    std::vector<Vertex> queue;
    queue.reserve(n_);
    for (Vertex s : sources) {
        if (dist[s] < 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex u = queue[head];
        for (Vertex w : neighbors(u)) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

std::vector<Vertex> Graph::shortest_path(Vertex from, Vertex to) const {
    constexpr Vertex none = std::numeric_limits<Vertex>::max();
    std::vector<Vertex> parent(n_, none);
    std::vector<Vertex> queue{from};
    parent[from] = from;
    for (std::size_t head = 0; head < queue.size() && parent[to] == none; ++head) {
        const Vertex u = queue[head];
        for (Vertex w : neighbors(u)) {
            if (parent[w] == none) {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    if (parent[to] == none) throw Error(ErrorCode::DisconnectedGraph, "no path between terminals");
    std::vector<Vertex> path{to};
    while (path.back() != from) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

Graph Graph::relabeled(std::span<const Vertex> perm) const {
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) out.push_back({perm[e.u], perm[e.v]});
    return Graph(n_, std::move(out));
}

std::size_t GroupedTerminals::slot_count() const {
    std::size_t total = 0;
    for (const auto& g : groups) total += g.size();
    return total;
}

std::vector<Vertex> GroupedTerminals::flat() const {
    std::set<Vertex> all;
    for (const auto& g : groups) all.insert(g.begin(), g.end());
    return {all.begin(), all.end()};
}

std::vector<Vertex> GroupedTerminals::multiset() const {
    std::vector<Vertex> out;
    for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
    return out;
}

void GroupedTerminals::validate(const Graph& g) const {
    if (groups.empty()) throw Error(ErrorCode::EmptyTerminalSet, "no terminal groups");
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].empty()) throw Error(ErrorCode::EmptyTerminalSet, "group " + std::to_string(i) + " is empty");
        std::set<Vertex> seen;
        for (Vertex v : groups[i]) {
            if (v >= g.vertex_count())
                throw Error(ErrorCode::InvalidTerminals, "terminal " + std::to_string(v) + " not in graph");
            if (!seen.insert(v).second)
                throw Error(ErrorCode::InvalidTerminals,
                            "vertex " + std::to_string(v) + " repeated in group " + std::to_string(i));
        }
    }
    if (!matchings) return;
    if (matchings->size() != groups.size())
        throw Error(ErrorCode::InvalidTerminals, "matching list count differs from group count");
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const std::set<Vertex> members(groups[i].begin(), groups[i].end());
        if (groups[i].size() % 2 != 0)
            throw Error(ErrorCode::OddTerminalCount, "group " + std::to_string(i) + " has odd size with a matching");
        std::set<Vertex> used;
        for (auto [a, b] : (*matchings)[i]) {
            if (a == b || !members.count(a) || !members.count(b))
                throw Error(ErrorCode::InvalidTerminals, "matching pair outside group " + std::to_string(i));
            if (!used.insert(a).second || !used.insert(b).second)
                throw Error(ErrorCode::OverlappingPairs, "vertex reused in matching of group " + std::to_string(i));
        }
    }
}

std::vector<Vertex> SteinerTree::vertices() const {
    std::set<Vertex> vs;
    for (const auto& e : edges) {
        vs.insert(e.u);
        vs.insert(e.v);
    }
    return {vs.begin(), vs.end()};
}

namespace {

void require_terminals(const Graph& g, std::span<const Vertex> terminals) {
    if (terminals.empty()) throw Error(ErrorCode::EmptyTerminalSet, "terminal set is empty");
    for (Vertex v : terminals)
        if (v >= g.vertex_count())
            throw Error(ErrorCode::InvalidTerminals, "terminal " + std::to_string(v) + " not in graph");
}

std::vector<Vertex> distinct_sorted(std::span<const Vertex> vs) {
    std::vector<Vertex> out(vs.begin(), vs.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

using detail::DisjointSets;

// Spanning tree of the subgraph induced by `edges`, then strip non-terminal leaves.
SteinerTree prune_to_tree(std::size_t n, std::vector<Edge> edges, const std::vector<Vertex>& terminals) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    DisjointSets ds(n);
    std::vector<Edge> tree;
    for (const auto& e : edges)
        if (ds.unite(e.u, e.v)) tree.push_back(e);

    VertexSet is_terminal = make_vertex_set(n, terminals);
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> degree(n, 0);
        for (const auto& e : tree) {
            ++degree[e.u];
            ++degree[e.v];
        }
        std::vector<Edge> kept;
        for (const auto& e : tree) {
            const bool leaf_u = degree[e.u] == 1 && !is_terminal[e.u];
            const bool leaf_v = degree[e.v] == 1 && !is_terminal[e.v];
            if (leaf_u || leaf_v) {
                changed = true;
            } else {
                kept.push_back(e);
            }
        }
        tree = std::move(kept);
    }
    SteinerTree out;
    out.edges = std::move(tree);
    out.cost = static_cast<int>(out.edges.size());
    // spanning check: all terminals in one component of the tree
    DisjointSets check(n);
    for (const auto& e : out.edges) check.unite(e.u, e.v);
    out.spans_terminals = std::all_of(terminals.begin(), terminals.end(),
                                      [&](Vertex v) { return check.find(v) == check.find(terminals.front()); });
    return out;
}

}  // namespace

DistanceMatrix shortest_path_matrix(const Graph& g) {
    auto data = kernels::parallel::all_pairs_bfs(g);
    if (std::any_of(data.begin(), data.end(), [](int d) { return d < 0; }))
        throw Error(ErrorCode::DisconnectedGraph, "graph has unreachable vertex pairs");
    return DistanceMatrix(g.vertex_count(), std::move(data));
}

MetricClosure metric_closure(const Graph& g, std::span<const Vertex> terminals) {
    require_terminals(g, terminals);
    MetricClosure out;
    out.terminals = distinct_sorted(terminals);
    for (std::size_t a = 0; a < out.terminals.size(); ++a) {
        const auto dist = g.bfs(out.terminals[a]);
        for (std::size_t b = a + 1; b < out.terminals.size(); ++b) {
            const int d = dist[out.terminals[b]];
            if (d < 0) throw Error(ErrorCode::DisconnectedGraph, "terminals in different components");
            out.edges.push_back({out.terminals[a], out.terminals[b], d});
        }
    }
    return out;
}

std::vector<WeightedEdge> closure_mst(const MetricClosure& closure) {
    auto edges = closure.edges;
    std::stable_sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        if (a.weight != b.weight) return a.weight < b.weight;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    Vertex max_vertex = 0;
    for (Vertex v : closure.terminals) max_vertex = std::max(max_vertex, v);
    DisjointSets ds(static_cast<std::size_t>(max_vertex) + 1);
    std::vector<WeightedEdge> mst;
    for (const auto& e : edges)
        if (ds.unite(e.u, e.v)) mst.push_back(e);
    return mst;
}

int closure_mst_cost(const Graph& g, std::span<const Vertex> terminals) {
    int cost = 0;
    for (const auto& e : closure_mst(metric_closure(g, terminals))) cost += e.weight;
    return cost;
}

SteinerTree steiner_tree_approx(const Graph& g, std::span<const Vertex> terminals) {
    const auto closure = metric_closure(g, terminals);
    std::vector<Edge> expanded;
    for (const auto& ce : closure_mst(closure)) {
        const auto path = g.shortest_path(ce.u, ce.v);
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            expanded.push_back({std::min(path[i], path[i + 1]), std::max(path[i], path[i + 1])});
    }
    return prune_to_tree(g.vertex_count(), std::move(expanded), closure.terminals);
}

SteinerTree steiner_tree_exact(const Graph& g, std::span<const Vertex> terminals) {
    require_terminals(g, terminals);
    const std::size_t n = g.vertex_count();
    if (n > kSteinerExactMaxVertices)
        throw Error(ErrorCode::InstanceTooLarge,
                    "exact Steiner tree limited to " + std::to_string(kSteinerExactMaxVertices) + " vertices");
    const auto terms = distinct_sorted(terminals);
    std::uint32_t terminal_mask = 0;
    for (Vertex v : terms) terminal_mask |= 1u << v;
    const std::uint32_t others = ((1u << n) - 1u) & ~terminal_mask;

    // Enumerate Steiner-point subsets by increasing size; the first subset
    // whose induced subgraph with K is connected gives the optimum.
    std::vector<std::uint32_t> subsets;
    for (std::uint32_t s = others;; s = (s - 1) & others) {
        subsets.push_back(s);
        if (s == 0) break;
    }
    std::stable_sort(subsets.begin(), subsets.end(), [](std::uint32_t a, std::uint32_t b) {
        const int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    for (std::uint32_t extra : subsets) {
        const std::uint32_t keep = terminal_mask | extra;
        std::vector<Edge> induced;
        for (const auto& e : g.edges())
            if ((keep >> e.u & 1u) && (keep >> e.v & 1u)) induced.push_back(e);
        DisjointSets ds(n);
        std::vector<Edge> tree;
        for (const auto& e : induced)
            if (ds.unite(e.u, e.v)) tree.push_back(e);
        const auto root = ds.find(terms.front());
        bool connected = true;
        for (std::size_t v = 0; v < n && connected; ++v)
            if ((keep >> v & 1u) && ds.find(v) != root) connected = false;
        if (!connected) continue;
        SteinerTree out;
        out.edges = std::move(tree);
        out.cost = static_cast<int>(out.edges.size());
        out.spans_terminals = true;
        return out;
    }
    throw Error(ErrorCode::DisconnectedGraph, "terminals are not connected");
}

Median sigma(const Graph& g, std::span<const Vertex> terminals) {
    require_terminals(g, terminals);
    std::vector<long long> status(g.vertex_count(), 0);
    for (Vertex w : terminals) {
        const auto d = g.bfs(w);
        for (std::size_t v = 0; v < d.size(); ++v) {
            if (d[v] < 0) throw Error(ErrorCode::DisconnectedGraph, "graph is disconnected");
            status[v] += d[v];
        }
    }
    const auto best = std::min_element(status.begin(), status.end());
    return {static_cast<int>(*best), static_cast<Vertex>(best - status.begin())};
}

GroupedMedian sigma_grouped_detail(const Graph& g, const GroupedTerminals& groups) {
    if (groups.groups.empty()) throw Error(ErrorCode::EmptyTerminalSet, "no terminal groups");
    std::vector<long long> status(g.vertex_count(), 0);
    std::vector<std::vector<int>> nearest;
    for (const auto& group : groups.groups) {
        require_terminals(g, group);
        auto d = g.bfs(std::span<const Vertex>(group));
        for (std::size_t v = 0; v < d.size(); ++v) {
            if (d[v] < 0) throw Error(ErrorCode::DisconnectedGraph, "graph is disconnected");
            status[v] += d[v];
        }
        nearest.push_back(std::move(d));
    }
    const auto best = std::min_element(status.begin(), status.end());
    GroupedMedian out;
    out.value = static_cast<int>(*best);
    out.median = static_cast<Vertex>(best - status.begin());
    const auto from_median = g.bfs(out.median);
    for (const auto& group : groups.groups) {
        Vertex rep = group.front();
        for (Vertex u : group)
            if (from_median[u] < from_median[rep] || (from_median[u] == from_median[rep] && u < rep)) rep = u;
        out.representatives.push_back(rep);
    }
    return out;
}

int sigma_grouped(const Graph& g, const GroupedTerminals& groups) { return sigma_grouped_detail(g, groups).value; }

int matching_distance(const Graph& g, std::span<const VertexPair> pairs) {
    std::set<Vertex> used;
    int total = 0;
    for (auto [a, b] : pairs) {
        if (!used.insert(a).second || !used.insert(b).second)
            throw Error(ErrorCode::OverlappingPairs, "vertex appears in two pairs");
        const auto d = g.bfs(a);
        if (d[b] < 0) throw Error(ErrorCode::DisconnectedGraph, "pair endpoints disconnected");
        total += d[b];
    }
    return total;
}

WorstMatching worst_case_matching(const Graph& g, std::span<const Vertex> terminals) {
    if (terminals.size() % 2 != 0) throw Error(ErrorCode::OddTerminalCount, "odd number of terminals");
    WorstMatching out;
    if (terminals.empty()) return out;
    require_terminals(g, terminals);
    const std::vector<Vertex> ks(terminals.begin(), terminals.end());
    const std::size_t k = ks.size();
    std::vector<std::vector<int>> d(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto row = g.bfs(ks[i]);
        for (std::size_t j = 0; j < k; ++j) {
            if (row[ks[j]] < 0) throw Error(ErrorCode::DisconnectedGraph, "terminals disconnected");
            d[i].push_back(row[ks[j]]);
        }
    }

    if (k > kWorstMatchingExactMaxTerminals) {
        // greedy farthest pair, ties by smallest positions
        std::vector<bool> used(k, false);
        out.heuristic = true;
        for (std::size_t round = 0; round < k / 2; ++round) {
            int best = -1;
            std::size_t bi = 0, bj = 0;
            for (std::size_t i = 0; i < k; ++i) {
                if (used[i]) continue;
                for (std::size_t j = i + 1; j < k; ++j)
                    if (!used[j] && d[i][j] > best) {
                        best = d[i][j];
                        bi = i;
                        bj = j;
                    }
            }
            used[bi] = used[bj] = true;
            out.pairs.emplace_back(ks[bi], ks[bj]);
            out.value += best;
        }
        return out;
    }

    std::vector<std::size_t> current, best_pairs;
    int best_value = -1;
    std::vector<bool> used(k, false);
    // recursive enumeration: pair the lowest unused position with each later one
    auto recurse = [&](auto&& self, int value) -> void {
        std::size_t first = 0;
        while (first < k && used[first]) ++first;
        if (first == k) {
            if (value > best_value) {
                best_value = value;
                best_pairs = current;
            }
            return;
        }
        used[first] = true;
        for (std::size_t j = first + 1; j < k; ++j) {
            if (used[j]) continue;
            used[j] = true;
            current.push_back(first);
            current.push_back(j);
            self(self, value + d[first][j]);
            current.pop_back();
            current.pop_back();
            used[j] = false;
        }
        used[first] = false;
    };
    recurse(recurse, 0);
    for (std::size_t i = 0; i < best_pairs.size(); i += 2) out.pairs.emplace_back(ks[best_pairs[i]], ks[best_pairs[i + 1]]);
    out.value = best_value;
    return out;
}

}  // namespace topocc

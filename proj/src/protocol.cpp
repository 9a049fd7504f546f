#include "topocc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "topocc/error.hpp"
#include "topocc/kernels.hpp"

namespace topocc {

void InputAssignment::validate(const GroupedTerminals& groups) const {
    if (values.size() != groups.group_count())
        throw Error(ErrorCode::ShapeMismatch, "input assignment has a different number of groups");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != groups.groups[i].size())
            throw Error(ErrorCode::ShapeMismatch, "input assignment does not fill every terminal slot");
        for (const auto& x : values[i])
            if (x.size() != n) throw Error(ErrorCode::ShapeMismatch, "input string of the wrong length");
    }
}

Network::Network(const Graph& g)
    : g_(&g), forward_(g.edge_count(), 0), backward_(g.edge_count(), 0), ready_(g.vertex_count(), 0) {}

void Network::send(Vertex from, Vertex to, std::size_t bits) {
    const auto e = g_->edge_index(from, to);
    if (!e) throw Error(ErrorCode::InvalidGraph, "send over a non-edge");
    (from < to ? forward_ : backward_)[*e] += bits;
    total_ += bits;
    ready_[to] = std::max(ready_[to], ready_[from] + 1);
    rounds_ = std::max(rounds_, ready_[to]);
}

void Network::route(const std::vector<Vertex>& path, std::size_t bits) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) send(path[i], path[i + 1], bits);
}

ProtocolKind parse_protocol(const std::string& name) {
    static const std::map<std::string, ProtocolKind> names{
        {"xor_aggregate", ProtocolKind::XorAggregate}, {"equality_hash", ProtocolKind::EqualityHash},
        {"ed_median", ProtocolKind::EdMedian},         {"disj_and", ProtocolKind::DisjAnd},
        {"ed_xor", ProtocolKind::EdXor},               {"xor_ed", ProtocolKind::XorEd},
        {"xor_ip", ProtocolKind::XorIp},               {"silent", ProtocolKind::Silent}};
    const auto it = names.find(name);
    if (it == names.end()) throw Error(ErrorCode::UnsupportedMode, "unknown protocol '" + name + "'");
    return it->second;
}

std::string to_string(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::XorAggregate: return "xor_aggregate";
        case ProtocolKind::EqualityHash: return "equality_hash";
        case ProtocolKind::EdMedian: return "ed_median";
        case ProtocolKind::DisjAnd: return "disj_and";
        case ProtocolKind::EdXor: return "ed_xor";
        case ProtocolKind::XorEd: return "xor_ed";
        case ProtocolKind::XorIp: return "xor_ip";
        case ProtocolKind::Silent: return "silent";
    }
    return "unknown";
}

std::size_t default_ed_hash_bits(std::size_t k) {
    std::size_t log = 0;
    while ((std::size_t{1} << log) < k) ++log;
    return kEdHashConstant * std::max<std::size_t>(1, log);
}

namespace {

// A tree given by its edges, oriented toward `root`.
struct RootedTree {
    Vertex root = 0;
    std::vector<Vertex> order;  // BFS order from the root
    std::vector<Vertex> parent;
};

RootedTree root_tree(std::size_t n, const std::vector<Edge>& edges, Vertex root) {
    const Graph t(n, edges);
    RootedTree rt;
    rt.root = root;
    rt.parent.assign(n, root);
    std::vector<bool> seen(n, false);
    seen[root] = true;
    rt.order.push_back(root);
    for (std::size_t head = 0; head < rt.order.size(); ++head) {
        const Vertex u = rt.order[head];
        for (Vertex w : t.neighbors(u)) {
            if (seen[w]) continue;
            seen[w] = true;
            rt.parent[w] = u;
            rt.order.push_back(w);
        }
    }
    return rt;
}

// Random parity hash: bit j of h(x) is <r_j, x> mod 2, r_j from the public coins.
class ParityHash {
public:
    ParityHash(std::size_t n, std::size_t bits, Rng& coins) {
        for (std::size_t j = 0; j < bits; ++j) {
            BitString r(n);
            for (std::size_t b = 0; b < n; ++b)
                if (coins.coin()) r.set(b);
            rows_.push_back(std::move(r));
        }
    }
    [[nodiscard]] BitString operator()(const BitString& x) const {
        BitString h(rows_.size());
        for (std::size_t j = 0; j < rows_.size(); ++j) h[j] = ((rows_[j] & x).count() & 1u) != 0;
        return h;
    }

private:
    std::vector<BitString> rows_;
};

// Per-vertex value of one group (xor of the slots sitting there; a vertex
// appears at most once per group, so this is just the slot's input).
std::map<Vertex, BitString> group_values(const GroupedTerminals& groups, const InputAssignment& in, std::size_t i) {
    std::map<Vertex, BitString> out;
    for (std::size_t p = 0; p < groups.groups[i].size(); ++p) out.emplace(groups.groups[i][p], in.at(i, p));
    return out;
}

// Fold values leaf-to-root over a Steiner tree of the holders, `bits` per tree edge.
template <class Combine>
BitString fold_up(Network& net, const std::vector<Edge>& tree, Vertex root, const std::map<Vertex, BitString>& own,
                  std::size_t bits, const BitString& identity, Combine combine) {
    const std::size_t n = net.graph().vertex_count();
    const auto rt = root_tree(n, tree, root);
    std::vector<BitString> acc(n, identity);
    for (const auto& [v, x] : own) acc[v] = combine(acc[v], x);
    for (std::size_t k = rt.order.size(); k-- > 1;) {
        const Vertex v = rt.order[k];
        net.send(v, rt.parent[v], bits);
        acc[rt.parent[v]] = combine(acc[rt.parent[v]], acc[v]);
    }
    return acc[root];
}

void broadcast_down(Network& net, const std::vector<Edge>& tree, Vertex root, std::size_t bits) {
    const auto rt = root_tree(net.graph().vertex_count(), tree, root);
    for (std::size_t k = 1; k < rt.order.size(); ++k) net.send(rt.parent[rt.order[k]], rt.order[k], bits);
}

std::vector<Vertex> distinct(std::vector<Vertex> vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

// Steiner tree edges over `holders` (empty when fewer than two distinct holders).
std::vector<Edge> holder_tree(const Graph& g, const std::vector<Vertex>& holders) {
    const auto d = distinct(holders);
    if (d.size() < 2) return {};
    return steiner_tree_approx(g, d).edges;
}

const auto bit_xor = [](const BitString& a, const BitString& b) { return a ^ b; };
const auto bit_and = [](const BitString& a, const BitString& b) { return a & b; };

struct Outcome {
    bool output = false;
    BitString value;
    std::optional<bool> negated;
    Vertex at = 0;
};

class Runner {
public:
    Runner(const Graph& g, const GroupedTerminals& groups, const InputAssignment& in, std::size_t hash_bits,
           std::uint64_t seed)
        : g_(g), groups_(groups), in_(in), hb_(hash_bits), coins_(seed), net_(g) {}

    Network& net() { return net_; }
    std::map<std::string, std::uint64_t>& stages() { return stages_; }

    Outcome xor_aggregate() {
        const auto& k = groups_.groups[0];
        const Vertex root = *std::min_element(k.begin(), k.end());
        Outcome o;
        o.value = fold_up(net_, holder_tree(g_, k), root, group_values(groups_, in_, 0), in_.n, BitString(in_.n),
                          bit_xor);
        o.output = o.value.any();
        o.at = root;
        return o;
    }

    Outcome disj_and() {
        const auto& k = groups_.groups[0];
        const Vertex root = *std::min_element(k.begin(), k.end());
        Outcome o;
        o.value = fold_up(net_, holder_tree(g_, k), root, group_values(groups_, in_, 0), in_.n, ~BitString(in_.n),
                          bit_and);
        o.output = o.value.none();
        o.negated = !o.output;
        o.at = root;
        return o;
    }

    Outcome equality_hash() {
        const auto& k = groups_.groups[0];
        const Vertex root = *std::min_element(k.begin(), k.end());
        const ParityHash h(in_.n, hb_, coins_);
        const std::size_t n = g_.vertex_count();
        const auto rt = root_tree(n, holder_tree(g_, k), root);
        // per vertex: unequal flag and a representative hash of its subtree
        std::vector<bool> flag(n, false);
        std::vector<std::optional<BitString>> rep(n);
        std::vector<std::vector<BitString>> seen(n);
        for (const auto& [v, x] : group_values(groups_, in_, 0)) seen[v].push_back(h(x));
        auto settle = [&](Vertex v) {
            for (const auto& s : seen[v])
                if (s != seen[v].front()) flag[v] = true;
            if (!seen[v].empty()) rep[v] = seen[v].front();
        };
        for (std::size_t idx = rt.order.size(); idx-- > 1;) {
            const Vertex v = rt.order[idx];
            settle(v);
            const Vertex p = rt.parent[v];
            net_.send(v, p, 1 + hb_);
            if (flag[v]) flag[p] = true;
            if (rep[v]) seen[p].push_back(*rep[v]);
        }
        settle(root);
        Outcome o;
        o.output = !flag[root];
        o.at = root;
        return o;
    }

    // Fingerprints of group i routed to its median; returns (ED bit, median).
    std::pair<bool, Vertex> ed_to_median(std::size_t i, const ParityHash& h) {
        const auto& k = groups_.groups[i];
        const Vertex m = sigma(g_, k).median;
        std::vector<BitString> prints;
        for (std::size_t p = 0; p < k.size(); ++p) {
            prints.push_back(h(in_.at(i, p)));
            net_.route(g_.shortest_path(k[p], m), hb_);
        }
        return {all_distinct(prints), m};
    }

    Outcome ed_median() {
        const ParityHash h(in_.n, hb_, coins_);
        Outcome o;
        std::tie(o.output, o.at) = ed_to_median(0, h);
        return o;
    }

    Outcome ed_xor() {
        const ParityHash h(in_.n, hb_, coins_);
        std::vector<BitString> group_hash;
        for (std::size_t i = 0; i < groups_.group_count(); ++i) {
            const auto& k = groups_.groups[i];
            const Vertex root = *std::min_element(k.begin(), k.end());
            std::map<Vertex, BitString> own;
            for (std::size_t p = 0; p < k.size(); ++p) own.emplace(k[p], h(in_.at(i, p)));
            const auto tree = holder_tree(g_, k);
            const auto before = net_.total();
            group_hash.push_back(fold_up(net_, tree, root, own, hb_, BitString(hb_), bit_xor));
            broadcast_down(net_, tree, root, hb_);
            stages_["xor_hash"] += net_.total() - before;
        }
        const auto med = sigma_grouped_detail(g_, groups_);
        const auto before = net_.total();
        for (std::size_t i = 0; i < groups_.group_count(); ++i)
            net_.route(g_.shortest_path(med.representatives[i], med.median), hb_);
        stages_["ed"] += net_.total() - before;
        Outcome o;
        o.output = all_distinct(group_hash);
        o.at = med.median;
        return o;
    }

    // 1-bit xor fold of per-holder bits over a Steiner tree of the holders.
    Outcome parity_fold(const std::vector<std::pair<Vertex, bool>>& bits) {
        Outcome o;
        std::map<Vertex, BitString> own;
        std::vector<Vertex> holders;
        for (auto [v, b] : bits) {
            holders.push_back(v);
            auto [it, fresh] = own.try_emplace(v, BitString(1));
            it->second[0] = it->second[0] ^ b;
        }
        if (holders.empty()) return o;
        const Vertex root = *std::min_element(holders.begin(), holders.end());
        const auto before = net_.total();
        o.output = fold_up(net_, holder_tree(g_, holders), root, own, 1, BitString(1), bit_xor)[0];
        stages_["xor_fold"] += net_.total() - before;
        o.at = root;
        return o;
    }

    Outcome xor_ed() {
        const ParityHash h(in_.n, hb_, coins_);
        std::vector<std::pair<Vertex, bool>> bits;
        const auto before = net_.total();
        for (std::size_t i = 0; i < groups_.group_count(); ++i) {
            auto [ed, m] = ed_to_median(i, h);
            bits.emplace_back(m, ed);
        }
        stages_["ed"] += net_.total() - before;
        return parity_fold(bits);
    }

    Outcome xor_ip() {
        std::vector<std::pair<Vertex, bool>> bits;
        for (std::size_t i = 0; i < groups_.group_count(); ++i) {
            const auto& pairs = (*groups_.matchings)[i];
            if (pairs.empty()) continue;
            const auto values = group_values(groups_, in_, i);
            std::map<Vertex, BitString> held;
            std::vector<Vertex> holders;
            auto before = net_.total();
            for (auto [u, v] : pairs) {
                net_.route(g_.shortest_path(v, u), in_.n);
                held.emplace(u, values.at(u) & values.at(v));
                holders.push_back(u);
            }
            stages_["pair_exchange"] += net_.total() - before;
            before = net_.total();
            const Vertex root = pairs.front().first;
            const auto acc = fold_up(net_, holder_tree(g_, holders), root, held, in_.n, BitString(in_.n), bit_xor);
            stages_["aggregation"] += net_.total() - before;
            bits.emplace_back(root, (acc.count() & 1u) != 0);
        }
        return parity_fold(bits);
    }

private:
    const Graph& g_;
    const GroupedTerminals& groups_;
    const InputAssignment& in_;
    std::size_t hb_;
    Rng coins_;
    Network net_;
    std::map<std::string, std::uint64_t> stages_;
};

bool single_group(ProtocolKind kind) {
    return kind == ProtocolKind::XorAggregate || kind == ProtocolKind::EqualityHash || kind == ProtocolKind::EdMedian ||
           kind == ProtocolKind::DisjAnd;
}

}  // namespace

ProtocolTrace run(const Graph& g, const GroupedTerminals& groups, const ProtocolSpec& spec,
                  const InputAssignment& inputs, std::uint64_t seed) {
    if (groups.group_count() == 0 || std::any_of(groups.groups.begin(), groups.groups.end(),
                                                 [](const auto& k) { return k.empty(); }))
        throw Error(ErrorCode::ShapeMismatch, "every group needs at least one terminal");
    if (single_group(spec.kind) && groups.group_count() != 1)
        throw Error(ErrorCode::ShapeMismatch, to_string(spec.kind) + " runs on exactly one group");
    if (spec.kind == ProtocolKind::XorIp && !groups.has_matchings())
        throw Error(ErrorCode::ShapeMismatch, "xor_ip needs a matching for every group");
    if (spec.n != 0 && spec.n != inputs.n) throw Error(ErrorCode::ShapeMismatch, "input length differs from n");
    inputs.validate(groups);
    groups.validate(g);

    const std::size_t hb = resolved_hash_bits(spec, groups);
    Runner r(g, groups, inputs, hb, seed);
    Outcome o;
    switch (spec.kind) {
        case ProtocolKind::XorAggregate: o = r.xor_aggregate(); break;
        case ProtocolKind::EqualityHash: o = r.equality_hash(); break;
        case ProtocolKind::EdMedian: o = r.ed_median(); break;
        case ProtocolKind::DisjAnd: o = r.disj_and(); break;
        case ProtocolKind::EdXor: o = r.ed_xor(); break;
        case ProtocolKind::XorEd: o = r.xor_ed(); break;
        case ProtocolKind::XorIp: o = r.xor_ip(); break;
        case ProtocolKind::Silent: o.at = groups.groups[0][0]; break;
    }

    ProtocolTrace t;
    t.protocol = to_string(spec.kind);
    t.seed = seed;
    t.params["n"] = inputs.n;
    t.params["groups"] = groups.group_count();
    t.params["slots"] = groups.slot_count();
    if (spec.kind == ProtocolKind::EqualityHash || spec.kind == ProtocolKind::EdMedian ||
        spec.kind == ProtocolKind::EdXor || spec.kind == ProtocolKind::XorEd)
        t.params["hash_bits"] = hb;
    t.edges = g.edges();
    t.bits_uv = r.net().forward();
    t.bits_vu = r.net().backward();
    t.total = r.net().total();
    t.output = o.output;
    t.output_value = o.value;
    t.output_negated = o.negated;
    t.output_vertex = o.at;
    t.rounds = r.net().rounds();
    t.stage_bits = r.stages();
    return t;
}

std::size_t resolved_hash_bits(const ProtocolSpec& spec, const GroupedTerminals& groups) {
    if (spec.hash_bits != 0) return spec.hash_bits;
    return spec.kind == ProtocolKind::EqualityHash ? kEqualityHashBits : default_ed_hash_bits(groups.slot_count());
}

CostBound cost_bound(const Graph& g, const GroupedTerminals& groups, const ProtocolSpec& spec, std::size_t n) {
    const std::uint64_t hb = resolved_hash_bits(spec, groups);
    auto tree_edges = [&](const std::vector<Vertex>& holders) -> std::uint64_t {
        return holder_tree(g, holders).size();
    };
    switch (spec.kind) {
        case ProtocolKind::XorAggregate:
        case ProtocolKind::DisjAnd: return {n * tree_edges(groups.groups[0]), true};
        case ProtocolKind::EqualityHash: return {(1 + hb) * tree_edges(groups.groups[0]), true};
        case ProtocolKind::EdMedian: return {hb * static_cast<std::uint64_t>(sigma(g, groups.groups[0]).value), true};
        case ProtocolKind::EdXor: {
            std::uint64_t trees = 0;
            for (const auto& k : groups.groups) trees += tree_edges(k);
            return {hb * (static_cast<std::uint64_t>(sigma_grouped(g, groups)) + 2 * trees), false};
        }
        case ProtocolKind::XorEd: {
            std::uint64_t ed = 0;
            std::vector<Vertex> medians;
            for (const auto& k : groups.groups) {
                const auto m = sigma(g, k);
                ed += hb * static_cast<std::uint64_t>(m.value);
                medians.push_back(m.median);
            }
            return {ed + tree_edges(medians), false};
        }
        case ProtocolKind::XorIp: {
            if (!groups.matchings) throw Error(ErrorCode::MissingMatchings, "xor_ip needs matchings");
            std::uint64_t total = 0;
            std::vector<Vertex> roots;
            for (const auto& m : *groups.matchings) {
                if (m.empty()) continue;
                std::vector<Vertex> holders;
                for (auto [u, v] : m) holders.push_back(u);
                total += n * static_cast<std::uint64_t>(matching_distance(g, m)) + n * tree_edges(holders);
                roots.push_back(m.front().first);
            }
            return {total + tree_edges(roots), false};
        }
        case ProtocolKind::Silent: return {0, true};
    }
    return {0, true};
}

BitString xor_all(const std::vector<BitString>& xs) {
    BitString out(xs.empty() ? 0 : xs.front().size());
    for (const auto& x : xs) out ^= x;
    return out;
}

BitString and_all(const std::vector<BitString>& xs) {
    BitString out(xs.empty() ? 0 : xs.front().size());
    out.set();
    for (const auto& x : xs) out &= x;
    return out;
}

bool disjoint(const std::vector<BitString>& xs) { return and_all(xs).none(); }

bool all_equal(const std::vector<BitString>& xs) {
    return std::all_of(xs.begin(), xs.end(), [&](const BitString& x) { return x == xs.front(); });
}

bool all_distinct(const std::vector<BitString>& xs) {
    std::set<BitString> seen(xs.begin(), xs.end());
    return seen.size() == xs.size();
}

bool inner_product(const GroupedTerminals& groups, const InputAssignment& in, std::size_t group) {
    if (!groups.matchings) throw Error(ErrorCode::MissingMatchings, "inner product needs matchings");
    const auto values = group_values(groups, in, group);
    BitString acc(in.n);
    for (auto [u, v] : (*groups.matchings)[group]) acc ^= values.at(u) & values.at(v);
    return (acc.count() & 1u) != 0;
}

BitString expected_xor(const InputAssignment& in, std::size_t group) { return xor_all(in.values[group]); }

bool expected_output(const GroupedTerminals& groups, ProtocolKind kind, const InputAssignment& in) {
    const auto& v = in.values;
    switch (kind) {
        case ProtocolKind::XorAggregate: return xor_all(v[0]).any();
        case ProtocolKind::EqualityHash: return all_equal(v[0]);
        case ProtocolKind::EdMedian: return all_distinct(v[0]);
        case ProtocolKind::DisjAnd: return disjoint(v[0]);
        case ProtocolKind::EdXor: {
            std::vector<BitString> xs;
            for (const auto& group : v) xs.push_back(xor_all(group));
            return all_distinct(xs);
        }
        case ProtocolKind::XorEd: {
            bool parity = false;
            for (const auto& group : v) parity ^= all_distinct(group);
            return parity;
        }
        case ProtocolKind::XorIp: {
            bool parity = false;
            for (std::size_t i = 0; i < v.size(); ++i) parity ^= inner_product(groups, in, i);
            return parity;
        }
        case ProtocolKind::Silent: return false;
    }
    return false;
}

std::uint64_t cut_projection(const Graph& g, const ProtocolTrace& trace, const Cut& c) {
    std::uint64_t bits = 0;
    for (std::size_t e : crossing_edges(g, c)) bits += trace.edge_total(e);
    return bits;
}

std::uint64_t input_seed(std::uint64_t seed, std::size_t run) { return Rng(seed).split(2 * run).seed(); }
std::uint64_t coin_seed(std::uint64_t seed, std::size_t run) { return Rng(seed).split(2 * run + 1).seed(); }

FeasibilityReport measured_vector_feasibility(const Graph& g, const GroupedTerminals& groups, const ProtocolSpec& spec,
                                              const Sampler& sampler, std::size_t runs, const BValueSpec& demands,
                                              double scale, std::uint64_t seed) {
    if (runs == 0) throw Error(ErrorCode::ShapeMismatch, "need at least one run");
    if (!(scale > 0.0)) throw Error(ErrorCode::ShapeMismatch, "scale must be positive");
    const std::size_t m = g.edge_count();
    std::vector<std::vector<std::uint64_t>> per_run(runs);
    std::vector<char> wrong(runs, 0);
    kernels::parallel::for_each_index(runs, [&](std::size_t r) {
        const auto in = sampler(input_seed(seed, r));
        const auto trace = run(g, groups, spec, in, coin_seed(seed, r));
        per_run[r].resize(m);
        for (std::size_t e = 0; e < m; ++e) per_run[r][e] = trace.edge_total(e);
        wrong[r] = trace.output != expected_output(groups, spec.kind, in);
    });

    FeasibilityReport rep;
    rep.runs = runs;
    rep.deterministic = std::all_of(per_run.begin(), per_run.end(), [&](const auto& v) { return v == per_run[0]; });
    rep.error_rate = static_cast<double>(std::count(wrong.begin(), wrong.end(), 1)) / static_cast<double>(runs);
    rep.mean_edge_bits.assign(m, 0.0);
    rep.stderr_edge_bits.assign(m, 0.0);
    const double rn = static_cast<double>(runs);
    for (std::size_t e = 0; e < m; ++e) {
        double sum = 0.0;
        double sq = 0.0;
        for (const auto& v : per_run) {
            sum += static_cast<double>(v[e]);
            sq += static_cast<double>(v[e]) * static_cast<double>(v[e]);
        }
        rep.mean_edge_bits[e] = sum / rn;
        const double var = runs > 1 ? std::max(0.0, (sq - sum * sum / rn) / (rn - 1.0)) : 0.0;
        rep.stderr_edge_bits[e] = std::sqrt(var / rn);
    }

    for_each_cut(g, [&](const Cut& c) {
        ++rep.cuts_checked;
        const Demand demand = demands.total(c);
        if (demand <= 0) return;
        const auto crossing = crossing_edges(g, c);
        double tolerance = 0.0;
        double mean = 0.0;
        if (rep.deterministic) {
            for (std::size_t e : crossing) mean += static_cast<double>(per_run[0][e]);
        } else {
            double sum = 0.0;
            double sq = 0.0;
            for (const auto& v : per_run) {
                double mass = 0.0;
                for (std::size_t e : crossing) mass += static_cast<double>(v[e]);
                sum += mass;
                sq += mass * mass;
            }
            mean = sum / rn;
            const double var = runs > 1 ? std::max(0.0, (sq - sum * sum / rn) / (rn - 1.0)) : 0.0;
            tolerance = 3.0 * std::sqrt(var / rn);
        }
        const double need = to_double(demand) * scale;
        if (mean + tolerance < need)
            rep.violations.push_back({c.side(), mean / scale, to_double(demand), tolerance / scale});
    });
    return rep;
}

}  // namespace topocc

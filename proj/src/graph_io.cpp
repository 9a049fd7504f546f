#include "topocc/graph_io.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "topocc/error.hpp"

namespace topocc {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

// Reads exactly `count` unsigned integers and nothing else.
std::vector<std::uint64_t> fields(std::istringstream& ss, std::size_t count, std::size_t line, char kind) {
    std::vector<std::uint64_t> out;
    std::string tok;
    while (ss >> tok) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            fail(line, std::string("'") + kind + "' record: '" + tok + "' is not a nonnegative integer");
        try {
            out.push_back(std::stoull(tok));
        } catch (const std::out_of_range&) {
            fail(line, "number out of range");
        }
    }
    if (out.size() != count)
        fail(line, std::string("'") + kind + "' record needs " + std::to_string(count) + " fields, got " +
                       std::to_string(out.size()));
    return out;
}

}  // namespace

Instance parse_instance(std::istream& in, const std::string& name) {
    std::optional<std::pair<std::size_t, std::size_t>> header;
    std::size_t header_line = 0;
    std::vector<Edge> edges;
    std::set<std::pair<Vertex, Vertex>> seen_edges;
    std::map<std::uint64_t, std::vector<Vertex>> groups;
    std::map<std::uint64_t, std::size_t> group_line;
    std::map<std::uint64_t, std::vector<VertexPair>> matchings;
    std::map<std::uint64_t, std::size_t> matching_line;
    std::string raw;
    std::size_t line = 0;
    auto check_vertex = [&](std::uint64_t v) {
        if (!header) fail(line, "record before the 'p' header");
        if (v >= header->first) fail(line, "vertex " + std::to_string(v) + " out of range");
        return static_cast<Vertex>(v);
    };
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ss(raw);
        std::string kind;
        if (!(ss >> kind)) continue;
        if (kind == "p") {
            if (header) fail(line, "duplicate 'p' header");
            const auto f = fields(ss, 2, line, 'p');
            if (f[0] == 0) fail(line, "graph needs at least one vertex");
            header = {f[0], f[1]};
            header_line = line;
        } else if (kind == "e") {
            const auto f = fields(ss, 2, line, 'e');
            const Vertex u = check_vertex(f[0]), v = check_vertex(f[1]);
            if (u == v) fail(line, "self-loop");
            if (!seen_edges.emplace(std::min(u, v), std::max(u, v)).second)
                fail(line, "duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
            edges.push_back({u, v});
        } else if (kind == "t") {
            const auto f = fields(ss, 2, line, 't');
            if (!header) fail(line, "record before the 'p' header");
            groups[f[0]].push_back(check_vertex(f[1]));
            group_line.try_emplace(f[0], line);
        } else if (kind == "m") {
            const auto f = fields(ss, 3, line, 'm');
            if (!header) fail(line, "record before the 'p' header");
            matchings[f[0]].emplace_back(check_vertex(f[1]), check_vertex(f[2]));
            matching_line.try_emplace(f[0], line);
        } else {
            fail(line, "unknown record type '" + kind + "'");
        }
    }
    if (!header) fail(line, "missing 'p' header");
    if (edges.size() != header->second)
        fail(header_line, "header declares " + std::to_string(header->second) + " edges, file has " +
                              std::to_string(edges.size()));

    Instance inst;
    inst.name = name;
    try {
        inst.graph = Graph(header->first, edges);
    } catch (const Error& e) {
        fail(header_line, e.what());
    }
    std::uint64_t expect = 0;
    for (auto& [id, members] : groups) {
        if (id != expect++) fail(group_line[id], "terminal groups must be numbered 0, 1, 2, ... without gaps");
        inst.groups.groups.push_back(std::move(members));
    }
    if (!matchings.empty()) {
        std::vector<std::vector<VertexPair>> per_group(inst.groups.group_count());
        for (auto& [id, pairs] : matchings) {
            if (id >= per_group.size()) fail(matching_line[id], "matching for unknown group " + std::to_string(id));
            per_group[id] = std::move(pairs);
        }
        inst.groups.matchings = std::move(per_group);
    }
    if (!inst.groups.groups.empty()) {
        try {
            inst.groups.validate(inst.graph);
        } catch (const Error& e) {
            fail(line, e.what());
        }
    }
    return inst;
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "line 0: cannot open " + path.string());
    return parse_instance(in, path.stem().string());
}

std::string format_instance(const Instance& inst) {
    std::ostringstream os;
    if (!inst.name.empty()) os << "# " << inst.name << "\n";
    os << "p " << inst.graph.vertex_count() << " " << inst.graph.edge_count() << "\n";
    for (const auto& e : inst.graph.edges()) os << "e " << e.u << " " << e.v << "\n";
    for (std::size_t i = 0; i < inst.groups.group_count(); ++i)
        for (Vertex v : inst.groups.groups[i]) os << "t " << i << " " << v << "\n";
    if (inst.groups.matchings)
        for (std::size_t i = 0; i < inst.groups.matchings->size(); ++i)
            for (auto [a, b] : (*inst.groups.matchings)[i]) os << "m " << i << " " << a << " " << b << "\n";
    return os.str();
}

}  // namespace topocc

#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "topocc/graph.hpp"

namespace topocc {

/// A graph plus its terminal groups, as read from an instance file.
struct Instance {
    std::string name;
    Graph graph;
    GroupedTerminals groups;
};

/// Text format, one record per line, '#' starts a comment:
///   p <vertices> <edges>
///   e <u> <v>
///   t <group> <vertex>
///   m <group> <u> <v>      (optional matching pair)
/// Vertices and groups are 0-based; groups must be numbered contiguously.
/// Errors throw ParseError naming the offending line.
Instance parse_instance(std::istream& in, const std::string& name = "");
Instance load_instance(const std::filesystem::path& path);
std::string format_instance(const Instance& inst);

}  // namespace topocc

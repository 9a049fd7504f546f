#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "topocc/cuts.hpp"
#include "topocc/multicut_family.hpp"
#include "topocc/protocol.hpp"

namespace topocc {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

/// How a reported quantity was obtained.
enum class Mode { Exact, Lp, Measured, Heuristic };
std::string to_string(Mode m);

/// {"value": v, "source": source, "mode": mode}
Json field(Json value, const std::string& source, Mode mode);

/// Bit i of the string is character i.
std::string bits_to_string(const BitString& x);

Json to_json(const ProtocolTrace& t);
Json to_json(const InputAssignment& in);
Json to_json(const Multicut& c);
Json to_json(const MulticutFamily& fam);
Json cuts_to_json(std::span<const Cut> cuts);

}  // namespace topocc

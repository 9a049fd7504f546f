#include "topocc/report.hpp"

namespace topocc {

std::string to_string(Mode m) {
    switch (m) {
        case Mode::Exact: return "exact";
        case Mode::Lp: return "lp";
        case Mode::Measured: return "measured";
        case Mode::Heuristic: return "heuristic";
    }
    return "unknown";
}

Json field(Json value, const std::string& source, Mode mode) {
    return Json{{"value", std::move(value)}, {"source", source}, {"mode", to_string(mode)}};
}

std::string bits_to_string(const BitString& x) {
    std::string s(x.size(), '0');
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) s[i] = '1';
    return s;
}

Json to_json(const ProtocolTrace& t) {
    Json edges = Json::array();
    for (std::size_t e = 0; e < t.edges.size(); ++e)
        edges.push_back({{"u", t.edges[e].u}, {"v", t.edges[e].v}, {"bits_uv", t.bits_uv[e]}, {"bits_vu", t.bits_vu[e]}});
    Json params(t.params);
    Json out{{"edges", edges}, {"total", t.total}, {"output", t.output ? 1 : 0}, {"seed", t.seed},
             {"protocol", t.protocol}, {"params", params}};
    if (t.output_value.size() > 0) out["output_value"] = bits_to_string(t.output_value);
    if (t.output_negated) out["output_negated"] = *t.output_negated ? 1 : 0;
    out["output_vertex"] = t.output_vertex;
    out["rounds"] = t.rounds;
    if (!t.stage_bits.empty()) out["stage_bits"] = Json(t.stage_bits);
    return out;
}

Json to_json(const InputAssignment& in) {
    Json groups = Json::array();
    for (const auto& g : in.values) {
        Json slots = Json::array();
        for (const auto& x : g) slots.push_back(bits_to_string(x));
        groups.push_back(slots);
    }
    return Json{{"n", in.n}, {"groups", groups}};
}

Json to_json(const Multicut& c) {
    Json sets = Json::array();
    for (const auto& s : c.explicit_sets()) sets.push_back(members(s));
    return Json{{"explicit", sets}, {"implicit", members(c.implicit_set())}};
}

Json to_json(const MulticutFamily& fam) {
    Json colls = Json::array();
    for (const auto& coll : fam.collections) {
        Json cuts = Json::array();
        for (const auto& mc : coll.multicuts) cuts.push_back(to_json(mc));
        colls.push_back({{"first_step", coll.first_step}, {"multicuts", cuts}});
    }
    return Json{{"ell", fam.ell()},
                {"alpha", std::to_string(fam.alpha_num) + "/" + std::to_string(fam.alpha_den)},
                {"terminals", fam.terminal_count},
                {"collections", colls}};
}

Json cuts_to_json(std::span<const Cut> cuts) {
    Json out = Json::array();
    for (const auto& c : cuts) out.push_back(members(c.side()));
    return out;
}

}  // namespace topocc

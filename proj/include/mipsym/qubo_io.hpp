#pragma once

/// On-disk formats.
///
/// QUBO text (qbsolv-style):
///   c <comment lines: model name, offset, registry dump>
///   p qubo 0 <maxNode> <nDiagonals> <nCouplers>
///   <i> <i> <value>   one line per linear term, ascending i
///   <i> <j> <value>   one line per coupler, i < j, ascending (i, j)
///
/// The wire format has no offset field, so the offset travels as a
/// "c offset" comment. Values are printed with up to 17 significant digits;
/// output is byte-stable for identical models.
///
/// QUBO-Plus JSON:
///   {variables, objective: {offset, linear: [[i,v]], quadratic: [[i,j,v]]},
///    constraints: [{coeffs: [[i,v]], sense: "=", rhs}], fixed_ones}

#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mipsym/qubo.hpp"

namespace mipsym {

namespace detail {

inline const char* kind_name(VarKind k) { return k == VarKind::pi ? "pi" : "sigma"; }

}  // namespace detail

inline void write_qubo(const QuboModel& model, std::ostream& out, const std::string& name = "") {
    if (!name.empty()) out << "c " << name << "\n";
    out << "c offset " << detail::fmt17(model.offset()) << "\n";
    const VarRegistry& reg = model.registry();
    for (int idx = 0; idx < reg.size(); ++idx) {
        const VarRef& e = reg.entries()[static_cast<size_t>(idx)];
        out << "c var " << idx << " " << detail::kind_name(e.kind) << " " << e.a << " " << e.b
            << "\n";
    }
    for (const VarRef& e : reg.fixed_ones())
        out << "c fixed " << detail::kind_name(e.kind) << " " << e.a << " " << e.b << "\n";
    out << "p qubo 0 " << reg.size() << " " << model.linear().size() << " "
        << model.quadratic().size() << "\n";
    for (const auto& [i, v] : model.linear())
        out << i << " " << i << " " << detail::fmt17(v) << "\n";
    for (const auto& [key, v] : model.quadratic())
        out << key.first << " " << key.second << " " << detail::fmt17(v) << "\n";
}

inline std::string write_qubo_string(const QuboModel& model, const std::string& name = "") {
    std::ostringstream out;
    write_qubo(model, out, name);
    return out.str();
}

namespace detail {

inline nlohmann::json registry_entry_json(const VarRef& e) {
    return nlohmann::json::array({kind_name(e.kind), e.a, e.b});
}

}  // namespace detail

inline nlohmann::json quboplus_json(const QuboPlusModel& model) {
    nlohmann::json j;
    const QuboModel& obj = model.objective;
    j["variables"] = nlohmann::json::array();
    for (const VarRef& e : obj.registry().entries())
        j["variables"].push_back(detail::registry_entry_json(e));
    j["fixed_ones"] = nlohmann::json::array();
    for (const VarRef& e : obj.registry().fixed_ones())
        j["fixed_ones"].push_back(detail::registry_entry_json(e));
    j["objective"]["offset"] = obj.offset();
    j["objective"]["linear"] = nlohmann::json::array();
    for (const auto& [i, v] : obj.linear())
        j["objective"]["linear"].push_back(nlohmann::json::array({i, v}));
    j["objective"]["quadratic"] = nlohmann::json::array();
    for (const auto& [key, v] : obj.quadratic())
        j["objective"]["quadratic"].push_back(nlohmann::json::array({key.first, key.second, v}));
    j["constraints"] = nlohmann::json::array();
    for (const auto& con : model.constraints) {
        nlohmann::json c;
        c["coeffs"] = nlohmann::json::array();
        for (const auto& [i, v] : con.coeffs) c["coeffs"].push_back(nlohmann::json::array({i, v}));
        c["sense"] = "=";
        c["rhs"] = con.rhs;
        j["constraints"].push_back(std::move(c));
    }
    return j;
}

inline void write_quboplus_json(const QuboPlusModel& model, std::ostream& out) {
    out << quboplus_json(model).dump(2) << "\n";
}

}  // namespace mipsym

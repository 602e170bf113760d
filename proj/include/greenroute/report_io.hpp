#pragma once

// JSON forms of solutions and reports. Variable keys reuse the LP names
// (x_c0, y_e1_k0, ...) and constraint names match LP row labels, so the
// two file kinds cross-reference. Rationals are written as exact decimal
// strings.

#include "greenroute/instance_io.hpp"
#include "greenroute/validate.hpp"

namespace greenroute {

using ordered_json = nlohmann::ordered_json;

inline ordered_json solution_to_json(const Instance& inst, const Solution& s) {
  const auto layout = VariableLayout::of(inst);
  const auto bits = to_assignment(s, layout);
  ordered_json vars = ordered_json::object();
  const auto names = layout.variables();
  for (std::size_t i = 0; i < names.size(); ++i) vars[variable_name(names[i])] = bits[i];

  ordered_json routes = ordered_json::array();
  for (std::size_t d = 0; d < inst.demand_count(); ++d) {
    ordered_json links = ordered_json::array();
    for (std::size_t e = 0; e < inst.link_count(); ++e)
      if (s.u[e][d]) links.push_back(e);
    routes.push_back({{"demand", d}, {"links", links}});
  }
  ordered_json doc;
  doc["objective"] = to_string(s.objective);
  doc["variables"] = vars;
  doc["routes"] = routes;
  return doc;
}

/// Reads `variables` (absent entries are 0). Without an `objective` field the
/// recomputed value is used.
inline Solution solution_from_json(const Instance& inst, const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("solution: top level must be an object");
  const auto layout = VariableLayout::of(inst);
  Bits bits(layout.size(), 0);
  if (auto it = doc.find("variables"); it != doc.end()) {
    if (!it->is_object()) throw SchemaError("solution: 'variables' must be an object");
    for (const auto& [name, value] : it->items()) {
      auto v = parse_variable_name(name);
      if (!v) throw SchemaError("solution: unknown variable '" + name + "'");
      const bool in_range =
          (v->kind == VarKind::X && v->first < layout.cards) ||
          (v->kind == VarKind::Z && v->first < layout.routers) ||
          (v->kind == VarKind::Y && v->first < layout.links && v->second < layout.states) ||
          (v->kind == VarKind::U && v->first < layout.links && v->second < layout.demands);
      if (!in_range) throw SchemaError("solution: variable '" + name + "' is out of range");
      if (!value.is_number_integer() || (value.get<std::int64_t>() != 0 && value.get<std::int64_t>() != 1))
        throw SchemaError("solution: variable '" + name + "' must be 0 or 1");
      bits[layout.position(*v)] = static_cast<std::uint8_t>(value.get<std::int64_t>());
    }
  }
  Solution s = solution_from_assignment(inst, bits);
  if (auto it = doc.find("objective"); it != doc.end())
    s.objective = detail::json_number(*it, "solution.objective");
  return s;
}

inline ordered_json check_report_to_json(const CheckReport& report) {
  ordered_json violations = ordered_json::array();
  for (const auto& v : report.violations)
    violations.push_back({{"constraint", v.constraint_name},
                          {"lhs", to_string(v.lhs)},
                          {"relation", std::string(to_string(v.relation))},
                          {"rhs", to_string(v.rhs)}});
  ordered_json doc;
  doc["passed"] = report.passed;
  doc["violations"] = violations;
  return doc;
}

inline ordered_json defect_to_json(const StructuralDefect& defect) {
  ordered_json witness = ordered_json::object();
  for (const auto& [key, value] : defect.witness) witness[key] = value;
  return {{"family", defect.family}, {"description", defect.description}, {"witness", witness}};
}

inline ordered_json edge_pair_to_json(const EdgePair& pair) {
  return {{"forward", pair.forward.value},
          {"reverse", pair.reverse.value},
          {"port_a", pair.port_a.value},
          {"port_b", pair.port_b.value}};
}

inline ordered_json defect_report_to_json(const Instance& inst, const DefectReport& report) {
  ordered_json error1 = ordered_json::array();
  for (const auto& d : report.error1) error1.push_back(defect_to_json(d));
  ordered_json doc;
  doc["error1"] = error1;
  if (report.error2) {
    const auto& gap = *report.error2;
    ordered_json edges = ordered_json::array();
    for (const auto& p : gap.asymmetric_edges) edges.push_back(edge_pair_to_json(p));
    doc["error2"] = {{"corrected_objective", to_string(gap.corrected_objective)},
                     {"relaxed_objective", to_string(gap.relaxed_objective)},
                     {"gap", to_string(gap.gap)},
                     {"asymmetric_edges", edges},
                     {"witness_solution", solution_to_json(inst, gap.witness)}};
  } else {
    doc["error2"] = nullptr;
  }
  return doc;
}

}  // namespace greenroute

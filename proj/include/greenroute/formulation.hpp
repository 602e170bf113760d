#pragma once

// Builders for the binary routing/energy program over x (cards), y (link
// states), z (routers) and u (link-demand routing).
//
//   corrected : card activation, router activation, one state per link,
//               router-level flow conservation, link capacity, and equal
//               states on the two links of every edge.
//   relaxed   : corrected without the edge-state equalities.
//   original  : the port-indexed flow equations read literally; yields
//               structural defects instead of a model whenever D >= 1.

#include "greenroute/model.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace greenroute {

enum class Variant { Corrected, Relaxed };

inline std::string_view to_string(Variant v) {
  return v == Variant::Corrected ? "corrected" : "relaxed";
}

enum class VarKind { X, Y, Z, U };

/// A binary decision variable: x_c, y_(e,k), z_r or u_(e,d).
struct VariableIndex {
  VarKind kind = VarKind::X;
  std::size_t first = 0;   // c, e, r or e
  std::size_t second = 0;  // k or d; unused for x and z

  static VariableIndex x(std::size_t c) { return {VarKind::X, c, 0}; }
  static VariableIndex y(std::size_t e, std::size_t k) { return {VarKind::Y, e, k}; }
  static VariableIndex z(std::size_t r) { return {VarKind::Z, r, 0}; }
  static VariableIndex u(std::size_t e, std::size_t d) { return {VarKind::U, e, d}; }

  bool operator==(const VariableIndex&) const = default;
};

/// LP-format name: x_c0, y_e1_k0, z_r1, u_e1_d0.
inline std::string variable_name(const VariableIndex& v) {
  switch (v.kind) {
    case VarKind::X: return "x_c" + std::to_string(v.first);
    case VarKind::Y: return "y_e" + std::to_string(v.first) + "_k" + std::to_string(v.second);
    case VarKind::Z: return "z_r" + std::to_string(v.first);
    case VarKind::U: return "u_e" + std::to_string(v.first) + "_d" + std::to_string(v.second);
  }
  return {};
}

/// Inverse of variable_name; nullopt for anything else.
inline std::optional<VariableIndex> parse_variable_name(std::string_view name) {
  auto number = [](std::string_view& s, std::size_t& out) {
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == 0 || (i > 1 && s[0] == '0') || i > 18) return false;
    out = std::stoull(std::string(s.substr(0, i)));
    s.remove_prefix(i);
    return true;
  };
  auto prefix = [](std::string_view& s, std::string_view p) {
    if (!s.starts_with(p)) return false;
    s.remove_prefix(p.size());
    return true;
  };
  VariableIndex v;
  std::string_view s = name;
  if (prefix(s, "x_c")) {
    v.kind = VarKind::X;
    if (!number(s, v.first)) return std::nullopt;
  } else if (prefix(s, "z_r")) {
    v.kind = VarKind::Z;
    if (!number(s, v.first)) return std::nullopt;
  } else if (prefix(s, "y_e")) {
    v.kind = VarKind::Y;
    if (!number(s, v.first) || !prefix(s, "_k") || !number(s, v.second)) return std::nullopt;
  } else if (prefix(s, "u_e")) {
    v.kind = VarKind::U;
    if (!number(s, v.first) || !prefix(s, "_d") || !number(s, v.second)) return std::nullopt;
  } else {
    return std::nullopt;
  }
  if (!s.empty()) return std::nullopt;
  return v;
}

/// Fixed column order shared by every builder: all x, then y (link-major),
/// then z, then u (link-major).
struct VariableLayout {
  std::size_t cards = 0, links = 0, states = 0, routers = 0, demands = 0;

  static VariableLayout of(const Instance& inst) {
    return {inst.card_count(), inst.link_count(), inst.state_count(), inst.router_count(),
            inst.demand_count()};
  }

  std::size_t x(std::size_t c) const { return c; }
  std::size_t y(std::size_t e, std::size_t k) const { return cards + e * states + k; }
  std::size_t z(std::size_t r) const { return cards + links * states + r; }
  std::size_t u(std::size_t e, std::size_t d) const {
    return cards + links * states + routers + e * demands + d;
  }
  std::size_t size() const { return cards + links * states + routers + links * demands; }

  std::size_t position(const VariableIndex& v) const {
    switch (v.kind) {
      case VarKind::X: return x(v.first);
      case VarKind::Y: return y(v.first, v.second);
      case VarKind::Z: return z(v.first);
      case VarKind::U: return u(v.first, v.second);
    }
    return 0;
  }

  std::vector<VariableIndex> variables() const {
    std::vector<VariableIndex> out;
    out.reserve(size());
    for (std::size_t c = 0; c < cards; ++c) out.push_back(VariableIndex::x(c));
    for (std::size_t e = 0; e < links; ++e)
      for (std::size_t k = 0; k < states; ++k) out.push_back(VariableIndex::y(e, k));
    for (std::size_t r = 0; r < routers; ++r) out.push_back(VariableIndex::z(r));
    for (std::size_t e = 0; e < links; ++e)
      for (std::size_t d = 0; d < demands; ++d) out.push_back(VariableIndex::u(e, d));
    return out;
  }
};

/// Coefficient times the variable at `var` (a position in LinearModel::variables).
struct Term {
  Rational coefficient;
  std::size_t var = 0;
  bool operator==(const Term&) const = default;
};

enum class Relation { LessEqual, Equal, GreaterEqual };

inline std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::Equal: return "=";
    case Relation::GreaterEqual: return ">=";
  }
  return "?";
}

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  Rational rhs;
  bool operator==(const Constraint&) const = default;
};

/// Minimization over binary variables.
struct LinearModel {
  std::vector<VariableIndex> variables;
  std::vector<Term> objective;
  std::vector<Constraint> constraints;
  bool operator==(const LinearModel&) const = default;
};

/// A way in which a formulation cannot be instantiated as written.
struct StructuralDefect {
  std::string family;
  std::string description;
  std::vector<std::pair<std::string, std::size_t>> witness;
  bool operator==(const StructuralDefect&) const = default;
};

// Constraint family prefixes.
namespace family {
inline constexpr std::string_view card_out = "card_out";
inline constexpr std::string_view card_in = "card_in";
inline constexpr std::string_view activation = "activation";
inline constexpr std::string_view single_state = "single_state";
inline constexpr std::string_view flow = "flow";
inline constexpr std::string_view capacity = "capacity";
inline constexpr std::string_view symmetry = "symmetry";
}  // namespace family

/// `family[k1=v1,k2=v2]`
inline std::string constraint_name(
    std::string_view fam, std::initializer_list<std::pair<const char*, std::size_t>> idx) {
  std::string out(fam);
  out += '[';
  bool first = true;
  for (const auto& [key, value] : idx) {
    if (!first) out += ',';
    first = false;
    out += key;
    out += '=';
    out += std::to_string(value);
  }
  out += ']';
  return out;
}

inline std::string_view constraint_family(std::string_view name) {
  return name.substr(0, name.find('['));
}

/// Sum_e Sum_k xi_ek y_ek + Sum_c W_c x_c + Sum_r T_r z_r, all E*K + C + R terms kept.
inline std::vector<Term> build_objective(const Instance& inst) {
  const auto layout = VariableLayout::of(inst);
  std::vector<Term> terms;
  terms.reserve(inst.link_count() * inst.state_count() + inst.card_count() + inst.router_count());
  for (std::size_t e = 0; e < inst.link_count(); ++e)
    for (std::size_t k = 0; k < inst.state_count(); ++k)
      terms.push_back({inst.state(LinkId{e}, k).power, layout.y(e, k)});
  for (std::size_t c = 0; c < inst.card_count(); ++c)
    terms.push_back({inst.card_power(CardId{c}), layout.x(c)});
  for (std::size_t r = 0; r < inst.router_count(); ++r)
    terms.push_back({inst.router_power(RouterId{r}), layout.z(r)});
  return terms;
}

namespace detail {

inline void sort_terms(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
}

// Families shared by every variant, in emission order: card_out, card_in,
// activation, single_state, then (flow, if requested), capacity.
inline void add_common_families(const Instance& inst, LinearModel& m, bool with_flow) {
  const auto layout = VariableLayout::of(inst);
  const auto C = inst.card_count(), D = inst.demand_count(), E = inst.link_count(),
             K = inst.state_count(), R = inst.router_count();

  for (bool outgoing : {true, false}) {
    for (std::size_t d = 0; d < D; ++d)
      for (std::size_t c = 0; c < C; ++c) {
        Constraint row;
        row.name = constraint_name(outgoing ? family::card_out : family::card_in,
                                   {{"d", d}, {"c", c}});
        for (PortId p : inst.ports_of_card(CardId{c})) {
          auto link = outgoing ? inst.out_link_of_port(p) : inst.in_link_of_port(p);
          if (link) row.terms.push_back({1, layout.u(link->value, d)});
        }
        row.terms.push_back({-1, layout.x(c)});
        sort_terms(row.terms);
        row.relation = Relation::LessEqual;
        row.rhs = 0;
        m.constraints.push_back(std::move(row));
      }
  }

  // g_rc x_c <= z_r, kept only where g_rc = 1.
  for (std::size_t r = 0; r < R; ++r)
    for (CardId c : inst.cards_of_router(RouterId{r})) {
      Constraint row;
      row.name = constraint_name(family::activation, {{"r", r}, {"c", c.value}});
      row.terms = {{1, layout.x(c.value)}, {-1, layout.z(r)}};
      row.relation = Relation::LessEqual;
      row.rhs = 0;
      m.constraints.push_back(std::move(row));
    }

  for (std::size_t e = 0; e < E; ++e) {
    Constraint row;
    row.name = constraint_name(family::single_state, {{"e", e}});
    for (std::size_t k = 0; k < K; ++k) row.terms.push_back({1, layout.y(e, k)});
    row.relation = Relation::LessEqual;
    row.rhs = 1;
    m.constraints.push_back(std::move(row));
  }

  if (with_flow) {
    std::vector<RouterLinks> links_of;
    links_of.reserve(R);
    for (std::size_t r = 0; r < R; ++r) links_of.push_back(router_links(inst, RouterId{r}));
    for (std::size_t d = 0; d < D; ++d) {
      const auto& dem = inst.demand(DemandId{d});
      for (std::size_t r = 0; r < R; ++r) {
        Constraint row;
        row.name = constraint_name(family::flow, {{"d", d}, {"r", r}});
        for (LinkId e : links_of[r].outgoing) row.terms.push_back({1, layout.u(e.value, d)});
        for (LinkId e : links_of[r].incoming) row.terms.push_back({-1, layout.u(e.value, d)});
        sort_terms(row.terms);
        row.relation = Relation::Equal;
        row.rhs = dem.source.value == r ? 1 : dem.target.value == r ? -1 : 0;
        m.constraints.push_back(std::move(row));
      }
    }
  }

  // Sum_d V_d u_ed - Sum_k M_ek y_ek <= 0
  for (std::size_t e = 0; e < E; ++e) {
    Constraint row;
    row.name = constraint_name(family::capacity, {{"e", e}});
    for (std::size_t k = 0; k < K; ++k)
      row.terms.push_back({-inst.state(LinkId{e}, k).capacity, layout.y(e, k)});
    for (std::size_t d = 0; d < D; ++d)
      row.terms.push_back({inst.demand(DemandId{d}).volume, layout.u(e, d)});
    row.relation = Relation::LessEqual;
    row.rhs = 0;
    m.constraints.push_back(std::move(row));
  }
}

inline LinearModel build_variant(const Instance& inst, bool with_symmetry) {
  LinearModel m;
  m.variables = VariableLayout::of(inst).variables();
  m.objective = build_objective(inst);
  add_common_families(inst, m, /*with_flow=*/true);
  if (with_symmetry) {
    const auto layout = VariableLayout::of(inst);
    // Sum_e a_ep y_ek = Sum_e b_ep y_ek on connected ports.
    for (std::size_t p = 0; p < inst.port_count(); ++p) {
      const PortId port{p};
      if (!inst.port_connected(port)) continue;
      const auto out = *inst.out_link_of_port(port);
      const auto in = *inst.in_link_of_port(port);
      for (std::size_t k = 0; k < inst.state_count(); ++k) {
        Constraint row;
        row.name = constraint_name(family::symmetry, {{"p", p}, {"k", k}});
        row.terms = {{1, layout.y(out.value, k)}, {-1, layout.y(in.value, k)}};
        sort_terms(row.terms);
        row.relation = Relation::Equal;
        row.rhs = 0;
        m.constraints.push_back(std::move(row));
      }
    }
  }
  return m;
}

}  // namespace detail

inline LinearModel build_corrected(const Instance& inst) {
  return detail::build_variant(inst, /*with_symmetry=*/true);
}

inline LinearModel build_relaxed(const Instance& inst) {
  return detail::build_variant(inst, /*with_symmetry=*/false);
}

inline LinearModel build_model(const Instance& inst, Variant variant) {
  return variant == Variant::Corrected ? build_corrected(inst) : build_relaxed(inst);
}

namespace detail {

// The literal reading pins the endpoint port of a router-valued endpoint to
// the router's lowest connected port, else its lowest port.
inline std::optional<PortId> endpoint_port(const Instance& inst, RouterId r) {
  std::vector<PortId> ports;
  for (CardId c : inst.cards_of_router(r))
    for (PortId p : inst.ports_of_card(c)) ports.push_back(p);
  std::sort(ports.begin(), ports.end());
  for (PortId p : ports)
    if (inst.port_connected(p)) return p;
  if (ports.empty()) return std::nullopt;
  return ports.front();
}

}  // namespace detail

/// Reads the port-indexed source/transit/target flow equations literally.
///
/// Transit rows quantify over a fixed port p (p != s_d, p != t_d) and sum
/// over p in the same row, so the bound index shadows the quantifier: one
/// `flow-transit` defect per demand. Endpoint rows fix p = s_d (resp. t_d)
/// and multiply by l_cp, so every router not owning that port gets 0 = 1
/// (resp. 0 = -1): one `flow-endpoint` defect per demand and such router.
///
/// Returns the flow-free model when there are no demands.
inline std::variant<LinearModel, std::vector<StructuralDefect>> build_original_literal(
    const Instance& inst) {
  if (inst.demand_count() == 0) {
    LinearModel m;
    m.variables = VariableLayout::of(inst).variables();
    m.objective = build_objective(inst);
    detail::add_common_families(inst, m, /*with_flow=*/false);
    return m;
  }

  std::vector<StructuralDefect> defects;
  for (std::size_t d = 0; d < inst.demand_count(); ++d) {
    const auto& dem = inst.demand(DemandId{d});
    const auto source_port = detail::endpoint_port(inst, dem.source);
    const auto target_port = detail::endpoint_port(inst, dem.target);

    std::optional<std::size_t> transit_port;
    for (std::size_t p = 0; p < inst.port_count() && !transit_port; ++p)
      if (PortId{p} != source_port && PortId{p} != target_port) transit_port = p;

    StructuralDefect transit;
    transit.family = "flow-transit";
    if (transit_port) {
      transit.description =
          "transit row fixes port p=" + std::to_string(*transit_port) +
          " in its quantifier and sums over p in its body; the summed index shadows the "
          "quantified one, so the row is not instantiable as written";
      transit.witness = {{"d", d}, {"r", 0}, {"p", *transit_port}};
    } else {
      transit.description =
          "transit row sums over p while quantifying p != s_d, p != t_d; the summed index "
          "shadows the quantified one and here no port remains for the quantifier, so "
          "conservation at transit routers is never stated";
      transit.witness = {{"d", d}, {"r", 0}, {"p", source_port ? source_port->value : 0}};
    }
    defects.push_back(std::move(transit));

    for (std::size_t r = 0; r < inst.router_count(); ++r) {
      const RouterId router{r};
      if (source_port && inst.router_of_port(*source_port) == router) continue;
      StructuralDefect endpoint;
      endpoint.family = "flow-endpoint";
      endpoint.description = "source row at r=" + std::to_string(r) +
                             " has g_rc l_cp = 0 for the fixed source port, reading 0 = 1";
      if (!target_port || inst.router_of_port(*target_port) != router)
        endpoint.description += "; target row likewise reads 0 = -1";
      endpoint.witness = {{"d", d}, {"r", r}};
      defects.push_back(std::move(endpoint));
    }
  }
  return defects;
}

}  // namespace greenroute

#pragma once

// Shared fixtures and test-only oracles. The reference evaluator below
// restates every constraint family as triple sums over dense 0/1 incidence
// matrices and never touches the formulation builders.

#include "greenroute/greenroute.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace greenroute::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(GREENROUTE_TEST_DATA_DIR) / name;
}

inline Instance load(const std::string& name) { return load_instance(data_path(name)); }

inline std::vector<StateSpec> t1_states() { return {{10, 1}, {100, 4}}; }

// Two routers, one card and one port each, one edge, K=2, demand r0 -> r1 of 5.
inline InstanceSpec t1_spec() {
  InstanceSpec s;
  s.state_count = 2;
  s.router_power = {2, 2};
  s.card_router = {0, 1};
  s.card_power = {1, 1};
  s.port_card = {0, 1};
  s.links = {{0, 1, t1_states()}, {1, 0, t1_states()}};
  s.demands = {{0, 1, 5}};
  return s;
}

inline InstanceSpec t1_asym_spec() {
  auto s = t1_spec();
  s.demands.push_back({1, 0, 50});
  return s;
}

// Triangle: router r has card r with ports 2r, 2r+1. Edges r0-r1, r1-r2, r2-r0.
inline InstanceSpec t3_spec() {
  InstanceSpec s;
  s.state_count = 2;
  s.router_power = {2, 2, 2};
  s.card_router = {0, 1, 2};
  s.card_power = {1, 1, 1};
  s.port_card = {0, 0, 1, 1, 2, 2};
  s.links = {{0, 2, t1_states()}, {2, 0, t1_states()}, {3, 4, t1_states()},
             {4, 3, t1_states()}, {5, 1, t1_states()}, {1, 5, t1_states()}};
  s.demands = {{0, 1, 5}};
  return s;
}

/// Feasibility of a flat assignment, straight from the dense formulation.
inline bool reference_feasible(const Instance& inst, const Bits& bits, Variant variant) {
  const auto m = dense_incidence(inst);
  const auto L = VariableLayout::of(inst);
  const auto R = inst.router_count(), C = inst.card_count(), P = inst.port_count(),
             E = inst.link_count(), K = inst.state_count(), D = inst.demand_count();
  auto u = [&](std::size_t e, std::size_t d) { return int(bits[L.u(e, d)]); };
  auto y = [&](std::size_t e, std::size_t k) { return int(bits[L.y(e, k)]); };
  auto x = [&](std::size_t c) { return int(bits[L.x(c)]); };
  auto z = [&](std::size_t r) { return int(bits[L.z(r)]); };

  for (std::size_t e = 0; e < E; ++e) {
    int sum = 0;
    for (std::size_t k = 0; k < K; ++k) sum += y(e, k);
    if (sum > 1) return false;
  }
  if (variant == Variant::Corrected)
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t k = 0; k < K; ++k) {
        int out = 0, in = 0;
        for (std::size_t e = 0; e < E; ++e) {
          out += m.a[e][p] * y(e, k);
          in += m.b[e][p] * y(e, k);
        }
        if (out != in) return false;
      }
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t c = 0; c < C; ++c)
      if (m.g[r][c] * x(c) > z(r)) return false;
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t c = 0; c < C; ++c) {
      int out = 0, in = 0;
      for (std::size_t p = 0; p < P; ++p)
        for (std::size_t e = 0; e < E; ++e) {
          out += m.l[c][p] * m.a[e][p] * u(e, d);
          in += m.l[c][p] * m.b[e][p] * u(e, d);
        }
      if (out > x(c) || in > x(c)) return false;
    }
    const auto& dem = inst.demand(DemandId{d});
    for (std::size_t r = 0; r < R; ++r) {
      int net = 0;
      for (std::size_t c = 0; c < C; ++c)
        for (std::size_t p = 0; p < P; ++p)
          for (std::size_t e = 0; e < E; ++e)
            net += m.g[r][c] * m.l[c][p] * (m.a[e][p] - m.b[e][p]) * u(e, d);
      const int want = r == dem.source.value ? 1 : r == dem.target.value ? -1 : 0;
      if (net != want) return false;
    }
  }
  for (std::size_t e = 0; e < E; ++e) {
    Rational load = 0, cap = 0;
    for (std::size_t d = 0; d < D; ++d)
      if (u(e, d)) load += inst.demand(DemandId{d}).volume;
    for (std::size_t k = 0; k < K; ++k)
      if (y(e, k)) cap += inst.state(LinkId{e}, k).capacity;
    if (load > cap) return false;
  }
  return true;
}

inline Rational reference_objective(const Instance& inst, const Bits& bits) {
  const auto L = VariableLayout::of(inst);
  Rational total = 0;
  for (std::size_t e = 0; e < inst.link_count(); ++e)
    for (std::size_t k = 0; k < inst.state_count(); ++k)
      if (bits[L.y(e, k)]) total += inst.state(LinkId{e}, k).power;
  for (std::size_t c = 0; c < inst.card_count(); ++c)
    if (bits[L.x(c)]) total += inst.card_power(CardId{c});
  for (std::size_t r = 0; r < inst.router_count(); ++r)
    if (bits[L.z(r)]) total += inst.router_power(RouterId{r});
  return total;
}

/// Minimum objective over all 2^n binary assignments; nullopt if none is feasible.
inline std::optional<Rational> full_enumeration_optimum(const Instance& inst, Variant variant) {
  const auto n = VariableLayout::of(inst).size();
  if (n > 24) throw std::invalid_argument("too many variables for full enumeration");
  std::optional<Rational> best;
  Bits bits(n, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) bits[i] = (mask >> i) & 1;
    if (!reference_feasible(inst, bits, variant)) continue;
    Rational value = reference_objective(inst, bits);
    if (!best || value < *best) best = std::move(value);
  }
  return best;
}

}  // namespace greenroute::testing

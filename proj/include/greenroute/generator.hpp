#pragma once

// Seeded random instances within desk-scale caps: 2..5 routers, at most two
// cards per router and two ports per card, at most 4 edges (8 directed
// links), 1..3 demands, 1..3 energy states. The router graph is connected
// and the top state of every link carries the total demand volume, so every
// generated instance is feasible.

#include "greenroute/solver.hpp"

#include <algorithm>
#include <random>

namespace greenroute {

struct GeneratorCaps {
  std::size_t max_routers = 5;
  std::size_t max_edges = 4;
  std::size_t max_demands = 3;
  std::size_t max_states = 3;
};

namespace detail {

class SeededDraw {
 public:
  explicit SeededDraw(std::uint64_t seed) : rng_(seed) {}

  // Uniform in [lo, hi]. Plain modulo keeps streams identical across
  // standard library implementations.
  std::size_t between(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng_() % (hi - lo + 1));
  }
  bool chance(std::size_t percent) { return between(1, 100) <= percent; }

  // A positive value in halves, e.g. 3.5.
  Rational halves(std::size_t lo, std::size_t hi) { return Rational(between(lo, hi), 2); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace detail

inline InstanceSpec generate_instance(std::uint64_t seed, const GeneratorCaps& caps = {}) {
  detail::SeededDraw draw(seed);
  InstanceSpec spec;
  const std::size_t R = draw.between(2, caps.max_routers);

  // Router-level edges: a random spanning tree plus extras, degree <= 4.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> degree(R, 0);
  for (std::size_t r = 1; r < R; ++r) {
    std::size_t parent;
    do parent = draw.between(0, r - 1);
    while (degree[parent] >= 4);
    edges.emplace_back(parent, r);
    ++degree[parent];
    ++degree[r];
  }
  const std::size_t extras = draw.between(0, caps.max_edges - edges.size());
  for (std::size_t i = 0, tries = 0; i < extras && tries < 20; ++tries) {
    const auto a = draw.between(0, R - 1), b = draw.between(0, R - 1);
    if (a == b || degree[a] >= 4 || degree[b] >= 4) continue;
    edges.emplace_back(a, b);
    ++degree[a];
    ++degree[b];
    ++i;
  }

  // Cards and ports: enough ports for every incident edge, sometimes a spare.
  std::vector<std::vector<std::size_t>> free_ports(R);
  for (std::size_t r = 0; r < R; ++r) {
    spec.router_power.push_back(draw.halves(2, 20));
    const std::size_t cards = draw.between(std::max<std::size_t>(1, (degree[r] + 1) / 2), 2);
    std::vector<std::size_t> linked(cards, 0);
    for (std::size_t i = 0; i < degree[r]; ++i) ++linked[i % cards];
    for (std::size_t c = 0; c < cards; ++c) {
      const std::size_t card = spec.card_power.size();
      spec.card_power.push_back(draw.halves(0, 10));
      spec.card_router.push_back(r);
      std::size_t ports = linked[c];
      if (ports < 2 && (ports == 0 || draw.chance(25))) ++ports;
      for (std::size_t p = 0; p < ports; ++p) {
        if (p < linked[c]) free_ports[r].push_back(spec.port_card.size());
        spec.port_card.push_back(card);
      }
    }
  }
  for (auto& ports : free_ports) std::reverse(ports.begin(), ports.end());

  std::size_t demands = draw.between(1, caps.max_demands);
  Rational total = 0;
  for (std::size_t d = 0; d < demands; ++d) {
    const auto s = draw.between(0, R - 1);
    auto t = draw.between(0, R - 2);
    if (t >= s) ++t;
    spec.demands.push_back(DemandSpec{s, t, draw.halves(1, 40)});
    total += spec.demands.back().volume;
  }

  spec.state_count = draw.between(1, caps.max_states);
  for (const auto& [a, b] : edges) {
    const auto pa = free_ports[a].back();
    free_ports[a].pop_back();
    const auto pb = free_ports[b].back();
    free_ports[b].pop_back();
    LinkSpec forward{pa, pb, {}}, reverse{pb, pa, {}};
    Rational cap_f = 0, cap_r = 0, pow_f = 0, pow_r = 0;
    for (std::size_t k = 0; k < spec.state_count; ++k) {
      const bool top = k + 1 == spec.state_count;
      cap_f = top ? std::max(total, Rational(cap_f + 1)) : cap_f + draw.halves(2, 30);
      cap_r = top ? std::max(total, Rational(cap_r + 1)) : cap_r + draw.halves(2, 30);
      pow_f += draw.halves(1, 12);
      pow_r += draw.halves(1, 12);
      forward.states.push_back(StateSpec{cap_f, pow_f});
      reverse.states.push_back(StateSpec{cap_r, pow_r});
    }
    spec.links.push_back(std::move(forward));
    spec.links.push_back(std::move(reverse));
  }
  return spec;
}

}  // namespace greenroute

#pragma once

// Hierarchical network instance: routers own line cards, cards own ports,
// directed links run port to port and come in opposite pairs (edges).
// Every demand is an unsplittable router-to-router volume.

#include "greenroute/rational.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace greenroute {

template <class Tag>
struct Id {
  std::size_t value = 0;
  constexpr auto operator<=>(const Id&) const = default;
};

using RouterId = Id<struct RouterTag>;
using CardId = Id<struct CardTag>;
using PortId = Id<struct PortTag>;
using LinkId = Id<struct LinkTag>;
using DemandId = Id<struct DemandTag>;

/// One energy state of a directed link.
struct StateSpec {
  Rational capacity;
  Rational power;
  bool operator==(const StateSpec&) const = default;
};

struct Demand {
  RouterId source;
  RouterId target;
  Rational volume;
  bool operator==(const Demand&) const = default;
};

/// Two opposite directed links between the same port pair:
/// `forward` runs port_a -> port_b, `reverse` runs port_b -> port_a.
struct EdgePair {
  LinkId forward;
  LinkId reverse;
  PortId port_a;
  PortId port_b;
  bool operator==(const EdgePair&) const = default;
};

enum class InstanceErrorCode {
  EmptyHierarchy,
  DanglingReference,
  StateCountMismatch,
  NegativeParameter,
  BadDemand,
  SelfLoopEdge,
  AmbiguousPortPairing,
  PartiallyConnectedPort,
};

inline std::string_view to_string(InstanceErrorCode code) {
  switch (code) {
    case InstanceErrorCode::EmptyHierarchy: return "EmptyHierarchy";
    case InstanceErrorCode::DanglingReference: return "DanglingReference";
    case InstanceErrorCode::StateCountMismatch: return "StateCountMismatch";
    case InstanceErrorCode::NegativeParameter: return "NegativeParameter";
    case InstanceErrorCode::BadDemand: return "BadDemand";
    case InstanceErrorCode::SelfLoopEdge: return "SelfLoopEdge";
    case InstanceErrorCode::AmbiguousPortPairing: return "AmbiguousPortPairing";
    case InstanceErrorCode::PartiallyConnectedPort: return "PartiallyConnectedPort";
  }
  return "Unknown";
}

class InstanceError : public std::runtime_error {
 public:
  InstanceError(InstanceErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}
  InstanceErrorCode code() const noexcept { return code_; }

 private:
  InstanceErrorCode code_;
};

struct LinkSpec {
  std::size_t source_port = 0;
  std::size_t target_port = 0;
  std::vector<StateSpec> states;
};

struct DemandSpec {
  std::size_t source_router = 0;
  std::size_t target_router = 0;
  Rational volume;
};

/// Unvalidated sparse description of an instance. Indices are dense and
/// 0-based; empty name vectors get generated labels (`r0`, `c0`, `p0`).
struct InstanceSpec {
  std::size_t state_count = 0;
  std::vector<Rational> router_power;
  std::vector<std::size_t> card_router;
  std::vector<Rational> card_power;
  std::vector<std::size_t> port_card;
  std::vector<LinkSpec> links;
  std::vector<DemandSpec> demands;
  std::vector<std::string> router_names;
  std::vector<std::string> card_names;
  std::vector<std::string> port_names;
};

class Instance;
Instance build_instance(const InstanceSpec& spec);

/// Validated, immutable network instance.
class Instance {
 public:
  std::size_t router_count() const noexcept { return router_power_.size(); }
  std::size_t card_count() const noexcept { return card_power_.size(); }
  std::size_t port_count() const noexcept { return card_of_port_.size(); }
  std::size_t link_count() const noexcept { return link_source_.size(); }
  std::size_t state_count() const noexcept { return state_count_; }
  std::size_t demand_count() const noexcept { return demands_.size(); }

  CardId card_of_port(PortId p) const { return card_of_port_.at(p.value); }
  RouterId router_of_card(CardId c) const { return router_of_card_.at(c.value); }
  RouterId router_of_port(PortId p) const { return router_of_card(card_of_port(p)); }
  std::optional<LinkId> out_link_of_port(PortId p) const { return out_link_of_port_.at(p.value); }
  std::optional<LinkId> in_link_of_port(PortId p) const { return in_link_of_port_.at(p.value); }
  PortId link_source(LinkId e) const { return link_source_.at(e.value); }
  PortId link_target(LinkId e) const { return link_target_.at(e.value); }
  RouterId link_source_router(LinkId e) const { return router_of_port(link_source(e)); }
  RouterId link_target_router(LinkId e) const { return router_of_port(link_target(e)); }

  /// The opposite link of the same edge.
  LinkId reverse_link(LinkId e) const { return *out_link_of_port(link_target(e)); }

  std::span<const PortId> ports_of_card(CardId c) const { return ports_of_card_.at(c.value); }
  std::span<const CardId> cards_of_router(RouterId r) const { return cards_of_router_.at(r.value); }

  std::span<const StateSpec> link_states(LinkId e) const { return link_states_.at(e.value); }
  const StateSpec& state(LinkId e, std::size_t k) const { return link_states_.at(e.value).at(k); }
  const Rational& card_power(CardId c) const { return card_power_.at(c.value); }
  const Rational& router_power(RouterId r) const { return router_power_.at(r.value); }

  std::span<const Demand> demands() const noexcept { return demands_; }
  const Demand& demand(DemandId d) const { return demands_.at(d.value); }

  const std::string& router_name(RouterId r) const { return router_names_.at(r.value); }
  const std::string& card_name(CardId c) const { return card_names_.at(c.value); }
  const std::string& port_name(PortId p) const { return port_names_.at(p.value); }

  // Dense 0/1 incidence views.
  int l(CardId c, PortId p) const { return card_of_port(p) == c ? 1 : 0; }
  int g(RouterId r, CardId c) const { return router_of_card(c) == r ? 1 : 0; }
  int a(LinkId e, PortId p) const { return link_source(e) == p ? 1 : 0; }
  int b(LinkId e, PortId p) const { return link_target(e) == p ? 1 : 0; }

  bool port_connected(PortId p) const { return out_link_of_port(p).has_value(); }

 private:
  friend Instance build_instance(const InstanceSpec& spec);
  Instance() = default;

  std::size_t state_count_ = 0;
  std::vector<Rational> router_power_;
  std::vector<Rational> card_power_;
  std::vector<RouterId> router_of_card_;
  std::vector<CardId> card_of_port_;
  std::vector<std::optional<LinkId>> out_link_of_port_;
  std::vector<std::optional<LinkId>> in_link_of_port_;
  std::vector<PortId> link_source_;
  std::vector<PortId> link_target_;
  std::vector<std::vector<StateSpec>> link_states_;
  std::vector<std::vector<PortId>> ports_of_card_;
  std::vector<std::vector<CardId>> cards_of_router_;
  std::vector<Demand> demands_;
  std::vector<std::string> router_names_;
  std::vector<std::string> card_names_;
  std::vector<std::string> port_names_;
};

namespace detail {

inline std::string join_ids(const std::vector<std::size_t>& ids, char prefix) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += prefix + std::to_string(ids[i]);
  }
  return out;
}

inline std::vector<std::string> labels_or_default(const std::vector<std::string>& given,
                                                  std::size_t count, char prefix,
                                                  std::string_view what) {
  if (given.empty()) {
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
    return out;
  }
  if (given.size() != count)
    throw InstanceError(InstanceErrorCode::DanglingReference,
                        std::string(what) + " name list does not match " + std::string(what) +
                            " count");
  return given;
}

}  // namespace detail

/// Validates `spec` and resolves it into an Instance. Checks run in a fixed
/// order and the first failing check is reported, naming every offending
/// entity of that kind.
inline Instance build_instance(const InstanceSpec& spec) {
  using enum InstanceErrorCode;
  const std::size_t R = spec.router_power.size();
  const std::size_t C = spec.card_power.size();
  const std::size_t P = spec.port_card.size();
  const std::size_t E = spec.links.size();
  const std::size_t K = spec.state_count;

  if (R == 0 || C == 0 || P == 0 || K == 0)
    throw InstanceError(EmptyHierarchy, "routers, cards, ports and states must all be nonempty");
  if (spec.card_router.size() != C)
    throw InstanceError(DanglingReference, "every card needs exactly one owning router");

  for (std::size_t c = 0; c < C; ++c)
    if (spec.card_router[c] >= R)
      throw InstanceError(DanglingReference,
                          "card c" + std::to_string(c) + " names missing router");
  for (std::size_t p = 0; p < P; ++p)
    if (spec.port_card[p] >= C)
      throw InstanceError(DanglingReference, "port p" + std::to_string(p) + " names missing card");
  for (std::size_t e = 0; e < E; ++e)
    if (spec.links[e].source_port >= P || spec.links[e].target_port >= P)
      throw InstanceError(DanglingReference, "link e" + std::to_string(e) + " names missing port");
  for (std::size_t d = 0; d < spec.demands.size(); ++d)
    if (spec.demands[d].source_router >= R || spec.demands[d].target_router >= R)
      throw InstanceError(DanglingReference,
                          "demand d" + std::to_string(d) + " names missing router");

  for (std::size_t e = 0; e < E; ++e)
    if (spec.links[e].states.size() != K)
      throw InstanceError(StateCountMismatch, "link e" + std::to_string(e) + " has " +
                                                  std::to_string(spec.links[e].states.size()) +
                                                  " states, expected " + std::to_string(K));

  for (std::size_t r = 0; r < R; ++r)
    if (spec.router_power[r] < 0)
      throw InstanceError(NegativeParameter, "router r" + std::to_string(r) + " power");
  for (std::size_t c = 0; c < C; ++c)
    if (spec.card_power[c] < 0)
      throw InstanceError(NegativeParameter, "card c" + std::to_string(c) + " power");
  for (std::size_t e = 0; e < E; ++e)
    for (const auto& s : spec.links[e].states)
      if (s.capacity < 0 || s.power < 0)
        throw InstanceError(NegativeParameter, "link e" + std::to_string(e) + " state");

  for (std::size_t d = 0; d < spec.demands.size(); ++d) {
    const auto& dem = spec.demands[d];
    if (dem.source_router == dem.target_router)
      throw InstanceError(BadDemand, "demand d" + std::to_string(d) + " has source == target");
    if (dem.volume <= 0)
      throw InstanceError(BadDemand, "demand d" + std::to_string(d) + " has nonpositive volume");
  }

  auto router_of = [&](std::size_t port) { return spec.card_router[spec.port_card[port]]; };
  std::vector<std::size_t> self_loops;
  for (std::size_t e = 0; e < E; ++e)
    if (router_of(spec.links[e].source_port) == router_of(spec.links[e].target_port))
      self_loops.push_back(e);
  if (!self_loops.empty())
    throw InstanceError(SelfLoopEdge,
                        "links joining ports of one router: " + detail::join_ids(self_loops, 'e'));

  std::vector<std::optional<LinkId>> out_link(P), in_link(P);
  std::vector<std::size_t> ambiguous;
  for (std::size_t e = 0; e < E; ++e) {
    auto& out = out_link[spec.links[e].source_port];
    auto& in = in_link[spec.links[e].target_port];
    if (out) ambiguous.push_back(spec.links[e].source_port);
    if (in) ambiguous.push_back(spec.links[e].target_port);
    out = LinkId{e};
    in = LinkId{e};
  }
  if (!ambiguous.empty())
    throw InstanceError(AmbiguousPortPairing, "ports with two outgoing or two incoming links: " +
                                                  detail::join_ids(ambiguous, 'p'));

  std::vector<std::size_t> partial;
  for (std::size_t p = 0; p < P; ++p)
    if (out_link[p].has_value() != in_link[p].has_value()) partial.push_back(p);
  if (!partial.empty())
    throw InstanceError(PartiallyConnectedPort, "ports with a link in one direction only: " +
                                                    detail::join_ids(partial, 'p'));

  // Each port's incoming link must be the reverse of its outgoing link.
  std::vector<std::size_t> unpaired;
  for (std::size_t e = 0; e < E; ++e) {
    const auto reverse = out_link[spec.links[e].target_port];
    if (spec.links[reverse->value].target_port != spec.links[e].source_port) unpaired.push_back(e);
  }
  if (!unpaired.empty())
    throw InstanceError(AmbiguousPortPairing, "links without an opposite link on the same ports: " +
                                                  detail::join_ids(unpaired, 'e'));

  Instance inst;
  inst.state_count_ = K;
  inst.router_power_ = spec.router_power;
  inst.card_power_ = spec.card_power;
  inst.router_of_card_.reserve(C);
  for (auto r : spec.card_router) inst.router_of_card_.push_back(RouterId{r});
  inst.card_of_port_.reserve(P);
  for (auto c : spec.port_card) inst.card_of_port_.push_back(CardId{c});
  inst.out_link_of_port_ = std::move(out_link);
  inst.in_link_of_port_ = std::move(in_link);
  for (const auto& link : spec.links) {
    inst.link_source_.push_back(PortId{link.source_port});
    inst.link_target_.push_back(PortId{link.target_port});
    inst.link_states_.push_back(link.states);
  }
  inst.ports_of_card_.resize(C);
  for (std::size_t p = 0; p < P; ++p) inst.ports_of_card_[spec.port_card[p]].push_back(PortId{p});
  inst.cards_of_router_.resize(R);
  for (std::size_t c = 0; c < C; ++c)
    inst.cards_of_router_[spec.card_router[c]].push_back(CardId{c});
  for (const auto& d : spec.demands)
    inst.demands_.push_back(Demand{RouterId{d.source_router}, RouterId{d.target_router}, d.volume});
  inst.router_names_ = detail::labels_or_default(spec.router_names, R, 'r', "router");
  inst.card_names_ = detail::labels_or_default(spec.card_names, C, 'c', "card");
  inst.port_names_ = detail::labels_or_default(spec.port_names, P, 'p', "port");
  return inst;
}

/// The unique edge pairing induced by the port incidence, ordered by the
/// smaller link id of each pair. The smaller id is reported as `forward`.
inline std::vector<EdgePair> edge_pairs(const Instance& inst) {
  std::vector<EdgePair> pairs;
  for (std::size_t e = 0; e < inst.link_count(); ++e) {
    const LinkId link{e};
    const LinkId rev = inst.reverse_link(link);
    if (rev.value < e) continue;
    pairs.push_back(EdgePair{link, rev, inst.link_source(link), inst.link_target(link)});
  }
  return pairs;
}

struct RouterLinks {
  std::vector<LinkId> outgoing;
  std::vector<LinkId> incoming;
  bool operator==(const RouterLinks&) const = default;
};

/// Links leaving and entering router `r` through any port of any of its
/// cards, both ascending.
inline RouterLinks router_links(const Instance& inst, RouterId r) {
  RouterLinks out;
  for (std::size_t e = 0; e < inst.link_count(); ++e) {
    const LinkId link{e};
    if (inst.link_source_router(link) == r) out.outgoing.push_back(link);
    if (inst.link_target_router(link) == r) out.incoming.push_back(link);
  }
  return out;
}

/// Materialized dense incidence matrices l (C x P), g (R x C), a and b (E x P).
struct IncidenceMatrices {
  std::vector<std::vector<int>> l, g, a, b;
};

inline IncidenceMatrices dense_incidence(const Instance& inst) {
  IncidenceMatrices m;
  const auto R = inst.router_count(), C = inst.card_count(), P = inst.port_count(),
             E = inst.link_count();
  m.l.assign(C, std::vector<int>(P, 0));
  m.g.assign(R, std::vector<int>(C, 0));
  m.a.assign(E, std::vector<int>(P, 0));
  m.b.assign(E, std::vector<int>(P, 0));
  for (std::size_t p = 0; p < P; ++p) m.l[inst.card_of_port(PortId{p}).value][p] = 1;
  for (std::size_t c = 0; c < C; ++c) m.g[inst.router_of_card(CardId{c}).value][c] = 1;
  for (std::size_t e = 0; e < E; ++e) {
    m.a[e][inst.link_source(LinkId{e}).value] = 1;
    m.b[e][inst.link_target(LinkId{e}).value] = 1;
  }
  return m;
}

}  // namespace greenroute

#pragma once

// Exact solver for desk-scale instances. Every demand is routed on one
// simple router-level path; for a fixed routing the cheapest (x, z, y)
// support is determined greedily, so the search only branches over path
// choices. A brute-force oracle enumerates the same space exhaustively.

#include "greenroute/formulation.hpp"

#include <atomic>
#include <cassert>
#include <cstdint>
#include <mutex>
#include <thread>

namespace greenroute {

using Bits = std::vector<std::uint8_t>;
using BitMatrix = std::vector<Bits>;

/// Full binary assignment and its objective value.
struct Solution {
  Bits x;       // [card]
  BitMatrix y;  // [link][state]
  Bits z;       // [router]
  BitMatrix u;  // [link][demand]
  Rational objective;

  static Solution zeros(const Instance& inst) {
    return Solution{Bits(inst.card_count(), 0),
                    BitMatrix(inst.link_count(), Bits(inst.state_count(), 0)),
                    Bits(inst.router_count(), 0),
                    BitMatrix(inst.link_count(), Bits(inst.demand_count(), 0)), Rational(0)};
  }

  bool operator==(const Solution&) const = default;
};

/// Flattens to the column order of VariableLayout.
inline Bits to_assignment(const Solution& s, const VariableLayout& layout) {
  Bits out(layout.size(), 0);
  for (std::size_t c = 0; c < layout.cards; ++c) out[layout.x(c)] = s.x.at(c);
  for (std::size_t e = 0; e < layout.links; ++e)
    for (std::size_t k = 0; k < layout.states; ++k) out[layout.y(e, k)] = s.y.at(e).at(k);
  for (std::size_t r = 0; r < layout.routers; ++r) out[layout.z(r)] = s.z.at(r);
  for (std::size_t e = 0; e < layout.links; ++e)
    for (std::size_t d = 0; d < layout.demands; ++d) out[layout.u(e, d)] = s.u.at(e).at(d);
  return out;
}

inline Rational evaluate_terms(const std::vector<Term>& terms, const Bits& assignment) {
  Rational sum = 0;
  for (const auto& t : terms)
    if (assignment.at(t.var)) sum += t.coefficient;
  return sum;
}

inline Rational evaluate_objective(const Instance& inst, const Solution& s) {
  return evaluate_terms(build_objective(inst), to_assignment(s, VariableLayout::of(inst)));
}

/// Inverse of to_assignment; the objective is recomputed from the bits.
inline Solution solution_from_assignment(const Instance& inst, const Bits& bits) {
  const auto layout = VariableLayout::of(inst);
  Solution s = Solution::zeros(inst);
  for (std::size_t c = 0; c < layout.cards; ++c) s.x[c] = bits.at(layout.x(c));
  for (std::size_t e = 0; e < layout.links; ++e)
    for (std::size_t k = 0; k < layout.states; ++k) s.y[e][k] = bits.at(layout.y(e, k));
  for (std::size_t r = 0; r < layout.routers; ++r) s.z[r] = bits.at(layout.z(r));
  for (std::size_t e = 0; e < layout.links; ++e)
    for (std::size_t d = 0; d < layout.demands; ++d) s.u[e][d] = bits.at(layout.u(e, d));
  s.objective = evaluate_terms(build_objective(inst), bits);
  return s;
}

struct RouterPath {
  DemandId demand;
  std::vector<LinkId> links;
  bool operator==(const RouterPath&) const = default;
};

/// Simple router-level paths from the demand's source to its target, in
/// lexicographic order of link ids, at most `max_paths` of them.
inline std::vector<RouterPath> enumerate_paths(const Instance& inst, DemandId d,
                                               std::size_t max_paths) {
  std::vector<RouterPath> paths;
  if (max_paths == 0) return paths;
  const Demand& dem = inst.demand(d);
  std::vector<std::vector<LinkId>> outgoing(inst.router_count());
  for (std::size_t e = 0; e < inst.link_count(); ++e)
    outgoing[inst.link_source_router(LinkId{e}).value].push_back(LinkId{e});

  std::vector<bool> visited(inst.router_count(), false);
  std::vector<LinkId> stack;
  auto dfs = [&](auto&& self, RouterId at) -> void {
    if (paths.size() >= max_paths) return;
    if (at == dem.target) {
      paths.push_back(RouterPath{d, stack});
      return;
    }
    visited[at.value] = true;
    for (LinkId e : outgoing[at.value]) {
      const RouterId next = inst.link_target_router(e);
      if (visited[next.value]) continue;
      stack.push_back(e);
      self(self, next);
      stack.pop_back();
      if (paths.size() >= max_paths) break;
    }
    visited[at.value] = false;
  };
  dfs(dfs, dem.source);
  return paths;
}

namespace detail {

// Per-link state choice for given loads, or nullopt if some used link
// cannot be covered. `used[e]` counts demands routed on e.
inline std::optional<std::vector<std::optional<std::size_t>>> choose_states(
    const Instance& inst, const std::vector<EdgePair>& pairs, const std::vector<Rational>& load,
    const std::vector<int>& used, Variant variant) {
  const auto K = inst.state_count();
  std::vector<std::optional<std::size_t>> state(inst.link_count());
  if (variant == Variant::Corrected) {
    for (const auto& pair : pairs) {
      const auto f = pair.forward.value, r = pair.reverse.value;
      if (!used[f] && !used[r]) continue;
      std::optional<std::size_t> best;
      Rational best_power;
      for (std::size_t k = 0; k < K; ++k) {
        const auto& sf = inst.state(pair.forward, k);
        const auto& sr = inst.state(pair.reverse, k);
        if (sf.capacity < load[f] || sr.capacity < load[r]) continue;
        Rational power = sf.power + sr.power;
        if (!best || power < best_power) {
          best = k;
          best_power = std::move(power);
        }
      }
      if (!best) return std::nullopt;
      state[f] = state[r] = best;
    }
  } else {
    for (std::size_t e = 0; e < inst.link_count(); ++e) {
      if (!used[e]) continue;
      std::optional<std::size_t> best;
      for (std::size_t k = 0; k < K; ++k) {
        const auto& s = inst.state(LinkId{e}, k);
        if (s.capacity < load[e]) continue;
        if (!best || s.power < inst.state(LinkId{e}, *best).power) best = k;
      }
      if (!best) return std::nullopt;
      state[e] = best;
    }
  }
  return state;
}

struct SupportCost {
  std::vector<std::optional<std::size_t>> state;
  Bits cards;
  Bits routers;
  Rational cost;
};

inline std::optional<SupportCost> support_for_loads(const Instance& inst,
                                                    const std::vector<EdgePair>& pairs,
                                                    const std::vector<Rational>& load,
                                                    const std::vector<int>& used,
                                                    Variant variant) {
  auto states = choose_states(inst, pairs, load, used, variant);
  if (!states) return std::nullopt;
  SupportCost out{std::move(*states), Bits(inst.card_count(), 0), Bits(inst.router_count(), 0),
                  Rational(0)};
  for (std::size_t e = 0; e < inst.link_count(); ++e) {
    if (out.state[e]) out.cost += inst.state(LinkId{e}, *out.state[e]).power;
    if (!used[e]) continue;
    out.cards[inst.card_of_port(inst.link_source(LinkId{e})).value] = 1;
    out.cards[inst.card_of_port(inst.link_target(LinkId{e})).value] = 1;
  }
  for (std::size_t c = 0; c < inst.card_count(); ++c)
    if (out.cards[c]) {
      out.cost += inst.card_power(CardId{c});
      out.routers[inst.router_of_card(CardId{c}).value] = 1;
    }
  for (std::size_t r = 0; r < inst.router_count(); ++r)
    if (out.routers[r]) out.cost += inst.router_power(RouterId{r});
  return out;
}

inline bool satisfies_flow(const Instance& inst, const BitMatrix& u) {
  for (std::size_t d = 0; d < inst.demand_count(); ++d) {
    std::vector<int> balance(inst.router_count(), 0);
    for (std::size_t e = 0; e < inst.link_count(); ++e)
      if (u[e][d]) {
        ++balance[inst.link_source_router(LinkId{e}).value];
        --balance[inst.link_target_router(LinkId{e}).value];
      }
    const auto& dem = inst.demand(DemandId{d});
    for (std::size_t r = 0; r < inst.router_count(); ++r) {
      const int want = dem.source.value == r ? 1 : dem.target.value == r ? -1 : 0;
      if (balance[r] != want) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Cheapest (x, z, y) for routing `u` ([link][demand]); nullopt when some
/// used link (or, for the corrected variant, edge) has no state covering
/// its load. Ties between states go to the smallest state index.
inline std::optional<Solution> derive_support(const Instance& inst, const BitMatrix& u,
                                              Variant variant) {
  assert(detail::satisfies_flow(inst, u));
  std::vector<Rational> load(inst.link_count(), Rational(0));
  std::vector<int> used(inst.link_count(), 0);
  for (std::size_t e = 0; e < inst.link_count(); ++e)
    for (std::size_t d = 0; d < inst.demand_count(); ++d)
      if (u.at(e).at(d)) {
        load[e] += inst.demand(DemandId{d}).volume;
        ++used[e];
      }
  auto support = detail::support_for_loads(inst, edge_pairs(inst), load, used, variant);
  if (!support) return std::nullopt;
  Solution s = Solution::zeros(inst);
  s.u = u;
  s.x = std::move(support->cards);
  s.z = std::move(support->routers);
  for (std::size_t e = 0; e < inst.link_count(); ++e)
    if (support->state[e]) s.y[e][*support->state[e]] = 1;
  s.objective = evaluate_objective(inst, s);
  return s;
}

enum class SolveStatus { Optimal, Infeasible, BudgetExceeded };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveOptions {
  std::uint64_t node_budget = 10'000'000;
  std::size_t max_paths = 10'000;
  unsigned threads = 1;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Solution> solution;  // the optimum, or the incumbent on BudgetExceeded
  std::uint64_t nodes = 0;
};

namespace detail {

inline std::vector<std::vector<RouterPath>> all_demand_paths(const Instance& inst,
                                                             std::size_t max_paths) {
  std::vector<std::vector<RouterPath>> paths;
  for (std::size_t d = 0; d < inst.demand_count(); ++d) {
    auto p = enumerate_paths(inst, DemandId{d}, max_paths + 1);
    if (p.size() > max_paths)
      throw SolverError("demand d" + std::to_string(d) + " has more than " +
                        std::to_string(max_paths) + " simple paths");
    paths.push_back(std::move(p));
  }
  return paths;
}

inline BitMatrix routing_of(const Instance& inst, const std::vector<std::vector<RouterPath>>& paths,
                            const std::vector<std::size_t>& choice) {
  BitMatrix u(inst.link_count(), Bits(inst.demand_count(), 0));
  for (std::size_t d = 0; d < choice.size(); ++d)
    for (LinkId e : paths[d][choice[d]].links) u[e.value][d] = 1;
  return u;
}

// Depth-first branch and bound over path choices, one demand per level in
// input order. The support cost of the fixed demands bounds every
// completion from below: loads only grow, so state and activation costs
// never drop.
class BranchAndBound {
 public:
  struct Shared {
    std::mutex mutex;
    std::optional<Rational> best;
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> aborted{false};
    std::uint64_t budget = 0;
  };

  BranchAndBound(const Instance& inst, const std::vector<std::vector<RouterPath>>& paths,
                 Variant variant, Shared& shared)
      : inst_(inst),
        paths_(paths),
        variant_(variant),
        pairs_(edge_pairs(inst)),
        load_(inst.link_count(), Rational(0)),
        used_(inst.link_count(), 0),
        choice_(inst.demand_count(), 0),
        shared_(shared) {}

  // Explores the subtree where the first `prefix.size()` demands are fixed.
  void run(const std::vector<std::size_t>& prefix) {
    for (std::size_t d = 0; d < prefix.size(); ++d) apply(d, prefix[d], +1);
    search(prefix.size());
    for (std::size_t d = prefix.size(); d-- > 0;) apply(d, prefix[d], -1);
  }

  const std::optional<Rational>& best_cost() const { return best_cost_; }
  const std::vector<std::size_t>& best_choice() const { return best_choice_; }

 private:
  void apply(std::size_t d, std::size_t j, int sign) {
    choice_[d] = j;
    const auto& volume = inst_.demand(DemandId{d}).volume;
    for (LinkId e : paths_[d][j].links) {
      if (sign > 0) load_[e.value] += volume;
      else load_[e.value] -= volume;
      used_[e.value] += sign;
    }
  }

  bool pruned_by_shared(const Rational& bound) {
    std::lock_guard lock(shared_.mutex);
    // Strict: an equal-cost subtree elsewhere may still win the tie-break.
    return shared_.best && bound > *shared_.best;
  }

  void search(std::size_t depth) {
    if (shared_.aborted.load(std::memory_order_relaxed)) return;
    if (shared_.nodes.fetch_add(1, std::memory_order_relaxed) + 1 > shared_.budget) {
      shared_.aborted = true;
      return;
    }
    auto support = support_for_loads(inst_, pairs_, load_, used_, variant_);
    if (!support) return;
    if (best_cost_ && support->cost >= *best_cost_) return;
    if (pruned_by_shared(support->cost)) return;

    if (depth == inst_.demand_count()) {
      best_cost_ = support->cost;
      best_choice_ = choice_;
      std::lock_guard lock(shared_.mutex);
      if (!shared_.best || support->cost < *shared_.best) shared_.best = support->cost;
      return;
    }
    for (std::size_t j = 0; j < paths_[depth].size(); ++j) {
      apply(depth, j, +1);
      search(depth + 1);
      apply(depth, j, -1);
      if (shared_.aborted.load(std::memory_order_relaxed)) return;
    }
  }

  const Instance& inst_;
  const std::vector<std::vector<RouterPath>>& paths_;
  Variant variant_;
  std::vector<EdgePair> pairs_;
  std::vector<Rational> load_;
  std::vector<int> used_;
  std::vector<std::size_t> choice_;
  Shared& shared_;
  std::optional<Rational> best_cost_;
  std::vector<std::size_t> best_choice_;
};

}  // namespace detail

/// Minimum-power assignment for the chosen variant. Among optima the
/// lexicographically smallest vector of per-demand path indices wins, and
/// the result does not depend on `threads`.
inline SolveResult solve_exact(const Instance& inst, Variant variant,
                               const SolveOptions& options = {}) {
  if (options.node_budget == 0) throw SolverError("node budget must be at least 1");
  const auto paths = detail::all_demand_paths(inst, options.max_paths);
  for (const auto& p : paths)
    if (p.empty()) return SolveResult{SolveStatus::Infeasible, std::nullopt, 0};

  detail::BranchAndBound::Shared shared;
  shared.budget = options.node_budget;

  std::optional<Rational> best;
  std::vector<std::size_t> best_choice;
  auto consider = [&](const detail::BranchAndBound& bb) {
    if (bb.best_cost() && (!best || *bb.best_cost() < *best)) {
      best = bb.best_cost();
      best_choice = bb.best_choice();
    }
  };

  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1 || inst.demand_count() == 0) {
    detail::BranchAndBound bb(inst, paths, variant, shared);
    bb.run({});
    consider(bb);
  } else {
    // One task per path of the first demand; joined in path order so ties
    // resolve exactly as in the sequential search.
    const std::size_t tasks = paths.front().size();
    std::vector<std::optional<detail::BranchAndBound>> results(tasks);
    std::atomic<std::size_t> next{0};
    {
      std::vector<std::jthread> workers;
      for (unsigned t = 0; t < std::min<std::size_t>(threads, tasks); ++t)
        workers.emplace_back([&] {
          for (std::size_t j; (j = next.fetch_add(1)) < tasks;) {
            results[j].emplace(inst, paths, variant, shared);
            results[j]->run({j});
          }
        });
    }
    for (auto& r : results) consider(*r);
  }

  SolveResult result;
  result.nodes = shared.nodes.load();
  if (best) {
    result.solution = derive_support(inst, detail::routing_of(inst, paths, best_choice), variant);
    assert(result.solution && result.solution->objective == *best);
  }
  if (shared.aborted)
    result.status = SolveStatus::BudgetExceeded;
  else
    result.status = best ? SolveStatus::Optimal : SolveStatus::Infeasible;
  return result;
}

struct OracleResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Solution> solution;
  std::uint64_t combinations = 0;
};

/// Evaluates every combination of per-demand paths. Refuses instances with
/// more than `limit` combinations.
inline OracleResult brute_force_oracle(const Instance& inst, Variant variant,
                                       std::uint64_t limit = 1'000'000) {
  std::vector<std::vector<RouterPath>> paths;
  std::uint64_t product = 1;
  for (std::size_t d = 0; d < inst.demand_count(); ++d) {
    paths.push_back(enumerate_paths(inst, DemandId{d}, static_cast<std::size_t>(limit) + 1));
    product *= paths.back().size();
    if (product > limit)
      throw SolverError("OracleTooLarge: more than " + std::to_string(limit) +
                        " path combinations");
  }
  OracleResult result;
  if (product == 0) return result;

  std::vector<std::size_t> choice(inst.demand_count(), 0);
  while (true) {
    ++result.combinations;
    BitMatrix u(inst.link_count(), Bits(inst.demand_count(), 0));
    for (std::size_t d = 0; d < choice.size(); ++d)
      for (LinkId e : paths[d][choice[d]].links) u[e.value][d] = 1;
    if (auto s = derive_support(inst, u, variant))
      if (!result.solution || s->objective < result.solution->objective)
        result.solution = std::move(s);

    bool wrapped = true;
    for (std::size_t d = choice.size(); d-- > 0;) {
      if (++choice[d] < paths[d].size()) {
        wrapped = false;
        break;
      }
      choice[d] = 0;
    }
    if (wrapped) break;
  }
  result.status = result.solution ? SolveStatus::Optimal : SolveStatus::Infeasible;
  return result;
}

}  // namespace greenroute

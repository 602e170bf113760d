// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "test_support.hpp"

#include <chrono>
#include <functional>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

namespace {

using namespace greenroute;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kRandomInstances = 100;

struct Outcome {
  bool passed = true;
  std::string detail;

  void fail(const std::string& why) {
    if (passed) detail = why;
    passed = false;
  }
};

std::vector<Instance> random_instances() {
  std::vector<Instance> out;
  for (std::uint64_t seed = 0; seed < kRandomInstances; ++seed)
    out.push_back(build_instance(generate_instance(seed)));
  return out;
}

bool y_symmetric(const Instance& inst, const Solution& s) {
  return asymmetric_edges(inst, s).empty();
}

// Every corrected-variant feasible assignment seen anywhere in the run.
std::vector<std::pair<const Instance*, Solution>> g_corrected_feasible;

Outcome oracle_equivalence(const std::vector<Instance>& instances,
                           std::map<std::uint64_t, std::pair<Rational, Rational>>& optima) {
  Outcome out;
  std::size_t fully_enumerated = 0;
  const auto start = Clock::now();
  for (std::uint64_t seed = 0; seed < instances.size(); ++seed) {
    const auto& inst = instances[seed];
    Rational values[2];
    for (Variant v : {Variant::Corrected, Variant::Relaxed}) {
      const auto solved = solve_exact(inst, v);
      const auto oracle = brute_force_oracle(inst, v);
      if (solved.status != oracle.status) {
        out.fail("status differs on seed " + std::to_string(seed));
        continue;
      }
      if (solved.status != SolveStatus::Optimal) {
        out.fail("seed " + std::to_string(seed) + " not solved to optimality");
        continue;
      }
      if (solved.solution->objective != oracle.solution->objective)
        out.fail("objective differs on seed " + std::to_string(seed) + ": " +
                 to_string(solved.solution->objective) + " vs " +
                 to_string(oracle.solution->objective));
      values[v == Variant::Relaxed] = solved.solution->objective;
      // Cross-check against path-free enumeration where 2^n stays small.
      if (VariableLayout::of(inst).size() <= 20) {
        if (v == Variant::Corrected) ++fully_enumerated;
        const auto full = testing::full_enumeration_optimum(inst, v);
        if (!full || *full != solved.solution->objective)
          out.fail("full enumeration differs on seed " + std::to_string(seed));
      }
      if (v == Variant::Corrected) {
        g_corrected_feasible.emplace_back(&inst, *solved.solution);
        g_corrected_feasible.emplace_back(&inst, *oracle.solution);
      }
    }
    optima[seed] = {values[0], values[1]};
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (seconds >= 60) out.fail("took " + std::to_string(seconds) + " s");
  if (out.passed)
    out.detail = std::to_string(instances.size()) + " instances x 2 variants in " +
                 std::to_string(seconds).substr(0, 5) + " s, " +
                 std::to_string(fully_enumerated) + " also fully enumerated";
  return out;
}

Outcome gap_witness() {
  Outcome out;
  const auto inst = build_instance(testing::t1_spec());
  const auto full_c = testing::full_enumeration_optimum(inst, Variant::Corrected);
  const auto full_r = testing::full_enumeration_optimum(inst, Variant::Relaxed);
  if (!full_c || *full_c != 8) out.fail("full enumeration corrected optimum is not 8");
  if (!full_r || *full_r != 7) out.fail("full enumeration relaxed optimum is not 7");

  const auto gap = symmetry_gap(inst);
  if (gap.corrected_objective != 8 || gap.relaxed_objective != 7)
    out.fail("solver gives " + to_string(gap.corrected_objective) + "/" +
             to_string(gap.relaxed_objective));
  if (!(gap.gap > 0)) out.fail("gap not positive");

  const auto corrected = check_solution(inst, gap.witness, Variant::Corrected);
  bool symmetry_hit = false;
  for (const auto& v : corrected.violations)
    symmetry_hit = symmetry_hit || constraint_family(v.constraint_name) == family::symmetry;
  if (!symmetry_hit) out.fail("relaxed witness violates no symmetry row");
  if (!check_solution(inst, gap.witness, Variant::Relaxed).passed)
    out.fail("relaxed witness fails a relaxed row");
  if (out.passed) out.detail = "corrected 8, relaxed 7, gap 1, witness breaks symmetry only";
  return out;
}

Outcome error1_detection(const std::vector<Instance>& instances) {
  Outcome out;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (instances[i].demand_count() == 0) continue;
    ++checked;
    const auto result = build_original_literal(instances[i]);
    const auto* defects = std::get_if<std::vector<StructuralDefect>>(&result);
    if (!defects || defects->empty()) {
      out.fail("no defects for seed " + std::to_string(i));
      continue;
    }
    bool transit = false, endpoint = false;
    for (const auto& d : *defects) {
      transit = transit || d.family == "flow-transit";
      endpoint = endpoint || d.family == "flow-endpoint";
    }
    if (!transit || !endpoint) out.fail("missing defect family for seed " + std::to_string(i));
  }
  if (checked == 0) out.fail("no instance with demands");
  if (out.passed) out.detail = std::to_string(checked) + " instances, both families each";
  return out;
}

Outcome symmetry_agreement(const std::vector<Instance>& instances) {
  Outcome out;
  // Feasible corrected assignments from the solvers and from full enumeration.
  std::vector<Instance> fixtures{build_instance(testing::t1_spec()),
                                 build_instance(testing::t1_asym_spec())};
  std::size_t enumerated = 0;
  for (const auto& inst : fixtures) {
    const auto L = VariableLayout::of(inst);
    Bits bits(L.size());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << L.size()); ++mask) {
      for (std::size_t i = 0; i < L.size(); ++i) bits[i] = (mask >> i) & 1;
      if (!testing::reference_feasible(inst, bits, Variant::Corrected)) continue;
      ++enumerated;
      if (!y_symmetric(inst, solution_from_assignment(inst, bits)))
        out.fail("enumerated feasible assignment is asymmetric");
    }
  }
  for (const auto& [inst, s] : g_corrected_feasible)
    if (!y_symmetric(*inst, s)) out.fail("solver optimum is asymmetric");

  // Random assignments filtered by the symmetry rows alone.
  std::mt19937_64 rng(2024);
  std::size_t accepted = 0, drawn = 0;
  while (accepted < 1000 && drawn < 1'000'000) {
    const auto& inst = instances[rng() % instances.size()];
    if (inst.link_count() == 0) continue;
    ++drawn;
    const auto model = build_corrected(inst);
    LinearModel symmetry_only{model.variables, model.objective, {}};
    for (const auto& row : model.constraints)
      if (constraint_family(row.name) == family::symmetry) symmetry_only.constraints.push_back(row);
    const auto L = VariableLayout::of(inst);
    Bits bits(L.size());
    for (auto& b : bits) b = rng() & 1;
    // Bias towards candidates that may pass: copy each forward state row to
    // its reverse link half of the time.
    for (const auto& pair : edge_pairs(inst))
      if (rng() & 1)
        for (std::size_t k = 0; k < inst.state_count(); ++k)
          bits[L.y(pair.reverse.value, k)] = bits[L.y(pair.forward.value, k)];
    if (!check_assignment(symmetry_only, bits).passed) continue;
    ++accepted;
    if (!y_symmetric(inst, solution_from_assignment(inst, bits)))
      out.fail("assignment passing symmetry rows is asymmetric");
  }
  if (accepted < 1000) out.fail("only " + std::to_string(accepted) + " assignments sampled");
  if (out.passed)
    out.detail = std::to_string(g_corrected_feasible.size()) + " solver optima, " +
                 std::to_string(enumerated) + " enumerated feasible, 1000 random";
  return out;
}

Outcome monotonicity(const std::map<std::uint64_t, std::pair<Rational, Rational>>& optima) {
  Outcome out;
  for (const auto& [seed, values] : optima)
    if (!(values.second <= values.first)) out.fail("relaxed > corrected on seed " + std::to_string(seed));
  if (optima.size() != kRandomInstances) out.fail("missing optima");
  std::size_t strict = 0;
  for (const auto& [seed, values] : optima) strict += values.second < values.first;
  if (out.passed)
    out.detail = std::to_string(optima.size()) + " instances, " + std::to_string(strict) +
                 " with a strict gap";
  return out;
}

Outcome mutation_suite(const std::vector<Instance>& instances) {
  Outcome out;
  std::size_t flips = 0, still_feasible = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    const auto& inst = instances[i];
    const auto variant = i % 2 ? Variant::Relaxed : Variant::Corrected;
    const auto solved = solve_exact(inst, variant);
    if (solved.status != SolveStatus::Optimal) {
      out.fail("seed " + std::to_string(i) + " not optimal");
      continue;
    }
    const auto L = VariableLayout::of(inst);
    const auto optimum = to_assignment(*solved.solution, L);
    for (std::size_t bit = 0; bit < optimum.size(); ++bit) {
      ++flips;
      auto bits = optimum;
      bits[bit] ^= 1;
      auto mutated = solution_from_assignment(inst, bits);
      const auto report = check_solution(inst, mutated, variant);
      const bool truth = testing::reference_feasible(inst, bits, variant);
      if (report.passed) {
        ++still_feasible;
        if (!truth) out.fail("false pass on seed " + std::to_string(i));
        if (mutated.objective < solved.solution->objective)
          out.fail("feasible flip beats the optimum on seed " + std::to_string(i));
      } else {
        if (truth) out.fail("false violation on seed " + std::to_string(i));
        for (const auto& v : report.violations)
          if (v.constraint_name.empty()) out.fail("unnamed violation");
      }
    }
  }
  if (out.passed)
    out.detail = std::to_string(flips) + " flips, " + std::to_string(still_feasible) +
                 " still feasible, 0 false passes";
  return out;
}

Outcome count_identities(const std::vector<Instance>& instances) {
  Outcome out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    const auto C = inst.card_count(), E = inst.link_count(), K = inst.state_count(),
               R = inst.router_count(), D = inst.demand_count();
    std::size_t connected = 0;
    for (std::size_t p = 0; p < inst.port_count(); ++p) connected += inst.port_connected(PortId{p});
    const auto m = build_corrected(inst);
    std::map<std::string, std::size_t> counts;
    for (const auto& row : m.constraints) ++counts[std::string(constraint_family(row.name))];
    const std::map<std::string, std::size_t> expected{
        {"card_out", D * C}, {"card_in", D * C},      {"activation", C}, {"single_state", E},
        {"flow", D * R},     {"capacity", E},         {"symmetry", connected * K}};
    auto nonzero = expected;
    std::erase_if(nonzero, [](const auto& kv) { return kv.second == 0; });
    if (m.variables.size() != C + E * K + R + E * D)
      out.fail("variable count on seed " + std::to_string(i));
    if (counts != nonzero) out.fail("family counts on seed " + std::to_string(i));
  }
  if (out.passed) out.detail = std::to_string(instances.size()) + " corrected models";
  return out;
}

Outcome lp_round_trip(const std::vector<Instance>& instances) {
  Outcome out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto model = build_model(instances[i], i % 2 ? Variant::Relaxed : Variant::Corrected);
    const auto text = export_lp(model);
    if (!(parse_lp(text) == model)) out.fail("round trip differs on seed " + std::to_string(i));
  }
  std::ifstream golden_file(testing::data_path("t1.lp"), std::ios::binary);
  std::ostringstream golden;
  golden << golden_file.rdbuf();
  const auto t1 = testing::load("t1.json");
  for (int run = 0; run < 3; ++run)
    if (export_lp(build_corrected(t1)) != golden.str()) out.fail("T1 export differs from golden");
  if (out.passed) out.detail = std::to_string(instances.size()) + " models, golden T1 stable";
  return out;
}

}  // namespace

int main() {
  const auto instances = random_instances();
  std::map<std::uint64_t, std::pair<Rational, Rational>> optima;

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence", [&] { return oracle_equivalence(instances, optima); }},
      {"error-2 gap witness on T1", [] { return gap_witness(); }},
      {"error-1 detection", [&] { return error1_detection(instances); }},
      {"symmetry agreement", [&] { return symmetry_agreement(instances); }},
      {"monotonicity", [&] { return monotonicity(optima); }},
      {"checker mutation suite", [&] { return mutation_suite(instances); }},
      {"count identities", [&] { return count_identities(instances); }},
      {"LP round trip", [&] { return lp_round_trip(instances); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.fail(std::string("exception: ") + e.what());
    }
    failures += !outcome.passed;
    std::cout << (outcome.passed ? "PASS" : "FAIL") << " criterion " << i + 1 << " ("
              << criteria[i].first << "): " << outcome.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

#pragma once

// Constraint-by-constraint checking of assignments against a generated
// model, plus the two defect demonstrations: the literal port-indexed flow
// equations, and the objective gap opened by dropping edge-state equality.

#include "greenroute/solver.hpp"

namespace greenroute {

struct Violation {
  std::string constraint_name;
  Rational lhs;
  Relation relation = Relation::LessEqual;
  Rational rhs;
  bool operator==(const Violation&) const = default;
};

struct CheckReport {
  bool passed = true;
  std::vector<Violation> violations;
};

class DimensionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool holds(const Rational& lhs, Relation relation, const Rational& rhs) {
  switch (relation) {
    case Relation::LessEqual: return lhs <= rhs;
    case Relation::Equal: return lhs == rhs;
    case Relation::GreaterEqual: return lhs >= rhs;
  }
  return false;
}

/// Evaluates every row of `model` at `assignment`; all violations are reported.
inline CheckReport check_assignment(const LinearModel& model, const Bits& assignment) {
  if (assignment.size() != model.variables.size())
    throw DimensionMismatch("assignment has " + std::to_string(assignment.size()) +
                            " entries, model has " + std::to_string(model.variables.size()) +
                            " variables");
  CheckReport report;
  for (const auto& row : model.constraints) {
    Rational lhs = evaluate_terms(row.terms, assignment);
    if (!holds(lhs, row.relation, row.rhs))
      report.violations.push_back(Violation{row.name, std::move(lhs), row.relation, row.rhs});
  }
  report.passed = report.violations.empty();
  return report;
}

inline void check_dimensions(const Instance& inst, const Solution& s) {
  auto matrix_ok = [](const BitMatrix& m, std::size_t rows, std::size_t cols) {
    if (m.size() != rows) return false;
    for (const auto& row : m)
      if (row.size() != cols) return false;
    return true;
  };
  if (s.x.size() != inst.card_count() || s.z.size() != inst.router_count() ||
      !matrix_ok(s.y, inst.link_count(), inst.state_count()) ||
      !matrix_ok(s.u, inst.link_count(), inst.demand_count()))
    throw DimensionMismatch("solution dimensions do not match the instance");
  auto binary = [](const Bits& bits) {
    for (auto b : bits)
      if (b > 1) return false;
    return true;
  };
  bool ok = binary(s.x) && binary(s.z);
  for (const auto& row : s.y) ok = ok && binary(row);
  for (const auto& row : s.u) ok = ok && binary(row);
  if (!ok) throw DimensionMismatch("solution entries must be 0 or 1");
}

/// Checks `solution` against the variant's model. A stated objective that
/// differs from the recomputed one is reported as `objective[]`.
inline CheckReport check_solution(const Instance& inst, const Solution& solution,
                                  Variant variant) {
  check_dimensions(inst, solution);
  const auto model = build_model(inst, variant);
  const auto assignment = to_assignment(solution, VariableLayout::of(inst));
  auto report = check_assignment(model, assignment);
  Rational recomputed = evaluate_terms(model.objective, assignment);
  if (recomputed != solution.objective) {
    report.violations.push_back(
        Violation{"objective[]", std::move(recomputed), Relation::Equal, solution.objective});
    report.passed = false;
  }
  return report;
}

/// Edge pairs whose two links disagree on some state bit.
inline std::vector<EdgePair> asymmetric_edges(const Instance& inst, const Solution& s) {
  std::vector<EdgePair> out;
  for (const auto& pair : edge_pairs(inst))
    if (s.y.at(pair.forward.value) != s.y.at(pair.reverse.value)) out.push_back(pair);
  return out;
}

class SolveFailed : public std::runtime_error {
 public:
  SolveFailed(Variant variant, SolveStatus status)
      : std::runtime_error(std::string(to_string(variant)) + " variant: " +
                           std::string(to_string(status))),
        variant_(variant),
        status_(status) {}
  Variant variant() const noexcept { return variant_; }
  SolveStatus status() const noexcept { return status_; }

 private:
  Variant variant_;
  SolveStatus status_;
};

struct SymmetryGap {
  Rational corrected_objective;
  Rational relaxed_objective;
  Rational gap;
  Solution witness;                       // the relaxed optimum
  std::vector<EdgePair> asymmetric_edges;  // where the witness breaks edge-state equality
};

/// Solves both variants; throws SolveFailed unless both are Optimal.
inline SymmetryGap symmetry_gap(const Instance& inst, const SolveOptions& options = {}) {
  auto corrected = solve_exact(inst, Variant::Corrected, options);
  if (corrected.status != SolveStatus::Optimal)
    throw SolveFailed(Variant::Corrected, corrected.status);
  auto relaxed = solve_exact(inst, Variant::Relaxed, options);
  if (relaxed.status != SolveStatus::Optimal) throw SolveFailed(Variant::Relaxed, relaxed.status);

  SymmetryGap out;
  out.corrected_objective = corrected.solution->objective;
  out.relaxed_objective = relaxed.solution->objective;
  out.gap = out.corrected_objective - out.relaxed_objective;
  out.witness = std::move(*relaxed.solution);
  out.asymmetric_edges = asymmetric_edges(inst, out.witness);
  return out;
}

struct DefectReport {
  std::vector<StructuralDefect> error1;
  std::optional<SymmetryGap> error2;  // present only when the gap is positive
};

inline DefectReport demonstrate_defects(const Instance& inst, const SolveOptions& options = {}) {
  DefectReport report;
  auto literal = build_original_literal(inst);
  if (auto* defects = std::get_if<std::vector<StructuralDefect>>(&literal))
    report.error1 = std::move(*defects);
  auto gap = symmetry_gap(inst, options);
  if (gap.gap > 0) report.error2 = std::move(gap);
  return report;
}

}  // namespace greenroute

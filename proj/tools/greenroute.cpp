// greenroute: command-line driver for the energy-aware routing models.
//
// Exit codes: 0 success / passed / optimal, 1 I/O or schema error,
// 2 check violations, 3 infeasible, 4 node budget exceeded.

#include "greenroute/greenroute.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using namespace greenroute;

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kViolations = 2,
  kInfeasible = 3,
  kBudgetExceeded = 4,
};

struct RunConfig {
  std::string instance_path;
  std::string solution_path;
  std::string output_path;
  std::string variant = "corrected";
  std::uint64_t budget = SolveOptions{}.node_budget;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

Variant parse_variant(const std::string& text) {
  return text == "relaxed" ? Variant::Relaxed : Variant::Corrected;
}

std::size_t max_paths_from_env() {
  const char* value = std::getenv("GREENROUTE_MAX_PATHS");
  if (!value || !*value) return SolveOptions{}.max_paths;
  char* end = nullptr;
  const auto parsed = std::strtoull(value, &end, 10);
  if (*end != '\0' || parsed == 0)
    throw SchemaError("GREENROUTE_MAX_PATHS must be a positive integer");
  return static_cast<std::size_t>(parsed);
}

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions options;
  options.node_budget = cfg.budget;
  options.threads = cfg.threads;
  options.max_paths = max_paths_from_env();
  return options;
}

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw SchemaError("cannot write '" + cfg.output_path + "'");
  out << text;
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

int cmd_validate(const RunConfig& cfg) {
  const auto inst = load_instance(cfg.instance_path);
  if (cfg.solution_path.empty()) {
    ordered_json doc = check_report_to_json(CheckReport{});
    doc["instance"] = {{"routers", inst.router_count()},   {"cards", inst.card_count()},
                       {"ports", inst.port_count()},       {"links", inst.link_count()},
                       {"states", inst.state_count()},     {"demands", inst.demand_count()},
                       {"edges", edge_pairs(inst).size()}};
    write_output(cfg, dump(doc));
    return kOk;
  }
  const auto solution = solution_from_json(inst, read_json_file(cfg.solution_path));
  const auto report = check_solution(inst, solution, parse_variant(cfg.variant));
  ordered_json doc = check_report_to_json(report);
  doc["variant"] = std::string(to_string(parse_variant(cfg.variant)));
  write_output(cfg, dump(doc));
  if (!report.passed) {
    for (const auto& v : report.violations)
      std::cerr << "violated " << v.constraint_name << ": " << to_string(v.lhs) << ' '
                << to_string(v.relation) << ' ' << to_string(v.rhs) << '\n';
    return kViolations;
  }
  return kOk;
}

int status_exit(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return kOk;
    case SolveStatus::Infeasible: return kInfeasible;
    case SolveStatus::BudgetExceeded: return kBudgetExceeded;
  }
  return kInputError;
}

int cmd_solve(const RunConfig& cfg) {
  const auto inst = load_instance(cfg.instance_path);
  const auto variant = parse_variant(cfg.variant);
  const auto result = solve_exact(inst, variant, solve_options(cfg));
  ordered_json doc;
  doc["variant"] = std::string(to_string(variant));
  doc["status"] = std::string(to_string(result.status));
  doc["nodes"] = result.nodes;
  if (result.solution) {
    const auto body = solution_to_json(inst, *result.solution);
    for (const auto& [key, value] : body.items()) doc[key] = value;
  } else {
    doc["objective"] = nullptr;
  }
  write_output(cfg, dump(doc));
  std::cerr << to_string(result.status);
  if (result.solution) std::cerr << " objective " << to_string(result.solution->objective);
  std::cerr << '\n';
  return status_exit(result.status);
}

int cmd_export(const RunConfig& cfg) {
  const auto inst = load_instance(cfg.instance_path);
  write_output(cfg, export_lp(build_model(inst, parse_variant(cfg.variant))));
  return kOk;
}

int cmd_demo(const RunConfig& cfg) {
  const auto inst = load_instance(cfg.instance_path);
  try {
    const auto report = demonstrate_defects(inst, solve_options(cfg));
    write_output(cfg, dump(defect_report_to_json(inst, report)));
    return kOk;
  } catch (const SolveFailed& e) {
    std::cerr << "error: " << e.what() << '\n';
    return status_exit(e.status());
  }
}

int cmd_gen(const RunConfig& cfg) {
  write_output(cfg, instance_spec_to_json(generate_instance(cfg.seed)).dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware routing: validate, solve, export and compare model variants"};
  app.require_subcommand(1);
  RunConfig cfg;

  const std::vector<std::string> variants{"corrected", "relaxed"};
  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("instance", cfg.instance_path, "Instance JSON file")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto add_variant = [&](CLI::App* sub) {
    sub->add_option("--variant", cfg.variant, "Model variant")
        ->check(CLI::IsMember(variants));
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", cfg.output_path, "Output file (default: stdout)");
  };
  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--budget", cfg.budget, "Branch-and-bound node limit")
        ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
    sub->add_option("--threads", cfg.threads, "Worker threads for the search")
        ->check(CLI::Range(1u, 256u));
  };

  auto* validate = app.add_subcommand("validate", "Validate an instance, optionally a solution");
  add_instance(validate);
  validate->add_option("--solution", cfg.solution_path, "Solution JSON to check")
      ->check(CLI::ExistingFile);
  add_variant(validate);
  add_output(validate);

  auto* solve = app.add_subcommand("solve", "Solve an instance exactly");
  add_instance(solve);
  add_variant(solve);
  add_budget(solve);
  add_output(solve);

  auto* exp = app.add_subcommand("export", "Write the model in LP format");
  add_instance(exp);
  add_variant(exp);
  add_output(exp);

  auto* demo = app.add_subcommand("demo", "Report the defects of the original formulation");
  add_instance(demo);
  add_budget(demo);
  add_output(demo);

  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--seed", cfg.seed, "Random seed")->required();
  add_output(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*validate) return cmd_validate(cfg);
    if (*solve) return cmd_solve(cfg);
    if (*exp) return cmd_export(cfg);
    if (*demo) return cmd_demo(cfg);
    if (*gen) return cmd_gen(cfg);
  } catch (const InstanceError& e) {
    std::cerr << "invalid instance: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kInputError;
}

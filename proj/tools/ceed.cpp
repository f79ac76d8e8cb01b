// Command line front end: solve, penalty and oracle subcommands.
//
// Exit status: 0 success, 2 infeasible demand, 1 any other error.

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ceed/harness.hpp"
#include "ceed/oracle.hpp"
#include "ceed/penalty.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

void print_warnings(const ceed::SystemData& system) {
  for (const auto& w : system.warnings) std::cerr << "warning: " << w << '\n';
}

ceed::PenaltyFactors factors_for(const ceed::DispatchProblem& problem) {
  if (problem.gases().empty()) return ceed::PenaltyFactors(problem.demand(), {});
  return ceed::penalty_factors_all(problem);
}

int cmd_solve(const std::string& problem_path, const std::vector<double>& demands,
              const std::string& solver, int trials, std::optional<int> iterations,
              std::uint64_t seed, std::optional<int> k1, std::optional<int> k2,
              const std::string& out, unsigned workers, std::optional<int> bits) {
  ceed::ExperimentSpec spec;
  spec.problem_path = problem_path;
  spec.demands = demands;
  if (solver == "pso") spec.solvers = {ceed::Solver::Pso};
  else if (solver == "ga") spec.solvers = {ceed::Solver::Ga};
  else spec.solvers = {ceed::Solver::Pso, ceed::Solver::Ga};
  spec.trials = trials;
  if (iterations) {
    spec.settings.pso.iterations = *iterations;
    spec.settings.ga.generations = *iterations;
  }
  if (bits) spec.settings.ga.bits_per_gene = *bits;
  spec.base_seed = seed;
  spec.k1 = k1;
  spec.k2 = k2;
  spec.output_dir = out;
  spec.workers = workers;

  print_warnings(ceed::load_system(spec.problem_path));
  const auto report = ceed::run_experiment(spec);
  std::cout << ceed::format_table(report);
  if (!out.empty()) std::cout << "results written to " << out << '\n';
  return 0;
}

int cmd_penalty(const std::string& problem_path, std::optional<double> demand) {
  const auto system = ceed::load_system(problem_path);
  print_warnings(system);
  if (!demand) demand = system.demand;
  if (!demand) throw ceed::ValidationError("demand", "pass --demand or set it in the file");
  const auto problem = ceed::make_problem(system, *demand);
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "demand " << problem.demand() << " MW\n";
  for (ceed::Gas gas : problem.gases()) {
    std::cout << ceed::to_string(gas) << " ratios:";
    for (const auto& r : ceed::unit_ratios(problem, gas))
      std::cout << " [unit " << r.unit_id << ": " << r.h << ']';
    std::cout << '\n';
  }
  for (ceed::Gas gas : problem.gases())
    std::cout << "h_" << ceed::to_string(gas) << " = " << ceed::penalty_factor(problem, gas) << '\n';
  return 0;
}

int cmd_oracle(const std::string& problem_path, std::optional<double> demand,
               std::optional<int> k1, std::optional<int> k2, std::optional<double> resolution) {
  const auto system = ceed::load_system(problem_path);
  print_warnings(system);
  if (!demand) demand = system.demand;
  if (!demand) throw ceed::ValidationError("demand", "pass --demand or set it in the file");
  const auto problem =
      ceed::make_problem(system, *demand, k1.value_or(system.k1), k2.value_or(system.k2));
  const auto h = factors_for(problem);
  const auto lambda = ceed::oracle::lambda_solve(problem, h);
  const auto solution = ceed::evaluate(problem, lambda.powers, h);
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "lambda " << lambda.lambda << " $/MWh after " << lambda.iterations
            << " bisections, residual " << lambda.residual << " MW\n";
  for (std::size_t i = 0; i < solution.powers.size(); ++i)
    std::cout << "P_" << problem.unit(i).id << " = " << solution.powers[i] << '\n';
  for (const auto& [gas, e] : solution.emissions)
    std::cout << "E_" << ceed::to_string(gas) << " = " << e << '\n';
  std::cout << "FC = " << solution.fuel_cost << "\nEC = " << solution.emission_cost
            << "\nTC = " << solution.total_cost << '\n';
  if (resolution) {
    const auto grid = ceed::oracle::grid_search(problem, h, *resolution);
    std::cout << "grid TC = " << grid.total_cost << " at";
    for (double p : grid.powers) std::cout << ' ' << p;
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combined economic emission dispatch solver"};
  app.require_subcommand(1);

  std::string problem_path;
  std::vector<double> demands;
  std::string solver = "both";
  int trials = 50;
  std::optional<int> iterations;
  std::uint64_t seed = 1;
  std::optional<int> k1;
  std::optional<int> k2;
  std::string out;
  unsigned workers = 0;
  std::optional<int> bits;

  auto* solve = app.add_subcommand("solve", "Run PSO and/or GA trials");
  solve->add_option("--problem", problem_path, "Problem file (JSON)")->required()->check(CLI::ExistingFile);
  solve->add_option("--demand", demands, "Load demand in MW (repeatable)");
  solve->add_option("--solver", solver, "pso, ga or both")->check(CLI::IsMember({"pso", "ga", "both"}));
  solve->add_option("--trials", trials, "Independent trials per solver and demand")->check(CLI::PositiveNumber);
  solve->add_option("--iterations", iterations, "PSO iterations / GA generations")->check(CLI::PositiveNumber);
  solve->add_option("--seed", seed, "Base seed; trial k uses seed + k");
  solve->add_option("--k1", k1, "Fuel cost switch")->check(CLI::IsMember({0, 1}));
  solve->add_option("--k2", k2, "Emission switch")->check(CLI::IsMember({0, 1}));
  solve->add_option("--out", out, "Output directory for report and traces");
  solve->add_option("--workers", workers, "Worker threads (0 = all cores)");
  solve->add_option("--bits", bits, "GA bits per gene");

  std::optional<double> demand;
  std::optional<double> resolution;
  auto* penalty = app.add_subcommand("penalty", "Print per-gas price penalty factors");
  penalty->add_option("--problem", problem_path, "Problem file (JSON)")->required()->check(CLI::ExistingFile);
  penalty->add_option("--demand", demand, "Load demand in MW");

  auto* oracle = app.add_subcommand("oracle", "Lambda-iteration reference dispatch");
  oracle->add_option("--problem", problem_path, "Problem file (JSON)")->required()->check(CLI::ExistingFile);
  oracle->add_option("--demand", demand, "Load demand in MW");
  oracle->add_option("--k1", k1, "Fuel cost switch")->check(CLI::IsMember({0, 1}));
  oracle->add_option("--k2", k2, "Emission switch")->check(CLI::IsMember({0, 1}));
  oracle->add_option("--resolution", resolution, "Also run grid search at this MW step (N <= 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*solve)
      return cmd_solve(problem_path, demands, solver, trials, iterations, seed, k1, k2, out, workers, bits);
    if (*penalty) return cmd_penalty(problem_path, demand);
    if (*oracle) return cmd_oracle(problem_path, demand, k1, k2, resolution);
  } catch (const ceed::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

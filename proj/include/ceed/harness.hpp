#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ceed/error.hpp"
#include "ceed/ga.hpp"
#include "ceed/model.hpp"
#include "ceed/pso.hpp"

namespace ceed {

// Malformed problem file. line() is 1-based, 0 when unknown.
class ParseError : public Error {
public:
  ParseError(const std::string& source, std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Everything in a problem file except the demand, which is usually chosen per run.
struct SystemData {
  std::string name;
  std::string provenance;
  std::vector<GeneratorUnit> units;
  std::optional<LossMatrix> losses;
  std::set<Gas> gases;
  std::optional<double> demand;
  int k1 = 1;
  int k2 = 1;
  std::vector<std::string> warnings;
};

// Problem file layout (JSON):
//   {
//     "name": "...", "provenance": "...",          (optional)
//     "gases": ["nox", "cox", "sox"],
//     "demand": 1500,                               (optional)
//     "k1": 1, "k2": 1,                             (optional, default 1)
//     "units": [{"id": 1, "p_min": 50, "p_max": 200,
//                "cost": [a, b, c],
//                "emissions": {"nox": [alpha, beta, gamma], ...}}, ...],
//     "b_matrix": [[...], ...]                      (optional, 1/MW)
//   }
SystemData parse_system(const std::string& text, const std::string& source = "<string>");
SystemData load_system(const std::filesystem::path& path);

DispatchProblem make_problem(const SystemData& system, double demand);
DispatchProblem make_problem(const SystemData& system, double demand, int k1, int k2);

// Uses `demand` when given, otherwise the file's own demand field.
DispatchProblem load_problem(const std::filesystem::path& path,
                             std::optional<double> demand = std::nullopt);

enum class Solver { Pso, Ga };

std::string_view to_string(Solver solver);

struct TrialResult {
  int index = 0;
  std::uint64_t seed = 0;
  DispatchSolution solution;
  ConvergenceTrace trace;
  double seconds = 0.0;
};

struct TrialReport {
  Solver solver = Solver::Pso;
  double demand = 0.0;
  PenaltyFactors h;
  std::vector<TrialResult> trials;  // ordered by trial index
  double best_tc = 0.0;
  double median_tc = 0.0;
  double mean_tc = 0.0;
  double worst_tc = 0.0;
  std::size_t best_index = 0;
  // Trial whose wall-clock time is nearest the mean time. Timing dependent.
  std::size_t representative_index = 0;
  double mean_seconds = 0.0;

  const TrialResult& best() const { return trials.at(best_index); }
  const TrialResult& representative() const { return trials.at(representative_index); }
};

struct SolverSettings {
  pso::Config pso;
  ga::Config ga;
};

// Runs `trials` independent solves with seeds base_seed + trial index, on up to
// `workers` threads (0 = hardware concurrency). The result does not depend on the
// worker count apart from the timing fields.
TrialReport run_trials(const DispatchProblem& problem, const PenaltyFactors& h, Solver solver,
                       int trials, std::uint64_t base_seed, const SolverSettings& settings,
                       unsigned workers = 0);

struct ExperimentSpec {
  std::filesystem::path problem_path;
  std::vector<double> demands;  // empty: the file's demand
  std::vector<Solver> solvers{Solver::Pso, Solver::Ga};
  int trials = 50;
  SolverSettings settings;
  std::uint64_t base_seed = 1;
  std::optional<int> k1;
  std::optional<int> k2;
  std::filesystem::path output_dir;  // empty: nothing is written
  unsigned workers = 0;
};

struct ExperimentReport {
  std::string problem_name;
  std::vector<TrialReport> runs;  // demand-major, then solver order of the spec
};

// Penalty factors are computed once per demand. When output_dir is set, writes
// report.json (deterministic), timing.json, table.txt and one trace per trial
// under traces/.
ExperimentReport run_experiment(const ExperimentSpec& spec);

// "iteration,objective" header then one row per entry, iterations counted from 1.
void export_trace(const ConvergenceTrace& trace, const std::filesystem::path& path);
ConvergenceTrace read_trace(const std::filesystem::path& path);

// Deterministic JSON: penalty factors, aggregates and every trial's solution.
std::string report_json(const ExperimentReport& report);
std::string timing_json(const ExperimentReport& report);

// Table-style text: one column per run (representative trial), rows P_i, E_g,
// EC, FC, TC, t, followed by aggregates.
std::string format_table(const ExperimentReport& report);

}  // namespace ceed

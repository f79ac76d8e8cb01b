#include "ceed/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "ceed/penalty.hpp"
#include "json.hpp"

namespace ceed {

using nlohmann::json;

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& message)
    : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + message),
      line_(line) {}

namespace {

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

double number(const json& node, const std::string& field) {
  if (!node.is_number()) throw ValidationError(field, "expected a number");
  return node.get<double>();
}

Quadratic triple(const json& node, const std::string& field) {
  if (!node.is_array() || node.size() != 3)
    throw ValidationError(field, "expected an array of three numbers");
  return {number(node[0], field + "[0]"), number(node[1], field + "[1]"),
          number(node[2], field + "[2]")};
}

int switch_value(const json& doc, const char* key) {
  if (!doc.contains(key)) return 1;
  const auto& node = doc.at(key);
  if (!node.is_number_integer()) throw ValidationError(key, "expected 0 or 1");
  return node.get<int>();
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

json solution_json(const DispatchSolution& s) {
  json j;
  j["powers"] = s.powers;
  j["fuel_cost"] = s.fuel_cost;
  json emissions = json::object();
  for (const auto& [gas, e] : s.emissions) emissions[std::string(to_string(gas))] = e;
  j["emissions"] = emissions;
  j["emission_cost"] = s.emission_cost;
  j["total_cost"] = s.total_cost;
  j["balance_residual"] = s.balance_residual;
  j["feasible"] = s.feasible();
  return j;
}

std::string run_label(const TrialReport& run) {
  std::ostringstream os;
  os << to_string(run.solver) << '_' << run.demand;
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

// ---------------------------------------------------------------------------
// Problem files

SystemData parse_system(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, line_of(text, e.byte), e.what());
  }
  if (!doc.is_object()) throw ParseError(source, 1, "top level must be an object");

  SystemData sys;
  sys.name = doc.value("name", std::string());
  sys.provenance = doc.value("provenance", std::string());

  if (doc.contains("gases")) {
    if (!doc["gases"].is_array()) throw ValidationError("gases", "expected an array");
    for (const auto& g : doc["gases"]) {
      auto gas = g.is_string() ? parse_gas(g.get<std::string>()) : std::nullopt;
      if (!gas) throw ValidationError("gases", "unknown gas " + g.dump());
      sys.gases.insert(*gas);
    }
  }
  if (doc.contains("demand")) sys.demand = number(doc["demand"], "demand");
  sys.k1 = switch_value(doc, "k1");
  sys.k2 = switch_value(doc, "k2");

  if (!doc.contains("units") || !doc["units"].is_array() || doc["units"].empty())
    throw ValidationError("units", "expected a non-empty array");
  for (std::size_t i = 0; i < doc["units"].size(); ++i) {
    const auto& node = doc["units"][i];
    const std::string field = "units[" + std::to_string(i) + "]";
    if (!node.is_object()) throw ValidationError(field, "expected an object");
    GeneratorUnit unit;
    if (node.contains("id")) {
      if (!node["id"].is_number_integer()) throw ValidationError(field + ".id", "expected an integer");
      unit.id = node["id"].get<int>();
    } else {
      unit.id = static_cast<int>(i) + 1;
    }
    const std::string named = "units[id=" + std::to_string(unit.id) + "]";
    if (!node.contains("p_min") || !node.contains("p_max"))
      throw ValidationError(named, "p_min and p_max are required");
    unit.p_min = number(node["p_min"], named + ".p_min");
    unit.p_max = number(node["p_max"], named + ".p_max");
    if (unit.p_min > unit.p_max) throw ValidationError(named + ".p_max", "p_min exceeds p_max");
    if (!node.contains("cost")) throw ValidationError(named + ".cost", "missing");
    unit.cost = triple(node["cost"], named + ".cost");
    if (node.contains("emissions")) {
      if (!node["emissions"].is_object())
        throw ValidationError(named + ".emissions", "expected an object");
      for (const auto& [key, value] : node["emissions"].items()) {
        auto gas = parse_gas(key);
        if (!gas) throw ValidationError(named + ".emissions", "unknown gas " + key);
        unit.emissions[*gas] = triple(value, named + ".emissions." + key);
      }
    }
    sys.units.push_back(std::move(unit));
  }

  if (doc.contains("b_matrix") && !doc["b_matrix"].is_null()) {
    const auto& node = doc["b_matrix"];
    if (!node.is_array()) throw ValidationError("b_matrix", "expected an array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < node.size(); ++r) {
      if (!node[r].is_array()) throw ValidationError("b_matrix", "expected an array of rows");
      std::vector<double> row;
      for (std::size_t c = 0; c < node[r].size(); ++c)
        row.push_back(number(node[r][c], "b_matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
      rows.push_back(std::move(row));
    }
    if (rows.size() != sys.units.size())
      throw ValidationError("b_matrix", "dimension does not match the unit count");
    try {
      sys.losses.emplace(rows);
    } catch (const DimensionError& e) {
      throw ValidationError("b_matrix", e.what());
    }
    if (sys.losses->was_symmetrized())
      sys.warnings.push_back("b_matrix: small asymmetry averaged out");
  }
  return sys;
}

SystemData load_system(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open problem file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_system(buffer.str(), path.string());
}

DispatchProblem make_problem(const SystemData& system, double demand) {
  return make_problem(system, demand, system.k1, system.k2);
}

DispatchProblem make_problem(const SystemData& system, double demand, int k1, int k2) {
  return DispatchProblem(system.units, demand, system.losses, system.gases, k1, k2);
}

DispatchProblem load_problem(const std::filesystem::path& path, std::optional<double> demand) {
  const auto system = load_system(path);
  if (!demand) demand = system.demand;
  if (!demand) throw ValidationError("demand", "not given in the file or by the caller");
  return make_problem(system, *demand);
}

// ---------------------------------------------------------------------------
// Experiments

std::string_view to_string(Solver solver) { return solver == Solver::Pso ? "pso" : "ga"; }

TrialReport run_trials(const DispatchProblem& problem, const PenaltyFactors& h, Solver solver,
                       int trials, std::uint64_t base_seed, const SolverSettings& settings,
                       unsigned workers) {
  if (trials < 1) throw ValidationError("trials", "must be >= 1");
  if (solver == Solver::Pso) settings.pso.validate();
  else settings.ga.validate();

  TrialReport report;
  report.solver = solver;
  report.demand = problem.demand();
  report.h = h;
  report.trials.resize(static_cast<std::size_t>(trials));
  std::vector<std::exception_ptr> errors(report.trials.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < report.trials.size(); k = next++) {
      auto& trial = report.trials[k];
      trial.index = static_cast<int>(k);
      trial.seed = base_seed + k;
      try {
        const auto start = std::chrono::steady_clock::now();
        if (solver == Solver::Pso) {
          auto config = settings.pso;
          config.seed = trial.seed;
          auto r = pso::run(problem, config, h);
          trial.solution = std::move(r.solution);
          trial.trace = std::move(r.trace);
        } else {
          auto config = settings.ga;
          config.seed = trial.seed;
          auto r = ga::run(problem, config, h);
          trial.solution = std::move(r.solution);
          trial.trace = std::move(r.trace);
        }
        trial.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(trials));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const std::exception& e) {
      throw Error("trial " + std::to_string(k) + ": " + e.what());
    }
  }

  std::vector<double> tc;
  double seconds = 0.0;
  for (const auto& t : report.trials) {
    tc.push_back(t.solution.total_cost);
    seconds += t.seconds;
  }
  report.best_index = static_cast<std::size_t>(std::min_element(tc.begin(), tc.end()) - tc.begin());
  report.best_tc = tc[report.best_index];
  report.worst_tc = *std::max_element(tc.begin(), tc.end());
  report.mean_tc = std::accumulate(tc.begin(), tc.end(), 0.0) / static_cast<double>(tc.size());
  auto sorted = tc;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  report.median_tc = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  report.mean_seconds = seconds / static_cast<double>(report.trials.size());
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < report.trials.size(); ++k) {
    const double gap = std::abs(report.trials[k].seconds - report.mean_seconds);
    if (gap < nearest) {
      nearest = gap;
      report.representative_index = k;
    }
  }
  return report;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  const auto system = load_system(spec.problem_path);
  std::vector<double> demands = spec.demands;
  if (demands.empty()) {
    if (!system.demand) throw ValidationError("demand", "not given in the file or the experiment");
    demands.push_back(*system.demand);
  }

  ExperimentReport report;
  report.problem_name = system.name.empty() ? spec.problem_path.stem().string() : system.name;
  for (double demand : demands) {
    const auto problem =
        make_problem(system, demand, spec.k1.value_or(system.k1), spec.k2.value_or(system.k2));
    const PenaltyFactors h = problem.gases().empty() ? PenaltyFactors(demand, {})
                                                     : penalty_factors_all(problem);
    for (Solver solver : spec.solvers) {
      report.runs.push_back(
          run_trials(problem, h, solver, spec.trials, spec.base_seed, spec.settings, spec.workers));
    }
  }

  if (!spec.output_dir.empty()) {
    std::filesystem::create_directories(spec.output_dir / "traces");
    for (const auto& run : report.runs) {
      for (const auto& trial : run.trials) {
        char name[32];
        std::snprintf(name, sizeof name, "_trial%03d.csv", trial.index);
        export_trace(trial.trace, spec.output_dir / "traces" / (run_label(run) + name));
      }
    }
    write_file(spec.output_dir / "report.json", report_json(report));
    write_file(spec.output_dir / "timing.json", timing_json(report));
    write_file(spec.output_dir / "table.txt", format_table(report));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Output

void export_trace(const ConvergenceTrace& trace, const std::filesystem::path& path) {
  if (trace.empty()) throw ValidationError("trace", "cannot export an empty trace");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "iteration,objective\n";
  char row[64];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(row, sizeof row, "%zu,%.17g\n", i + 1, trace[i]);
    out << row;
  }
  if (!out) throw Error("failed writing " + path.string());
}

ConvergenceTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "iteration,objective")
    throw ParseError(path.string(), 1, "expected header 'iteration,objective'");
  ConvergenceTrace trace;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(path.string(), number, "expected two columns");
    try {
      trace.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ParseError(path.string(), number, "bad objective value");
    }
  }
  return trace;
}

std::string report_json(const ExperimentReport& report) {
  json doc;
  doc["problem"] = report.problem_name;
  doc["runs"] = json::array();
  for (const auto& run : report.runs) {
    json r;
    r["solver"] = std::string(to_string(run.solver));
    r["demand"] = run.demand;
    json h = json::object();
    for (const auto& [gas, v] : run.h.factors()) h[std::string(to_string(gas))] = v;
    r["penalty_factors"] = h;
    r["aggregate"] = {{"best_tc", run.best_tc},
                      {"median_tc", run.median_tc},
                      {"mean_tc", run.mean_tc},
                      {"worst_tc", run.worst_tc},
                      {"best_trial", run.best_index}};
    r["best"] = solution_json(run.best().solution);
    json trials = json::array();
    for (const auto& t : run.trials) {
      json tj = solution_json(t.solution);
      tj["trial"] = t.index;
      tj["seed"] = t.seed;
      trials.push_back(std::move(tj));
    }
    r["trials"] = std::move(trials);
    doc["runs"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

std::string timing_json(const ExperimentReport& report) {
  json doc = json::array();
  for (const auto& run : report.runs) {
    json seconds = json::array();
    for (const auto& t : run.trials) seconds.push_back(t.seconds);
    doc.push_back({{"solver", std::string(to_string(run.solver))},
                   {"demand", run.demand},
                   {"mean_seconds", run.mean_seconds},
                   {"representative_trial", run.representative_index},
                   {"representative", solution_json(run.representative().solution)},
                   {"seconds", seconds}});
  }
  return doc.dump(2) + "\n";
}

std::string format_table(const ExperimentReport& report) {
  std::ostringstream os;
  const int width = 14;
  auto row = [&](const std::string& label, auto&& cell) {
    os << std::left << std::setw(12) << label << std::right;
    for (const auto& run : report.runs) os << std::setw(width) << cell(run);
    os << '\n';
  };
  os << report.problem_name << '\n';
  row("", [](const TrialReport& r) { return std::string(to_string(r.solver)); });
  row("P_D", [](const TrialReport& r) { return fixed(r.demand, 0); });
  std::size_t units = 0;
  for (const auto& run : report.runs) units = std::max(units, run.representative().solution.powers.size());
  for (std::size_t i = 0; i < units; ++i) {
    row("P_" + std::to_string(i + 1), [i](const TrialReport& r) {
      const auto& p = r.representative().solution.powers;
      return i < p.size() ? fixed(p[i], 2) : std::string("-");
    });
  }
  for (Gas gas : kAllGases) {
    const bool present = std::any_of(report.runs.begin(), report.runs.end(), [gas](const TrialReport& r) {
      return r.representative().solution.emissions.count(gas) != 0;
    });
    if (!present) continue;
    row("E_" + std::string(to_string(gas)), [gas](const TrialReport& r) {
      const auto& e = r.representative().solution.emissions;
      return e.count(gas) ? fixed(e.at(gas), 2) : std::string("-");
    });
  }
  row("EC", [](const TrialReport& r) { return fixed(r.representative().solution.emission_cost, 2); });
  row("FC", [](const TrialReport& r) { return fixed(r.representative().solution.fuel_cost, 2); });
  row("TC", [](const TrialReport& r) { return fixed(r.representative().solution.total_cost, 2); });
  row("t", [](const TrialReport& r) { return fixed(r.representative().seconds, 4); });
  row("best TC", [](const TrialReport& r) { return fixed(r.best_tc, 2); });
  row("median TC", [](const TrialReport& r) { return fixed(r.median_tc, 2); });
  row("mean TC", [](const TrialReport& r) { return fixed(r.mean_tc, 2); });
  row("worst TC", [](const TrialReport& r) { return fixed(r.worst_tc, 2); });
  row("trials", [](const TrialReport& r) { return std::to_string(r.trials.size()); });
  for (Gas gas : kAllGases) {
    const bool present = std::any_of(report.runs.begin(), report.runs.end(),
                                     [gas](const TrialReport& r) { return r.h.contains(gas); });
    if (!present) continue;
    row("h_" + std::string(to_string(gas)), [gas](const TrialReport& r) {
      return r.h.contains(gas) ? fixed(r.h.at(gas), 4) : std::string("-");
    });
  }
  return os.str();
}

}  // namespace ceed

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ceed/error.hpp"
#include "ceed/ga.hpp"
#include "ceed/harness.hpp"
#include "ceed/oracle.hpp"
#include "ceed/penalty.hpp"
#include "ceed/pso.hpp"

namespace py = pybind11;
using namespace ceed;

namespace {

using Powers = std::vector<double>;

}  // namespace

PYBIND11_MODULE(_ceed, m) {
  m.doc() = "Combined economic emission dispatch";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", error.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", error.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", error.ptr());

  py::enum_<Gas>(m, "Gas")
      .value("NOx", Gas::NOx)
      .value("COx", Gas::COx)
      .value("SOx", Gas::SOx);

  py::class_<Quadratic>(m, "Quadratic")
      .def(py::init([](double a, double b, double c) { return Quadratic{a, b, c}; }),
           py::arg("constant"), py::arg("linear"), py::arg("quadratic"))
      .def_readwrite("constant", &Quadratic::constant)
      .def_readwrite("linear", &Quadratic::linear)
      .def_readwrite("quadratic", &Quadratic::quadratic)
      .def("__call__", &Quadratic::operator());

  py::class_<GeneratorUnit>(m, "GeneratorUnit")
      .def(py::init([](int id, double p_min, double p_max, Quadratic cost,
                       std::map<Gas, Quadratic> emissions) {
             return GeneratorUnit{id, p_min, p_max, cost, std::move(emissions)};
           }),
           py::arg("id"), py::arg("p_min"), py::arg("p_max"), py::arg("cost"),
           py::arg("emissions") = std::map<Gas, Quadratic>{})
      .def_readwrite("id", &GeneratorUnit::id)
      .def_readwrite("p_min", &GeneratorUnit::p_min)
      .def_readwrite("p_max", &GeneratorUnit::p_max)
      .def_readwrite("cost", &GeneratorUnit::cost)
      .def_readwrite("emissions", &GeneratorUnit::emissions);

  py::class_<LossMatrix>(m, "LossMatrix")
      .def(py::init<const std::vector<std::vector<double>>&>(), py::arg("rows"))
      .def_static("zero", &LossMatrix::zero)
      .def_property_readonly("size", &LossMatrix::size)
      .def("rows", &LossMatrix::rows);

  py::class_<DispatchProblem>(m, "DispatchProblem")
      .def(py::init([](std::vector<GeneratorUnit> units, double demand,
                       std::optional<std::vector<std::vector<double>>> losses, std::set<Gas> gases,
                       int k1, int k2) {
             std::optional<LossMatrix> b;
             if (losses) b.emplace(*losses);
             return DispatchProblem(std::move(units), demand, std::move(b), std::move(gases), k1, k2);
           }),
           py::arg("units"), py::arg("demand"), py::arg("losses") = py::none(),
           py::arg("gases") = std::set<Gas>{}, py::arg("k1") = 1, py::arg("k2") = 1)
      .def_property_readonly("units", &DispatchProblem::units)
      .def_property_readonly("demand", &DispatchProblem::demand)
      .def_property_readonly("gases", &DispatchProblem::gases)
      .def_property_readonly("k1", &DispatchProblem::k1)
      .def_property_readonly("k2", &DispatchProblem::k2)
      .def_property_readonly("lossless", &DispatchProblem::lossless)
      .def("__len__", &DispatchProblem::size)
      .def("with_demand", &DispatchProblem::with_demand)
      .def("with_weights", &DispatchProblem::with_weights);

  py::class_<PenaltyFactors>(m, "PenaltyFactors")
      .def(py::init<double, std::map<Gas, double>>(), py::arg("demand"), py::arg("factors"))
      .def_property_readonly("demand", &PenaltyFactors::demand)
      .def_property_readonly("factors", &PenaltyFactors::factors)
      .def("__getitem__", &PenaltyFactors::at)
      .def("__contains__", &PenaltyFactors::contains);

  py::class_<LimitViolation>(m, "LimitViolation")
      .def_readonly("unit_id", &LimitViolation::unit_id)
      .def_readonly("amount", &LimitViolation::amount);

  py::class_<DispatchSolution>(m, "DispatchSolution")
      .def_readonly("powers", &DispatchSolution::powers)
      .def_readonly("fuel_cost", &DispatchSolution::fuel_cost)
      .def_readonly("emissions", &DispatchSolution::emissions)
      .def_readonly("emission_cost", &DispatchSolution::emission_cost)
      .def_readonly("total_cost", &DispatchSolution::total_cost)
      .def_readonly("balance_residual", &DispatchSolution::balance_residual)
      .def_readonly("limit_violations", &DispatchSolution::limit_violations)
      .def("feasible", &DispatchSolution::feasible, py::arg("tol") = kBalanceTolerance);

  m.def("load_problem", &load_problem, py::arg("path"), py::arg("demand") = py::none());
  m.def("penalty_factor", &penalty_factor, py::arg("problem"), py::arg("gas"));
  m.def("penalty_factors", &penalty_factors_all, py::arg("problem"));
  m.def(
      "evaluate",
      [](const DispatchProblem& p, const Powers& x, const PenaltyFactors& h) { return evaluate(p, x, h); },
      py::arg("problem"), py::arg("powers"), py::arg("h"));
  m.def(
      "transmission_loss",
      [](const Powers& x, const LossMatrix& b) { return transmission_loss(x, b); },
      py::arg("powers"), py::arg("b"));

  auto pso_mod = m.def_submodule("pso");
  py::class_<pso::Config>(pso_mod, "Config")
      .def(py::init<>())
      .def_readwrite("particles", &pso::Config::particles)
      .def_readwrite("iterations", &pso::Config::iterations)
      .def_readwrite("w_max", &pso::Config::w_max)
      .def_readwrite("w_min", &pso::Config::w_min)
      .def_readwrite("c1", &pso::Config::c1)
      .def_readwrite("c2", &pso::Config::c2)
      .def_readwrite("phi", &pso::Config::phi)
      .def_readwrite("constriction", &pso::Config::constriction)
      .def_readwrite("v_max_fraction", &pso::Config::v_max_fraction)
      .def_readwrite("seed", &pso::Config::seed);
  py::class_<pso::Result>(pso_mod, "Result")
      .def_readonly("solution", &pso::Result::solution)
      .def_readonly("trace", &pso::Result::trace);
  pso_mod.def(
      "run",
      [](const DispatchProblem& p, const pso::Config& c, const PenaltyFactors& h) {
        py::gil_scoped_release release;
        return pso::run(p, c, h);
      },
      py::arg("problem"), py::arg("config"), py::arg("h"));

  auto ga_mod = m.def_submodule("ga");
  py::class_<ga::Config>(ga_mod, "Config")
      .def(py::init<>())
      .def_readwrite("individuals", &ga::Config::individuals)
      .def_readwrite("generations", &ga::Config::generations)
      .def_readwrite("p_crossover", &ga::Config::p_crossover)
      .def_readwrite("p_mutation", &ga::Config::p_mutation)
      .def_readwrite("bits_per_gene", &ga::Config::bits_per_gene)
      .def_readwrite("elitism", &ga::Config::elitism)
      .def_readwrite("single_site_mutation", &ga::Config::single_site_mutation)
      .def_readwrite("seed", &ga::Config::seed);
  py::class_<ga::Result>(ga_mod, "Result")
      .def_readonly("solution", &ga::Result::solution)
      .def_readonly("trace", &ga::Result::trace);
  ga_mod.def(
      "run",
      [](const DispatchProblem& p, const ga::Config& c, const PenaltyFactors& h) {
        py::gil_scoped_release release;
        return ga::run(p, c, h);
      },
      py::arg("problem"), py::arg("config"), py::arg("h"));

  auto oracle_mod = m.def_submodule("oracle");
  py::class_<oracle::LambdaResult>(oracle_mod, "LambdaResult")
      .def_readonly("lambda_", &oracle::LambdaResult::lambda)
      .def_readonly("powers", &oracle::LambdaResult::powers)
      .def_readonly("iterations", &oracle::LambdaResult::iterations)
      .def_readonly("residual", &oracle::LambdaResult::residual);
  oracle_mod.def(
      "lambda_solve",
      [](const DispatchProblem& p, const PenaltyFactors& h, double tol) {
        return oracle::lambda_solve(p, h, tol);
      },
      py::arg("problem"), py::arg("h"), py::arg("tol") = 1e-6);
  oracle_mod.def("grid_search", &oracle::grid_search, py::arg("problem"), py::arg("h"),
                 py::arg("resolution"));

  py::enum_<Solver>(m, "Solver").value("PSO", Solver::Pso).value("GA", Solver::Ga);
  py::class_<TrialReport>(m, "TrialReport")
      .def_readonly("demand", &TrialReport::demand)
      .def_readonly("best_tc", &TrialReport::best_tc)
      .def_readonly("median_tc", &TrialReport::median_tc)
      .def_readonly("mean_tc", &TrialReport::mean_tc)
      .def_readonly("worst_tc", &TrialReport::worst_tc)
      .def_property_readonly("best", [](const TrialReport& r) { return r.best().solution; });
  m.def(
      "run_trials",
      [](const DispatchProblem& p, const PenaltyFactors& h, Solver solver, int trials,
         std::uint64_t base_seed, std::optional<int> iterations, unsigned workers) {
        SolverSettings settings;
        if (iterations) {
          settings.pso.iterations = *iterations;
          settings.ga.generations = *iterations;
        }
        py::gil_scoped_release release;
        return run_trials(p, h, solver, trials, base_seed, settings, workers);
      },
      py::arg("problem"), py::arg("h"), py::arg("solver"), py::arg("trials") = 50,
      py::arg("base_seed") = 1, py::arg("iterations") = py::none(), py::arg("workers") = 0);
}

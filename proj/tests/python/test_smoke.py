from pathlib import Path

import pytest

import ceed_dispatch as cd

DATA = Path(__file__).resolve().parents[2] / "data" / "surrogate_6unit.json"


def two_unit(demand=300.0):
    units = [
        cd.GeneratorUnit(1, 0, 1000, cd.Quadratic(0, 0, 0.5)),
        cd.GeneratorUnit(2, 0, 1000, cd.Quadratic(0, 0, 1.0)),
    ]
    return cd.DispatchProblem(units, demand, k1=1, k2=0)


def test_lambda_on_two_units():
    result = cd.oracle.lambda_solve(two_unit(), cd.PenaltyFactors(300, {}))
    assert result.powers == pytest.approx([200, 100], abs=1e-6)
    assert result.lambda_ == pytest.approx(200, abs=1e-4)


def test_load_and_penalty_factors():
    problem = cd.load_problem(DATA, 1500)
    assert len(problem) == 6
    h = cd.penalty_factors(problem)
    for gas in (cd.Gas.NOx, cd.Gas.COx, cd.Gas.SOx):
        assert h[gas] > 0
        assert h[gas] == cd.penalty_factor(problem, gas)


def test_solvers_reach_lambda_optimum():
    problem = cd.load_problem(DATA, 1500)
    h = cd.penalty_factors(problem)
    exact = cd.evaluate(problem, cd.oracle.lambda_solve(problem, h).powers, h)

    pso_cfg = cd.pso.Config()
    pso_cfg.iterations = 200
    pso = cd.pso.run(problem, pso_cfg, h)
    ga_cfg = cd.ga.Config()
    ga_cfg.generations = 200
    ga = cd.ga.run(problem, ga_cfg, h)

    for result in (pso, ga):
        sol = result.solution
        assert sol.feasible()
        assert sol.fuel_cost + sol.emission_cost == pytest.approx(sol.total_cost)
        assert sol.total_cost <= exact.total_cost * 1.001
        assert len(result.trace) == 200
        assert all(b <= a for a, b in zip(result.trace, result.trace[1:]))


def test_runs_are_seeded():
    problem = cd.load_problem(DATA, 2000)
    h = cd.penalty_factors(problem)
    cfg = cd.ga.Config()
    cfg.generations = 30
    cfg.seed = 7
    assert cd.ga.run(problem, cfg, h).trace == cd.ga.run(problem, cfg, h).trace


def test_run_trials_aggregates():
    problem = cd.load_problem(DATA, 1500)
    h = cd.penalty_factors(problem)
    report = cd.run_trials(problem, h, cd.Solver.PSO, trials=4, iterations=50)
    assert report.best_tc <= report.median_tc <= report.worst_tc
    assert report.best.total_cost == report.best_tc


def test_grid_search_small_problem():
    problem = two_unit()
    h = cd.PenaltyFactors(300, {})
    grid = cd.oracle.grid_search(problem, h, 1.0)
    assert grid.powers == pytest.approx([200, 100])


def test_errors_map_to_exceptions():
    with pytest.raises(cd.InfeasibleError):
        cd.load_problem(DATA, 1e6)
    with pytest.raises(cd.ValidationError):
        cd.DispatchProblem([cd.GeneratorUnit(1, 10, 5, cd.Quadratic(0, 1, 0))], 7, k2=0)
    with pytest.raises(cd.UnsupportedError):
        units = [cd.GeneratorUnit(i, 0, 100, cd.Quadratic(0, 1, 0.1)) for i in range(1, 5)]
        cd.oracle.grid_search(cd.DispatchProblem(units, 200, k2=0), cd.PenaltyFactors(200, {}), 5)

"""Combined economic emission dispatch: PSO and GA solvers with a lambda-iteration reference."""

from ._ceed import (
    DimensionError,
    DispatchProblem,
    DispatchSolution,
    Error,
    Gas,
    GeneratorUnit,
    InfeasibleError,
    LossMatrix,
    PenaltyFactors,
    Quadratic,
    Solver,
    UnsupportedError,
    ValidationError,
    evaluate,
    ga,
    load_problem,
    oracle,
    penalty_factor,
    penalty_factors,
    pso,
    run_trials,
    transmission_loss,
)

__all__ = [
    "DimensionError",
    "DispatchProblem",
    "DispatchSolution",
    "Error",
    "Gas",
    "GeneratorUnit",
    "InfeasibleError",
    "LossMatrix",
    "PenaltyFactors",
    "Quadratic",
    "Solver",
    "UnsupportedError",
    "ValidationError",
    "evaluate",
    "ga",
    "load_problem",
    "oracle",
    "penalty_factor",
    "penalty_factors",
    "pso",
    "run_trials",
    "transmission_loss",
]

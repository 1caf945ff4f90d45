"""Equilibria and social cost of the V2V hazard-warning game."""

from ._core import (
    ConditioningError,
    Curve,
    Error,
    GameInstance,
    SolverError,
    StatisticalFailure,
    ValidationError,
    certify_equivalence,
    classify_family,
    compute_thresholds,
    monte_carlo_estimate,
    random_instance,
    search_paradox,
    solve,
    solve_exogenous,
    sweep_beta,
)

__all__ = [
    "ConditioningError",
    "Curve",
    "Error",
    "GameInstance",
    "SolverError",
    "StatisticalFailure",
    "ValidationError",
    "certify_equivalence",
    "classify_family",
    "compute_thresholds",
    "monte_carlo_estimate",
    "random_instance",
    "search_paradox",
    "solve",
    "solve_exogenous",
    "sweep_beta",
]

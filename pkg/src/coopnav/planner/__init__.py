from .core import (
    Algorithm,
    InvalidEndpoint,
    NoPath,
    PlanError,
    PlanRequest,
    PlanResult,
    combined_cost,
    f1,
    f2,
    has_negative_steps,
    heuristic,
    plan,
    step_cost,
)
from .oracle import exhaustive_optimal_path

__all__ = [
    "Algorithm",
    "InvalidEndpoint",
    "NoPath",
    "PlanError",
    "PlanRequest",
    "PlanResult",
    "combined_cost",
    "exhaustive_optimal_path",
    "f1",
    "f2",
    "has_negative_steps",
    "heuristic",
    "plan",
    "step_cost",
]

"""Cooperative grid mapping and radio-aware path planning."""

__version__ = "0.1.0"

from .grid import (  # noqa: E402
    FREE,
    OBSTACLE,
    UNDECIDED,
    BinaryGrid,
    GridError,
    GridGeometry,
    TernaryGrid,
    cell_to_coords,
)
from .mapping import MappingParams, SensorConfig, run_mapping  # noqa: E402
from .planner import Algorithm, NoPath, PlanRequest, PlanResult, plan  # noqa: E402
from .radio import AccessPoint, WeightKind, build_radio_map  # noqa: E402
from .scenario import Scenario, load_fixture, load_scenario, parse_scenario  # noqa: E402

__all__ = [
    "FREE",
    "OBSTACLE",
    "UNDECIDED",
    "AccessPoint",
    "Algorithm",
    "BinaryGrid",
    "GridError",
    "GridGeometry",
    "MappingParams",
    "NoPath",
    "PlanRequest",
    "PlanResult",
    "Scenario",
    "SensorConfig",
    "TernaryGrid",
    "WeightKind",
    "__version__",
    "build_radio_map",
    "cell_to_coords",
    "load_fixture",
    "load_scenario",
    "parse_scenario",
    "plan",
    "run_mapping",
]

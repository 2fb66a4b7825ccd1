"""Line-oriented scenario files.

Each non-blank line is ``section.key = value``; ``#`` starts a comment.
Indexed entries (``obstacle.1``, ``av.1``, ``ap.1``) may repeat with distinct
indices and are ordered by index. Everything omitted takes the default below.

    grid.n = 400                  grid.delta = 0.1
    obstacle.i = r1:r2,c1:c2      (inclusive 1-based cell ranges)
    av.i = n1,n2                  (vehicle start cells; default: evenly spaced on the perimeter)
    mapping.n_av = 4              mapping.sync_period = 3
    mapping.time_step = 0.25      mapping.epsilon = 1e-4
    mapping.offset_range = 5      mapping.speed = 2
    mapping.seed = 0              mapping.max_time = 3600
    mapping.fill_enclosed = true
    sensor.rho_max = 12           sensor.ray_count = 720
    sensor.range_step = 0.5
    radio.radius = 100            (default AP radius in pixels)
    ap.i = n1,n2[,radius]
    radio.weight = amplitude      radio.gamma = 1      radio.beta = 0.2
    post.kernel_size = 13         post.kernel_radius = 3
    post.downsample = 1           post.tau = 0.1
    plan.alpha = 0.5              plan.algorithm = wd
    plan.start = n1,n2            plan.stop = n1,n2
    bench.trials = 500            bench.seed = 0
    bench.alphas = 0,0.01,0.05,0.1,0.2,0.5,1
    bench.algorithms = od,wd,oa,wa
    bench.weights = onoff,amplitude,capacity,tent
    bench.baseline = oa
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .grid import BinaryGrid, Cell, GridError, GridGeometry
from .mapping import MappingError, MappingParams, SensorConfig, default_starts
from .planner import Algorithm
from .radio import WEIGHT_NAMES, AccessPoint, WeightKind


class ScenarioError(ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Rect:
    r1: int
    r2: int
    c1: int
    c2: int

    def __str__(self):
        return f"{self.r1}:{self.r2},{self.c1}:{self.c2}"


@dataclass(frozen=True)
class PostParams:
    kernel_size: int = 13
    kernel_radius: float = 3.0
    downsample: int = 1
    tau: float = 0.1


@dataclass(frozen=True)
class PlannerParams:
    alpha: float = 0.5
    algorithm: str = "wd"
    start: Cell | None = None
    stop: Cell | None = None


@dataclass(frozen=True)
class BenchParams:
    trials: int = 500
    seed: int = 0
    alphas: tuple = (0.0, 0.01, 0.05, 0.1, 0.2, 0.5, 1.0)
    algorithms: tuple = ("od", "wd", "oa", "wa")
    weights: tuple = WEIGHT_NAMES
    baseline: str = "oa"


@dataclass(frozen=True)
class Scenario:
    geometry: GridGeometry = GridGeometry(400, 0.1)
    obstacles: tuple = ()
    av_starts: tuple = ()
    mapping: MappingParams = MappingParams()
    sensor: SensorConfig = SensorConfig()
    access_points: tuple = ()
    weight: WeightKind = WeightKind("amplitude")
    post: PostParams = PostParams()
    planner: PlannerParams = PlannerParams()
    bench: BenchParams = BenchParams()

    def truth(self) -> BinaryGrid:
        values = np.zeros(self.geometry.shape, dtype=np.uint8)
        for r in self.obstacles:
            values[r.r1 - 1 : r.r2, r.c1 - 1 : r.c2] = 1
        return BinaryGrid(self.geometry, values)

    def starts(self, count: int | None = None) -> list:
        """Start cells for ``count`` vehicles (default ``mapping.n_av``).

        Explicit ``av.*`` entries win; otherwise the cells are spread evenly
        along the boundary for exactly ``count`` vehicles.
        """
        count = self.mapping.n_av if count is None else count
        if self.av_starts:
            if count > len(self.av_starts):
                raise ScenarioError(f"{count} vehicles but only {len(self.av_starts)} av.* starts", None, "av")
            return list(self.av_starts[:count])
        return default_starts(self.geometry.n, count)

    def weight_kind(self, name: str | None = None) -> WeightKind:
        if name is None:
            return self.weight
        return WeightKind(name, gamma=self.weight.gamma, beta=self.weight.beta)


# --- parsing ---------------------------------------------------------------

_LINE = re.compile(r"^([a-z_]+)\.([a-z0-9_]+)\s*=\s*(.*?)\s*$")

_SCALARS = {
    "grid": {"n": int, "delta": float},
    "mapping": {
        "n_av": int,
        "sync_period": float,
        "time_step": float,
        "epsilon": float,
        "offset_range": int,
        "speed": float,
        "seed": int,
        "max_time": float,
        "fill_enclosed": "bool",
    },
    "sensor": {"rho_max": float, "ray_count": int, "range_step": float},
    "radio": {"radius": float, "weight": str, "gamma": float, "beta": float},
    "post": {"kernel_size": int, "kernel_radius": float, "downsample": int, "tau": float},
    "plan": {"alpha": float, "algorithm": str, "start": "cell", "stop": "cell"},
    "bench": {
        "trials": int,
        "seed": int,
        "alphas": "floats",
        "algorithms": "names",
        "weights": "names",
        "baseline": str,
    },
}
_INDEXED = ("obstacle", "av", "ap")


def _convert(kind, text: str):
    if kind == "bool":
        low = text.lower()
        if low in ("true", "1", "yes"):
            return True
        if low in ("false", "0", "no"):
            return False
        raise ValueError(f"expected a boolean, got {text!r}")
    if kind == "cell":
        return _parse_cell(text)
    if kind == "floats":
        return tuple(float(x) for x in text.split(","))
    if kind == "names":
        return tuple(x.strip().lower() for x in text.split(",") if x.strip())
    if kind is int:
        v = float(text)
        if v != int(v):
            raise ValueError(f"expected an integer, got {text!r}")
        return int(v)
    return kind(text)


def _parse_cell(text: str) -> Cell:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected n1,n2, got {text!r}")
    return (int(parts[0]), int(parts[1]))


def _parse_rect(text: str) -> Rect:
    m = re.fullmatch(r"\s*(\d+)\s*:\s*(\d+)\s*,\s*(\d+)\s*:\s*(\d+)\s*", text)
    if not m:
        raise ValueError(f"expected r1:r2,c1:c2, got {text!r}")
    return Rect(*(int(g) for g in m.groups()))


def parse_scenario(text: str) -> Scenario:
    scalars: dict = {}
    indexed: dict = {k: {} for k in _INDEXED}
    lines: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ScenarioError(f"expected 'section.key = value', got {raw.strip()!r}", line=lineno)
        section, key, value = m.groups()
        name = f"{section}.{key}"
        if section in _INDEXED:
            if not key.isdigit():
                raise ScenarioError(f"{section} entries need a numeric index, got {name!r}", lineno, name)
            idx = int(key)
            if idx in indexed[section]:
                raise ScenarioError(f"duplicate key {name!r}", lineno, name)
            try:
                if section == "obstacle":
                    parsed = _parse_rect(value)
                elif section == "av":
                    parsed = _parse_cell(value)
                else:
                    parts = [p.strip() for p in value.split(",")]
                    if len(parts) not in (2, 3):
                        raise ValueError(f"expected n1,n2[,radius], got {value!r}")
                    parsed = (int(parts[0]), int(parts[1]), float(parts[2]) if len(parts) == 3 else None)
            except ValueError as exc:
                raise ScenarioError(str(exc), lineno, name) from None
            indexed[section][idx] = parsed
            lines[name] = lineno
            continue
        kinds = _SCALARS.get(section)
        if kinds is None or key not in kinds:
            raise ScenarioError(f"unknown key {name!r}", lineno, name)
        if name in scalars:
            raise ScenarioError(f"duplicate key {name!r}", lineno, name)
        try:
            scalars[name] = _convert(kinds[key], value)
        except ValueError as exc:
            raise ScenarioError(f"{name}: {exc}", lineno, name) from None
        lines[name] = lineno
    return _build(scalars, indexed, lines)


def _section(scalars: dict, section: str) -> dict:
    prefix = section + "."
    return {k[len(prefix):]: v for k, v in scalars.items() if k.startswith(prefix)}


def _build(scalars: dict, indexed: dict, lines: dict) -> Scenario:
    def fail(msg, name):
        raise ScenarioError(msg, lines.get(name), name)

    grid = _section(scalars, "grid")
    try:
        geom = GridGeometry(grid.get("n", 400), grid.get("delta", 0.1))
    except GridError as exc:
        fail(str(exc), "grid.n")
    n = geom.n

    rects = []
    for i in sorted(indexed["obstacle"]):
        r = indexed["obstacle"][i]
        name = f"obstacle.{i}"
        if not (1 <= r.r1 <= r.r2 <= n and 1 <= r.c1 <= r.c2 <= n):
            fail(f"rectangle {name} = {r} exceeds the {n}x{n} grid or is empty", name)
        rects.append(r)

    starts = []
    for i in sorted(indexed["av"]):
        c = indexed["av"][i]
        if not geom.contains(c):
            fail(f"start av.{i} = {c} outside the grid", f"av.{i}")
        starts.append(c)

    try:
        mapping = MappingParams(**_section(scalars, "mapping"))
        sensor = SensorConfig(**_section(scalars, "sensor"))
    except (MappingError, TypeError) as exc:
        fail(str(exc), next((k for k in lines if k.startswith(("mapping.", "sensor."))), None))
    if starts and len(starts) < mapping.n_av:
        fail(f"mapping.n_av = {mapping.n_av} but only {len(starts)} av.* starts given", "mapping.n_av")

    radio = _section(scalars, "radio")
    default_radius = radio.pop("radius", 100.0)
    try:
        weight = WeightKind(radio.get("weight", "amplitude"), gamma=radio.get("gamma", 1.0), beta=radio.get("beta", 0.2))
    except ValueError as exc:
        fail(str(exc), "radio.weight")
    aps = []
    for i in sorted(indexed["ap"]):
        r, c, rad = indexed["ap"][i]
        name = f"ap.{i}"
        if not geom.contains((r, c)):
            fail(f"access point {name} = {(r, c)} outside the grid", name)
        try:
            aps.append(AccessPoint((r, c), default_radius if rad is None else rad))
        except ValueError as exc:
            fail(str(exc), name)

    post = PostParams(**_section(scalars, "post"))
    if post.kernel_size < 1 or post.kernel_size % 2 == 0:
        fail("post.kernel_size must be a positive odd integer", "post.kernel_size")
    if post.downsample < 1:
        fail("post.downsample must be >= 1", "post.downsample")
    if not 0 < post.tau < 1:
        fail("post.tau must lie in (0, 1)", "post.tau")

    planner = PlannerParams(**_section(scalars, "plan"))
    if planner.alpha < 0:
        fail("plan.alpha must be non-negative", "plan.alpha")
    try:
        Algorithm(planner.algorithm)
    except ValueError:
        fail(f"unknown algorithm {planner.algorithm!r}", "plan.algorithm")
    for key in ("start", "stop"):
        cell = getattr(planner, key)
        if cell is not None and not geom.contains(cell):
            fail(f"plan.{key} = {cell} outside the grid", f"plan.{key}")

    bench = BenchParams(**_section(scalars, "bench"))
    if bench.trials < 1:
        fail("bench.trials must be >= 1", "bench.trials")
    for a in bench.algorithms:
        if a not in {x.value for x in Algorithm}:
            fail(f"unknown algorithm {a!r}", "bench.algorithms")
    for w in bench.weights:
        if w not in WEIGHT_NAMES:
            fail(f"unknown weight kind {w!r}", "bench.weights")
    if bench.baseline not in bench.algorithms:
        fail(f"baseline {bench.baseline!r} is not among bench.algorithms", "bench.baseline")
    if any(a < 0 for a in bench.alphas):
        fail("bench.alphas must be non-negative", "bench.alphas")

    return Scenario(
        geometry=geom,
        obstacles=tuple(rects),
        av_starts=tuple(starts),
        mapping=mapping,
        sensor=sensor,
        access_points=tuple(aps),
        weight=weight,
        post=post,
        planner=planner,
        bench=bench,
    )


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, tuple) and len(v) == 2 and all(isinstance(x, int) for x in v):
        return f"{v[0]},{v[1]}"
    if isinstance(v, tuple):
        return ",".join(_fmt(x) for x in v)
    return str(v)


def serialize_scenario(s: Scenario) -> str:
    out = [f"grid.n = {s.geometry.n}", f"grid.delta = {s.geometry.delta!r}"]
    out += [f"obstacle.{i} = {r}" for i, r in enumerate(s.obstacles, start=1)]
    out += [f"av.{i} = {c[0]},{c[1]}" for i, c in enumerate(s.av_starts, start=1)]
    for f in dataclasses.fields(s.mapping):
        out.append(f"mapping.{f.name} = {_fmt(getattr(s.mapping, f.name))}")
    for f in dataclasses.fields(s.sensor):
        out.append(f"sensor.{f.name} = {_fmt(getattr(s.sensor, f.name))}")
    out.append(f"radio.weight = {s.weight.name}")
    out.append(f"radio.gamma = {s.weight.gamma!r}")
    out.append(f"radio.beta = {s.weight.beta!r}")
    out += [f"ap.{i} = {a.center[0]},{a.center[1]},{a.coverage_radius!r}" for i, a in enumerate(s.access_points, start=1)]
    for f in dataclasses.fields(s.post):
        out.append(f"post.{f.name} = {_fmt(getattr(s.post, f.name))}")
    for f in dataclasses.fields(s.planner):
        v = getattr(s.planner, f.name)
        if v is not None:
            out.append(f"plan.{f.name} = {_fmt(v)}")
    for f in dataclasses.fields(s.bench):
        out.append(f"bench.{f.name} = {_fmt(getattr(s.bench, f.name))}")
    return "\n".join(out) + "\n"


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        return parse_scenario(fh.read())


FIXTURES = ("sec71_mapping", "sec72_planning", "small80")


def fixture_path(name: str):
    return resources.files("coopnav") / "fixtures" / f"{name}.scn"


def load_fixture(name: str) -> Scenario:
    return parse_scenario(fixture_path(name).read_text())

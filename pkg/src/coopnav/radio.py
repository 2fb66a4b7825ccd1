"""Radio coverage weight maps built from access-point layouts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Cell, GridError, GridGeometry


@dataclass(frozen=True)
class AccessPoint:
    center: Cell
    coverage_radius: float

    def __post_init__(self):
        if not self.coverage_radius > 0:
            raise ValueError(f"coverage radius must be positive, got {self.coverage_radius}")
        object.__setattr__(self, "center", (int(self.center[0]), int(self.center[1])))


@dataclass(frozen=True)
class WeightKind:
    """One of the four weighting laws: ``onoff``, ``amplitude``, ``capacity``, ``tent``.

    ``gamma`` is the amplitude decay exponent, ``beta`` the tent exponent.
    """

    name: str
    gamma: float = 1.0
    beta: float = 0.2

    def __post_init__(self):
        if self.name not in WEIGHT_NAMES:
            raise ValueError(f"unknown weight kind {self.name!r}; expected one of {WEIGHT_NAMES}")
        if self.name == "amplitude" and not self.gamma > 0:
            raise ValueError("amplitude exponent must be positive")
        if self.name == "tent" and not 0 < self.beta < 1:
            raise ValueError("tent exponent must lie in (0, 1)")

    @classmethod
    def onoff(cls):
        return cls("onoff")

    @classmethod
    def amplitude(cls, gamma=1.0):
        return cls("amplitude", gamma=gamma)

    @classmethod
    def capacity(cls):
        return cls("capacity")

    @classmethod
    def tent(cls, beta=0.2):
        return cls("tent", beta=beta)


WEIGHT_NAMES = ("onoff", "amplitude", "capacity", "tent")


def _profile(kind: WeightKind, d: np.ndarray, dmax: float) -> np.ndarray:
    """Per-AP weight as a function of pixel distance (disc gate applied)."""
    d = np.asarray(d, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind.name == "onoff":
            w = np.ones_like(d)
        elif kind.name == "amplitude":
            # saturates at 1 for d <= 1 (the raw law exceeds 1 there)
            w = np.where(d <= 1.0, 1.0, 1.0 / d**kind.gamma)
        elif kind.name == "capacity":
            if dmax <= 1.0:
                w = np.where(d < 1.0, 1.0, 0.0)
            else:
                w = np.where(d < 1.0, 1.0, 1.0 - np.log2(d) / math.log2(dmax))
        else:
            w = np.clip(1.0 - d / dmax, 0.0, 1.0) ** kind.beta
    w = np.clip(w, 0.0, 1.0)
    return np.where(d <= dmax, w, 0.0)


def ap_weight(kind: WeightKind, ap: AccessPoint, cell: Cell) -> float:
    d = math.hypot(ap.center[0] - cell[0], ap.center[1] - cell[1])
    return float(_profile(kind, np.array(d), ap.coverage_radius))


@dataclass(frozen=True, eq=False)
class RadioWeightMap:
    geometry: GridGeometry
    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True)
        if arr.shape != self.geometry.shape:
            raise GridError(f"values shape {arr.shape} does not match {self.geometry.shape}")
        if arr.size and (arr.min() < 0 or arr.max() > 1):
            raise ValueError("radio weights must lie in [0, 1]")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @classmethod
    def zeros(cls, geom: GridGeometry) -> RadioWeightMap:
        return cls(geom, np.zeros(geom.shape))

    @classmethod
    def uniform(cls, geom: GridGeometry, r: float) -> RadioWeightMap:
        return cls(geom, np.full(geom.shape, float(r)))

    def __getitem__(self, cell: Cell) -> float:
        self.geometry.check(cell)
        return float(self.values[cell[0] - 1, cell[1] - 1])


def single_ap_map(ap: AccessPoint, kind: WeightKind, geom: GridGeometry) -> np.ndarray:
    rows, cols = np.indices(geom.shape) + 1
    d = np.hypot(rows - ap.center[0], cols - ap.center[1])
    return _profile(kind, d, ap.coverage_radius)


def build_radio_map(aps, kind: WeightKind, geom: GridGeometry) -> RadioWeightMap:
    """Best-AP weight at every cell; all zeros when there are no APs."""
    out = np.zeros(geom.shape)
    for ap in aps:
        if not geom.contains(ap.center):
            raise GridError(f"access point {ap.center} outside the grid")
        np.maximum(out, single_ap_map(ap, kind, geom), out=out)
    return RadioWeightMap(geom, out)

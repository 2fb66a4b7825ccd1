"""Grid containers and coordinate conventions.

Cells are addressed with 1-based ``(n1, n2)`` tuples (row, column). Arrays
underneath are ordinary 0-based numpy arrays, so ``values[n1 - 1, n2 - 1]``
holds the value of cell ``(n1, n2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Cell = tuple[int, int]

FREE = 0.0
UNDECIDED = 0.5
OBSTACLE = 1.0


class GridError(ValueError):
    """Raised on out-of-range cells or mismatched grid geometries."""


@dataclass(frozen=True)
class GridGeometry:
    n: int
    delta: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise GridError(f"grid size must be an integer >= 2, got {self.n}")
        if not self.delta > 0:
            raise GridError(f"spatial precision must be positive, got {self.delta}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.n)

    def contains(self, cell: Cell) -> bool:
        return 1 <= cell[0] <= self.n and 1 <= cell[1] <= self.n

    def check(self, cell: Cell) -> Cell:
        if not self.contains(cell):
            raise GridError(f"cell {tuple(cell)} outside a {self.n}x{self.n} grid")
        return (int(cell[0]), int(cell[1]))


def cell_to_coords(cell: Cell, geom: GridGeometry) -> tuple[float, float]:
    """Metric (x, y) of a cell; x follows the column index, y the row index."""
    n1, n2 = geom.check(cell)
    return (geom.delta * (n2 - 1), geom.delta * (n1 - 1))


def to_index(cell: Cell) -> tuple[int, int]:
    return (cell[0] - 1, cell[1] - 1)


def to_cell(index) -> Cell:
    return (int(index[0]) + 1, int(index[1]) + 1)


def _frozen(values: np.ndarray, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class BinaryGrid:
    """Ground-truth obstacle map or post-processed planning map (0 free, 1 obstacle)."""

    geometry: GridGeometry
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values)
        if arr.shape != self.geometry.shape:
            raise GridError(f"values shape {arr.shape} does not match {self.geometry.shape}")
        if not np.isin(arr, (0, 1)).all():
            raise GridError("binary grid values must be 0 or 1")
        object.__setattr__(self, "values", _frozen(arr, np.uint8))

    @classmethod
    def empty(cls, geom: GridGeometry) -> BinaryGrid:
        return cls(geom, np.zeros(geom.shape, dtype=np.uint8))

    def __getitem__(self, cell: Cell) -> int:
        self.geometry.check(cell)
        return int(self.values[cell[0] - 1, cell[1] - 1])

    def __eq__(self, other):
        if not isinstance(other, BinaryGrid):
            return NotImplemented
        return self.geometry == other.geometry and np.array_equal(self.values, other.values)

    def is_free(self, cell: Cell) -> bool:
        return self.geometry.contains(cell) and self[cell] == 0

    def free_cells(self) -> list[Cell]:
        return [to_cell(ix) for ix in np.argwhere(self.values == 0)]


@dataclass(frozen=True, eq=False)
class TernaryGrid:
    """Estimated obstacle map over {0, 1/2, 1}; 1/2 marks an undecided cell."""

    geometry: GridGeometry
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.shape != self.geometry.shape:
            raise GridError(f"values shape {arr.shape} does not match {self.geometry.shape}")
        if not np.isin(arr, (FREE, UNDECIDED, OBSTACLE)).all():
            raise GridError("ternary grid values must be 0, 0.5 or 1")
        object.__setattr__(self, "values", _frozen(arr, np.float64))

    @classmethod
    def undecided(cls, geom: GridGeometry) -> TernaryGrid:
        return cls(geom, np.full(geom.shape, UNDECIDED))

    @classmethod
    def from_binary(cls, grid: BinaryGrid) -> TernaryGrid:
        return cls(grid.geometry, grid.values.astype(np.float64))

    def __getitem__(self, cell: Cell) -> float:
        self.geometry.check(cell)
        return float(self.values[cell[0] - 1, cell[1] - 1])

    def __eq__(self, other):
        if not isinstance(other, TernaryGrid):
            return NotImplemented
        return self.geometry == other.geometry and np.array_equal(self.values, other.values)

    def to_codes(self) -> np.ndarray:
        """Compact uint8 form (0 free, 1 undecided, 2 obstacle)."""
        return (self.values * 2).astype(np.uint8)

    @classmethod
    def from_codes(cls, geom: GridGeometry, codes: np.ndarray) -> TernaryGrid:
        return cls(geom, np.asarray(codes, dtype=np.float64) / 2)


def same_geometry(a, b) -> GridGeometry:
    if a.geometry != b.geometry:
        raise GridError(f"geometry mismatch: {a.geometry} vs {b.geometry}")
    return a.geometry

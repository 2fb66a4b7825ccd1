"""Binary PGM grids and CSV path/weight files."""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .grid import BinaryGrid, GridGeometry, TernaryGrid
from .raster import DiscretePath

PGM_FREE = 255
PGM_UNDECIDED = 128
PGM_OBSTACLE = 0


class FormatError(ValueError):
    pass


def encode_pgm(values: np.ndarray) -> bytes:
    arr = np.ascontiguousarray(values, dtype=np.uint8)
    rows, cols = arr.shape
    return f"P5\n{cols} {rows}\n255\n".encode("ascii") + arr.tobytes()


def decode_pgm(data: bytes) -> np.ndarray:
    """Parse a P5 image with maxval 255; ``#`` comments in the header are allowed."""
    fields: list[bytes] = []
    pos = 0
    while len(fields) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise FormatError("truncated PGM header")
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    if fields[0] != b"P5":
        raise FormatError(f"not a binary PGM (magic {fields[0]!r})")
    try:
        cols, rows, maxval = (int(f) for f in fields[1:])
    except ValueError as exc:
        raise FormatError(f"bad PGM header: {exc}") from None
    if maxval != 255:
        raise FormatError(f"only maxval 255 is supported, got {maxval}")
    pos += 1  # single whitespace byte after maxval
    body = data[pos : pos + rows * cols]
    if len(body) != rows * cols:
        raise FormatError("truncated PGM raster")
    return np.frombuffer(body, dtype=np.uint8).reshape(rows, cols).copy()


def grid_to_pgm(grid) -> bytes:
    v = grid.values
    out = np.full(v.shape, PGM_UNDECIDED, dtype=np.uint8)
    out[v == 0] = PGM_FREE
    out[v == 1] = PGM_OBSTACLE
    return encode_pgm(out)


def write_grid_pgm(path, grid) -> None:
    Path(path).write_bytes(grid_to_pgm(grid))


def read_pgm_grid(path, delta: float = 1.0):
    """Load a PGM map. Returns a BinaryGrid unless undecided (128) pixels are present."""
    raw = decode_pgm(Path(path).read_bytes())
    if raw.shape[0] != raw.shape[1]:
        raise FormatError(f"map must be square, got {raw.shape}")
    known = np.isin(raw, (PGM_FREE, PGM_UNDECIDED, PGM_OBSTACLE))
    if not known.all():
        raise FormatError("map pixels must be 0, 128 or 255")
    geom = GridGeometry(raw.shape[0], delta)
    values = np.where(raw == PGM_FREE, 0.0, np.where(raw == PGM_OBSTACLE, 1.0, 0.5))
    if (raw == PGM_UNDECIDED).any():
        return TernaryGrid(geom, values)
    return BinaryGrid(geom, values.astype(np.uint8))


def weights_to_pgm(values: np.ndarray) -> bytes:
    return encode_pgm(np.rint(np.clip(values, 0.0, 1.0) * 255).astype(np.uint8))


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def path_to_csv(path: DiscretePath) -> str:
    return _csv_text(["m", "n1", "n2"], [(m, a, b) for m, (a, b) in enumerate(path.points, start=1)])


def write_path_csv(dest, path: DiscretePath) -> None:
    Path(dest).write_text(path_to_csv(path), newline="")


def read_path_csv(src) -> DiscretePath:
    with open(src, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["m", "n1", "n2"]:
            raise FormatError(f"expected header m,n1,n2, got {reader.fieldnames}")
        rows = sorted(reader, key=lambda r: int(r["m"]))
    return DiscretePath(tuple((int(r["n1"]), int(r["n2"])) for r in rows))


def weights_to_csv(values: np.ndarray) -> str:
    rows = ((i + 1, j + 1, repr(float(values[i, j]))) for i in range(values.shape[0]) for j in range(values.shape[1]))
    return _csv_text(["n1", "n2", "weight"], rows)


def read_weights_csv(src, n: int) -> np.ndarray:
    out = np.zeros((n, n))
    with open(src, newline="") as fh:
        for r in csv.DictReader(fh):
            out[int(r["n1"]) - 1, int(r["n2"]) - 1] = float(r["weight"])
    return out


def write_rows_csv(dest, header, rows) -> None:
    Path(dest).write_text(_csv_text(header, rows), newline="")

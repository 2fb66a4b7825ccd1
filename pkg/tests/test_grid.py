import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from coopnav.grid import (
    BinaryGrid,
    GridError,
    GridGeometry,
    TernaryGrid,
    cell_to_coords,
    same_geometry,
)
from coopnav.io import (
    FormatError,
    decode_pgm,
    encode_pgm,
    grid_to_pgm,
    read_path_csv,
    read_pgm_grid,
    read_weights_csv,
    weights_to_csv,
    write_grid_pgm,
    write_path_csv,
)
from coopnav.raster import bresenham_segment

G01 = GridGeometry(400, 0.1)


@pytest.mark.parametrize(
    "cell, expected",
    [((1, 1), (0.0, 0.0)), ((1, 5), (0.4, 0.0)), ((400, 400), (39.9, 39.9))],
)
def test_cell_to_coords(cell, expected):
    assert cell_to_coords(cell, G01) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("cell", [(0, 1), (1, 0), (401, 1), (1, 401)])
def test_cell_to_coords_out_of_range(cell):
    with pytest.raises(GridError):
        cell_to_coords(cell, G01)


@pytest.mark.parametrize("n, delta", [(1, 0.1), (4, 0.0), (4, -1.0)])
def test_geometry_invariants(n, delta):
    with pytest.raises(GridError):
        GridGeometry(n, delta)


def test_binary_grid_rejects_other_values():
    with pytest.raises(GridError):
        BinaryGrid(GridGeometry(2, 1.0), np.array([[0, 2], [0, 0]]))


def test_ternary_grid_rejects_other_values():
    with pytest.raises(GridError):
        TernaryGrid(GridGeometry(2, 1.0), np.array([[0, 0.25], [0, 1]]))


def test_grids_are_immutable():
    g = BinaryGrid.empty(GridGeometry(3, 1.0))
    with pytest.raises(ValueError):
        g.values[0, 0] = 1


def test_indexing_is_one_based():
    v = np.zeros((3, 3), dtype=np.uint8)
    v[0, 2] = 1
    g = BinaryGrid(GridGeometry(3, 1.0), v)
    assert g[(1, 3)] == 1 and g[(3, 1)] == 0
    assert (1, 3) not in g.free_cells()


def test_same_geometry_mismatch():
    with pytest.raises(GridError):
        same_geometry(BinaryGrid.empty(GridGeometry(3, 1.0)), BinaryGrid.empty(GridGeometry(4, 1.0)))


@st.composite
def ternary_grids(draw):
    n = draw(st.integers(2, 9))
    vals = draw(hnp.arrays(np.float64, (n, n), elements=st.sampled_from([0.0, 0.5, 1.0])))
    return TernaryGrid(GridGeometry(n, 0.5), vals)


@given(ternary_grids())
def test_codes_round_trip(g):
    assert TernaryGrid.from_codes(g.geometry, g.to_codes()) == g


@given(g=ternary_grids())
def test_pgm_round_trip(g, tmp_path_factory):
    path = tmp_path_factory.mktemp("pgm") / "g.pgm"
    write_grid_pgm(path, g)
    back = read_pgm_grid(path, delta=0.5)
    assert np.array_equal(back.values, g.values)
    if not (g.values == 0.5).any():
        assert isinstance(back, BinaryGrid)


def test_pgm_layout_is_bit_exact():
    v = np.array([[0.0, 0.5], [1.0, 0.0]])
    data = grid_to_pgm(TernaryGrid(GridGeometry(2, 1.0), v))
    assert data == b"P5\n2 2\n255\n" + bytes([255, 128, 0, 255])


def test_pgm_header_comments_are_skipped():
    raw = b"P5\n# made by hand\n2 1\n# another\n255\n" + bytes([0, 255])
    assert decode_pgm(raw).tolist() == [[0, 255]]


@pytest.mark.parametrize(
    "raw",
    [b"P2\n1 1\n255\n0", b"P5\n2 2\n65535\n" + bytes(8), b"P5\n2 2\n255\n\x00"],
)
def test_pgm_rejects_bad_input(raw):
    with pytest.raises(FormatError):
        decode_pgm(raw)


def test_pgm_rejects_unknown_grey(tmp_path):
    p = tmp_path / "x.pgm"
    p.write_bytes(encode_pgm(np.array([[0, 7], [255, 255]], dtype=np.uint8)))
    with pytest.raises(FormatError):
        read_pgm_grid(p)


def test_path_csv_round_trip(tmp_path):
    path = bresenham_segment((1, 1), (4, 9))
    f = tmp_path / "path.csv"
    write_path_csv(f, path)
    text = f.read_bytes()
    assert text.startswith(b"m,n1,n2\n1,1,1\n") and b"\r" not in text
    assert read_path_csv(f) == path


def test_weights_csv_is_exact(tmp_path):
    vals = np.random.default_rng(0).random((3, 3))
    f = tmp_path / "w.csv"
    f.write_text(weights_to_csv(vals), newline="")
    assert np.array_equal(read_weights_csv(f, 3), vals)

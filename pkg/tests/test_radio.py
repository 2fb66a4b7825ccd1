import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coopnav.grid import GridError, GridGeometry
from coopnav.radio import (
    WEIGHT_NAMES,
    AccessPoint,
    RadioWeightMap,
    WeightKind,
    _profile,
    ap_weight,
    build_radio_map,
    single_ap_map,
)

G = GridGeometry(41, 1.0)
KINDS = [WeightKind.onoff(), WeightKind.amplitude(1.0), WeightKind.capacity(), WeightKind.tent(0.2)]


def at_distance(d):
    """A cell at exactly distance d along a row from an AP at (1, 1)."""
    return (1, 1 + d)


def test_onoff_disc_gate():
    ap = AccessPoint((1, 1), 10)
    assert ap_weight(WeightKind.onoff(), ap, at_distance(10)) == 1.0
    ap_off = AccessPoint((1, 1), 9.99)
    assert ap_weight(WeightKind.onoff(), ap_off, at_distance(10)) == 0.0


def test_amplitude_inverse_distance():
    ap = AccessPoint((1, 1), 10)
    assert ap_weight(WeightKind.amplitude(1.0), ap, at_distance(2)) == 0.5
    assert ap_weight(WeightKind.amplitude(2.0), ap, at_distance(4)) == 1 / 16


def test_capacity_endpoints():
    ap = AccessPoint((1, 1), 16)
    k = WeightKind.capacity()
    assert ap_weight(k, ap, at_distance(1)) == 1.0
    assert ap_weight(k, ap, at_distance(16)) == 0.0
    assert ap_weight(k, ap, at_distance(4)) == pytest.approx(0.5, abs=1e-15)


def test_tent_endpoints():
    ap = AccessPoint((1, 1), 10)
    k = WeightKind.tent(0.2)
    assert ap_weight(k, ap, (1, 1)) == 1.0
    assert ap_weight(k, ap, at_distance(10)) == 0.0
    assert ap_weight(k, ap, at_distance(5)) == pytest.approx(0.5**0.2, rel=1e-15)


@pytest.mark.parametrize("kind", KINDS, ids=WEIGHT_NAMES)
def test_center_value_is_one(kind):
    assert ap_weight(kind, AccessPoint((5, 5), 7), (5, 5)) == 1.0


@pytest.mark.parametrize(
    "args",
    [dict(name="bogus"), dict(name="amplitude", gamma=0.0), dict(name="tent", beta=1.0), dict(name="tent", beta=0.0)],
)
def test_weight_kind_validation(args):
    with pytest.raises(ValueError):
        WeightKind(**args)


def test_access_point_radius_positive():
    with pytest.raises(ValueError):
        AccessPoint((1, 1), 0)


def test_zero_aps_gives_zero_map():
    assert not build_radio_map([], WeightKind.tent(), G).values.any()


def test_onoff_single_ap_is_disc_indicator():
    ap = AccessPoint((21, 21), 7.5)
    r = build_radio_map([ap], WeightKind.onoff(), G)
    rows, cols = np.indices(G.shape) + 1
    disc = np.hypot(rows - 21, cols - 21) <= 7.5
    assert np.array_equal(r.values == 1.0, disc)
    assert np.array_equal(r.values == 0.0, ~disc)


def test_two_tent_aps_is_pointwise_max():
    a, b = AccessPoint((15, 15), 12), AccessPoint((22, 25), 10)
    r = build_radio_map([a, b], WeightKind.tent(0.2), G)
    expected = np.array(
        [[max(ap_weight(WeightKind.tent(0.2), a, (i, j)), ap_weight(WeightKind.tent(0.2), b, (i, j)))
          for j in range(1, 42)] for i in range(1, 42)]
    )
    kind = WeightKind.tent(0.2)
    assert np.array_equal(r.values, np.maximum(single_ap_map(a, kind, G), single_ap_map(b, kind, G)))
    assert np.allclose(r.values, expected, rtol=0, atol=1e-15)


def test_ap_outside_grid_rejected():
    with pytest.raises(GridError):
        build_radio_map([AccessPoint((50, 1), 3)], WeightKind.onoff(), G)


def test_radio_map_range_enforced():
    with pytest.raises(ValueError):
        RadioWeightMap(GridGeometry(2, 1.0), np.full((2, 2), 1.5))


aps = st.builds(
    AccessPoint,
    st.tuples(st.integers(1, 41), st.integers(1, 41)),
    st.floats(1.0, 30.0),
)


@given(base=st.lists(aps, max_size=3), extra=aps, kind=st.sampled_from(KINDS))
def test_adding_an_ap_never_lowers_weights(base, extra, kind):
    a = build_radio_map(base, kind, G).values
    b = build_radio_map(base + [extra], kind, G).values
    assert np.all(b >= a)


@given(ap=aps, kind=st.sampled_from(KINDS))
def test_values_in_unit_range_and_supported_on_disc(ap, kind):
    v = single_ap_map(ap, kind, G)
    assert v.min() >= 0.0 and v.max() <= 1.0
    rows, cols = np.indices(G.shape) + 1
    outside = np.hypot(rows - ap.center[0], cols - ap.center[1]) > ap.coverage_radius
    assert not v[outside].any()


@given(radius=st.floats(2.0, 30.0), kind=st.sampled_from(KINDS[1:]))
def test_radially_non_increasing(radius, kind):
    ap = AccessPoint((1, 1), radius)
    ds = np.linspace(0.0, radius, 200)
    w = _profile(kind, ds, ap.coverage_radius)
    assert np.all(np.diff(w) <= 1e-15)
    assert math.isclose(w[0], 1.0)

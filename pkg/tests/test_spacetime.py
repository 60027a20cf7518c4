import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collapse_lab.constants import C, C_PAPER
from collapse_lab.spacetime import (
    REST,
    InertialFrame,
    IntervalClass,
    Ordering,
    SpacetimeEvent,
    boost,
    classify_interval,
    find_before_before,
    interval_squared,
    time_order_in_frame,
)


def lorentz_matrix(v, c=C):
    """Textbook 4x4 boost matrix acting on (ct, x, y, z); independent of the module."""
    v = np.asarray(v, dtype=float)
    beta = v / c
    b2 = beta @ beta
    g = 1 / math.sqrt(1 - b2)
    m = np.eye(4)
    m[0, 0] = g
    m[0, 1:] = m[1:, 0] = -g * beta
    if b2 > 0:
        m[1:, 1:] += (g - 1) * np.outer(beta, beta) / b2
    return m


def boost_oracle(e, v, c=C):
    ct, x, y, z = lorentz_matrix(v, c) @ np.array([c * e.t, e.x, e.y, e.z])
    return ct / c, x, y, z


def test_interval_examples():
    e = SpacetimeEvent(0.0)
    assert interval_squared(e, e) == 0.0
    assert interval_squared(e, SpacetimeEvent(1e-9, 0.3)) == pytest.approx(-1.2448212631822886e-4, rel=1e-12)
    assert interval_squared(e, SpacetimeEvent(2e-9, 0.3)) == pytest.approx(0.26950207149472705, rel=1e-12)


def test_interval_symmetric():
    a, b = SpacetimeEvent(1.0, 2.0, -1.0, 0.5), SpacetimeEvent(-3e-9, 0.1, 0.2, 0.3)
    assert interval_squared(a, b) == interval_squared(b, a)


@pytest.mark.parametrize(
    "dt, dx, expected",
    [
        (1e-9, 0.3, IntervalClass.SPACE_LIKE),
        (1e-9, 0.0, IntervalClass.TIME_LIKE),
        (1e-9, C * 1e-9, IntervalClass.LIGHT_LIKE),
        (1e-9, 0.2, IntervalClass.TIME_LIKE),
    ],
)
def test_classify(dt, dx, expected):
    assert classify_interval(SpacetimeEvent(0.0), SpacetimeEvent(dt, dx)) is expected


def test_nonfinite_event_rejected():
    with pytest.raises(ValueError):
        SpacetimeEvent(math.nan)


def test_boost_identity():
    e = SpacetimeEvent(1e-9, 0.3, -0.2, 5.0)
    assert boost(e, REST) == e


def test_boost_textbook_value():
    # t' = -gamma v x / c^2 for t = 0, x = 1 m, v = c/2
    gamma = 1 / math.sqrt(0.75)
    out = boost(SpacetimeEvent(0.0, 1.0), InertialFrame((0.5 * C, 0, 0)))
    assert out.t == pytest.approx(-gamma * 0.5 / C, rel=1e-12)
    assert out.t == pytest.approx(-1.9258332015464708e-09, rel=1e-12)
    # the rounded constant reproduces the commonly quoted -1.9245 ns
    rounded = boost(SpacetimeEvent(0.0, 1.0), InertialFrame((0.5 * C_PAPER, 0, 0)), c=C_PAPER)
    assert rounded.t == pytest.approx(-1.9245e-9, rel=1e-4)


def test_boost_rejects_superluminal():
    with pytest.raises(ValueError):
        boost(SpacetimeEvent(0.0), InertialFrame((C, 0, 0)))
    with pytest.raises(ValueError):
        boost(SpacetimeEvent(0.0), InertialFrame((0.9999995 * C, 0, 0)))


coord = st.floats(-10.0, 10.0)
time_ns = st.floats(-50e-9, 50e-9)
unit_speed = st.floats(0.0, 0.99)
direction = st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)).filter(
    lambda d: sum(x * x for x in d) > 1e-3
)


def event_strategy():
    return st.builds(SpacetimeEvent, time_ns, coord, coord, coord)


@settings(max_examples=200, deadline=None)
@given(event_strategy(), unit_speed, direction)
def test_boost_matches_matrix_oracle(e, beta, d):
    f = InertialFrame.along(d, beta * C)
    got = boost(e, f)
    want = boost_oracle(e, f.velocity)
    scale_t = abs(e.t) + math.hypot(e.x, e.y, e.z) / C
    assert got.t == pytest.approx(want[0], abs=1e-12 * scale_t * 10)
    for g, w in zip((got.x, got.y, got.z), want[1:]):
        assert g == pytest.approx(w, abs=1e-9 * (1 + abs(w)))


@settings(max_examples=300, deadline=None)
@given(event_strategy(), event_strategy(), unit_speed, direction)
def test_interval_invariance(e1, e2, beta, d):
    f = InertialFrame.along(d, beta * C)
    s0 = interval_squared(e1, e2)
    s1 = interval_squared(boost(e1, f), boost(e2, f))
    # rounding of the boosted absolute coordinates sets an absolute floor
    mag = max(abs(v) for v in (C * e1.t, e1.x, e1.y, e1.z, C * e2.t, e2.x, e2.y, e2.z))
    assert s1 == pytest.approx(s0, rel=1e-9, abs=1e-12 * (1 + mag**2) / (1 - beta**2))


def test_time_order_examples():
    a, b = SpacetimeEvent(0.0, 0.0), SpacetimeEvent(0.0, 1.0)
    assert time_order_in_frame(a, b, REST) is Ordering.SIMULTANEOUS
    # moving along +x, the event further along +x happens earlier
    moving = InertialFrame((0.1 * C, 0, 0))
    assert time_order_in_frame(a, b, moving) is Ordering.AFTER
    assert time_order_in_frame(b, a, moving) is Ordering.BEFORE


def test_causal_order_invariant_for_timelike_pairs():
    rng = np.random.default_rng(5)
    for _ in range(20):
        a = SpacetimeEvent(0.0)
        dx = rng.uniform(-1, 1, 3)
        dt = np.linalg.norm(dx) / C * rng.uniform(1.01, 5.0)
        b = SpacetimeEvent(dt, *dx)
        orders = set()
        for _ in range(100):
            d = rng.normal(size=3)
            f = InertialFrame.along(d, rng.uniform(0, 0.99) * C)
            orders.add(time_order_in_frame(a, b, f))
        assert orders == {Ordering.BEFORE}


def assert_before_before(ea, eb, fa, fb):
    assert time_order_in_frame(ea, eb, fa) is Ordering.BEFORE
    assert time_order_in_frame(eb, ea, fb) is Ordering.BEFORE


def test_before_before_simultaneous_detectors():
    ea, eb = SpacetimeEvent(0.0, 0.0), SpacetimeEvent(0.0, 0.3)
    fa, fb = find_before_before(ea, eb, 100.0)
    assert fa.velocity == (-100.0, 0.0, 0.0)
    assert fb.velocity == (100.0, 0.0, 0.0)
    assert_before_before(ea, eb, fa, fb)


@pytest.mark.parametrize("dt", [0.9e-9, -0.9e-9, 0.5e-9])
def test_before_before_with_lab_offset(dt):
    ea, eb = SpacetimeEvent(0.0, 0.0), SpacetimeEvent(dt, 0.3)
    fa, fb = find_before_before(ea, eb, 100.0)
    assert_before_before(ea, eb, fa, fb)
    assert find_before_before(ea, eb, 100.0) == (fa, fb)


def test_before_before_large_absolute_times():
    ea = SpacetimeEvent(1.0e3, 5.0, 5.0, 5.0)
    eb = SpacetimeEvent(1.0e3, 5.0, 5.3, 5.0)
    fa, fb = find_before_before(ea, eb, 100.0)
    assert_before_before(ea, eb, fa, fb)


def test_before_before_rejects_causal_pairs():
    a = SpacetimeEvent(0.0)
    with pytest.raises(ValueError):
        find_before_before(a, SpacetimeEvent(2e-9, 0.3), 100.0)
    with pytest.raises(ValueError):
        find_before_before(a, SpacetimeEvent(1e-9, C * 1e-9), 100.0)
    with pytest.raises(ValueError):
        find_before_before(a, SpacetimeEvent(0.0, 0.3), 0.0)
    with pytest.raises(ValueError):
        find_before_before(a, SpacetimeEvent(0.0, 0.3), C)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(0.05, 10.0),
    st.floats(-0.95, 0.95),
    direction,
    st.floats(1.0, 1e6),
)
def test_before_before_property(d, frac, n, speed):
    n = np.asarray(n) / np.linalg.norm(n)
    ea = SpacetimeEvent(0.0)
    eb = SpacetimeEvent(frac * d / C, *(d * n))
    fa, fb = find_before_before(ea, eb, speed)
    assert_before_before(ea, eb, fa, fb)

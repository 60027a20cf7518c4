"""Special-relativity kernel: events, inertial frames, boosts and causal order.

All quantities are SI (seconds, meters). Every function takes the speed of
light as a keyword so the rounded ``C_PAPER`` value can be swapped in.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .constants import C, MAX_BETA, TAU_ISO, TAU_SIM


class IntervalClass(enum.Enum):
    SPACE_LIKE = "SpaceLike"
    TIME_LIKE = "TimeLike"
    LIGHT_LIKE = "LightLike"


class Ordering(enum.Enum):
    BEFORE = "Before"
    AFTER = "After"
    SIMULTANEOUS = "Simultaneous"


@dataclass(frozen=True)
class SpacetimeEvent:
    t: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.t, self.x, self.y, self.z)):
            raise ValueError(f"event coordinates must be finite: {self}")

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class InertialFrame:
    """Frame moving with constant ``velocity`` (m/s) relative to the lab."""

    velocity: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        vel = tuple(float(v) for v in self.velocity)
        if len(vel) != 3 or not all(math.isfinite(v) for v in vel):
            raise ValueError(f"velocity must be a finite 3-vector: {self.velocity}")
        object.__setattr__(self, "velocity", vel)

    @classmethod
    def along(cls, direction, speed: float) -> "InertialFrame":
        d = np.asarray(direction, dtype=float)
        return cls(tuple(speed * d / np.linalg.norm(d)))

    @property
    def speed(self) -> float:
        return math.sqrt(sum(v * v for v in self.velocity))


REST = InertialFrame()


def _check_speed(f: InertialFrame, c: float) -> None:
    if f.speed >= c:
        raise ValueError(f"frame speed {f.speed} m/s is not below c = {c} m/s")
    if f.speed > MAX_BETA * c:
        raise ValueError(f"frame speed {f.speed / c}c exceeds the supported {MAX_BETA}c")


def interval_squared(e1: SpacetimeEvent, e2: SpacetimeEvent, *, c: float = C) -> float:
    """Signed Minkowski interval ``c^2 dt^2 - |dx|^2`` in m^2 (positive = time-like)."""
    dt = e2.t - e1.t
    dx, dy, dz = e2.x - e1.x, e2.y - e1.y, e2.z - e1.z
    return (c * dt) ** 2 - (dx * dx + dy * dy + dz * dz)


def classify_interval(
    e1: SpacetimeEvent, e2: SpacetimeEvent, *, c: float = C, tol: float = TAU_ISO
) -> IntervalClass:
    s2 = interval_squared(e1, e2, c=c)
    if s2 < -tol:
        return IntervalClass.SPACE_LIKE
    if s2 > tol:
        return IntervalClass.TIME_LIKE
    return IntervalClass.LIGHT_LIKE


def _boost_delta(dt: float, dx: np.ndarray, v: np.ndarray, c: float) -> tuple[float, np.ndarray]:
    v2 = float(v @ v)
    if v2 == 0.0:
        return dt, dx.copy()
    gamma = 1.0 / math.sqrt(1.0 - v2 / c**2)
    vx = float(v @ dx)
    t_new = gamma * (dt - vx / c**2)
    x_new = dx + ((gamma - 1.0) * vx / v2 - gamma * dt) * v
    return t_new, x_new


def boost(e: SpacetimeEvent, f: InertialFrame, *, c: float = C) -> SpacetimeEvent:
    """Coordinates of ``e`` seen from frame ``f`` (pure boost, common origin)."""
    _check_speed(f, c)
    t, x = _boost_delta(e.t, e.position, np.asarray(f.velocity), c)
    return SpacetimeEvent(float(t), *(float(v) for v in x))


def time_order_in_frame(
    e1: SpacetimeEvent,
    e2: SpacetimeEvent,
    f: InertialFrame,
    *,
    c: float = C,
    tol: float = TAU_SIM,
) -> Ordering:
    """Order of ``e1`` relative to ``e2`` in frame ``f``.

    The boosted time difference is computed from coordinate differences so
    sub-femtosecond orderings survive events with large absolute times.
    """
    _check_speed(f, c)
    dx = e2.position - e1.position
    dt, _ = _boost_delta(e2.t - e1.t, dx, np.asarray(f.velocity), c)
    if dt > tol:
        return Ordering.BEFORE
    if dt < -tol:
        return Ordering.AFTER
    return Ordering.SIMULTANEOUS


def find_before_before(
    e_a: SpacetimeEvent, e_b: SpacetimeEvent, speed: float, *, c: float = C
) -> tuple[InertialFrame, InertialFrame]:
    """Rest frames of two receding detectors realizing before-before timing.

    Detector A moves toward -n and detector B toward +n, where n is the unit
    vector from A to B. In A's frame A's event comes first, in B's frame B's
    does. ``speed`` is a floor: when the lab time offset ``dt`` needs a faster
    frame on one side (``|dt| >= speed * d / c^2``), that side is boosted to
    midway between the minimum required speed and ``MAX_BETA * c``.

    Raises
    ------
    ValueError
        If the events are not space-like separated, ``speed`` is outside
        ``(0, c)``, or the pair sits so close to the light cone that the needed
        frame exceeds ``MAX_BETA * c``.
    """
    if not 0.0 < speed < c:
        raise ValueError(f"speed must lie in (0, c), got {speed}")
    cls = classify_interval(e_a, e_b, c=c)
    if cls is not IntervalClass.SPACE_LIKE:
        raise ValueError(f"before-before timing needs a space-like pair, got {cls.value}")

    sep = e_b.position - e_a.position
    d = float(np.linalg.norm(sep))
    n = sep / d
    dt = e_b.t - e_a.t
    v_max = MAX_BETA * c

    def side_speed(required: float) -> float:
        # margin keeps the boosted time gap well outside TAU_SIM
        floor = required + 2.0 * TAU_SIM * c**2 / d
        if floor >= v_max:
            raise ValueError("pair is too close to the light cone for a supported boost")
        if speed > floor:
            return min(speed, v_max)
        return 0.5 * (floor + v_max)

    # A-frame: dt' = gamma * (dt + s_a * d / c^2) > 0
    s_a = side_speed(max(0.0, -dt * c**2 / d))
    # B-frame: dt' = gamma * (dt - s_b * d / c^2) < 0
    s_b = side_speed(max(0.0, dt * c**2 / d))
    f_a = InertialFrame(tuple(-s_a * n))
    f_b = InertialFrame(tuple(s_b * n))
    return f_a, f_b

"""Preferred-frame ("ether drift") optics for an equal-arm interferometer.

Angles are radians. ``theta`` is the angle between arm 1 and the in-plane
drift direction; ``v`` is the drift speed of the lab through the preferred
frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C, EARTH_ROTATION_RATE

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Interferometer:
    arm_length: float
    wavelength: float
    device_phase: float = math.pi / 2
    orientation: float = 0.0
    arm_azimuth: float = 0.0

    def __post_init__(self):
        if not self.arm_length > 0:
            raise ValueError(f"arm_length must be positive, got {self.arm_length}")
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        object.__setattr__(self, "orientation", float(self.orientation) % TWO_PI)

    def angular_frequency(self, c: float = C) -> float:
        return TWO_PI * c / self.wavelength

    def rotated(self, angle: float) -> "Interferometer":
        return Interferometer(
            self.arm_length,
            self.wavelength,
            self.device_phase,
            self.orientation + angle,
            (self.arm_azimuth + angle) % TWO_PI,
        )


@dataclass(frozen=True)
class DriftConfig:
    """Lab velocity through the preferred frame.

    The direction is fixed in equatorial coordinates; the lab site enters
    through its geodetic latitude and east longitude.
    """

    speed: float = 0.0
    right_ascension: float = 0.0
    declination: float = 0.0
    lab_latitude: float = 0.0
    lab_longitude: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.speed) and 0.0 <= self.speed < C):
            raise ValueError(f"drift speed must lie in [0, c), got {self.speed}")


def _check_speed(v, c: float) -> None:
    v = np.asarray(v)
    if not np.all((v >= 0.0) & (v < c)):
        raise ValueError(f"drift speed must lie in [0, c), got {v}")


def drift_time_difference(L: float, v: float, theta, *, c: float = C):
    """Second-order arm travel-time difference ``(L v^2 / c^3) cos 2 theta``.

    Positive at ``theta = 0`` (arm 1 along the drift), negative after a
    quarter turn. ``v`` and ``theta`` broadcast against each other.
    """
    _check_speed(v, c)
    return L * np.asarray(v, dtype=float) ** 2 / c**3 * np.cos(2.0 * np.asarray(theta))


def drift_time_difference_exact(L: float, v: float, theta, *, c: float = C):
    """Exact classical round-trip difference ``T(theta) - T(theta + pi/2)``.

    ``T(theta) = (2L/c) sqrt(1 - b^2 sin^2 theta) / (1 - b^2)`` with
    ``b = v/c``. The difference of square roots is rationalized so that
    tiny ``b`` does not cancel catastrophically.
    """
    _check_speed(v, c)
    theta = np.asarray(theta, dtype=float)
    b2 = (v / c) ** 2
    s2 = np.sin(theta) ** 2
    c2 = np.cos(theta) ** 2
    root_sum = np.sqrt(1.0 - b2 * s2) + np.sqrt(1.0 - b2 * c2)
    return (2.0 * L / c) * b2 * (c2 - s2) / ((1.0 - b2) * root_sum)


def rotation_phase_shift(L: float, wavelength: float, v: float, *, c: float = C) -> float:
    """Phase change produced by a 90 degree turn: ``4 pi (L / wavelength) (v / c)^2``."""
    if not (L > 0 and wavelength > 0):
        raise ValueError("arm length and wavelength must be positive")
    _check_speed(v, c)
    return 4.0 * math.pi * (L / wavelength) * (v / c) ** 2


def solve_arm_length(wavelength: float, v: float, phase_shift: float, *, c: float = C) -> float:
    """Arm length that gives ``phase_shift`` on a 90 degree turn."""
    if not v > 0:
        raise ValueError("no arm length produces a shift without drift (v must be > 0)")
    if not wavelength > 0:
        raise ValueError("wavelength must be positive")
    _check_speed(v, c)
    return phase_shift * wavelength * c**2 / (4.0 * math.pi * v**2)


def drift_unit_vector_enu(drift: DriftConfig, t):
    """Drift direction in local (east, north, up) coordinates at times ``t``.

    Sidereal angle is taken as zero at ``t = 0``, so the local sidereal time is
    ``lab_longitude + Omega t``.
    """
    t = np.asarray(t, dtype=float)
    hour_angle = drift.lab_longitude + EARTH_ROTATION_RATE * t - drift.right_ascension
    lat, dec = drift.lab_latitude, drift.declination
    east = -math.cos(dec) * np.sin(hour_angle)
    north = math.cos(lat) * math.sin(dec) - math.sin(lat) * math.cos(dec) * np.cos(hour_angle)
    up = math.sin(lat) * math.sin(dec) + math.cos(lat) * math.cos(dec) * np.cos(hour_angle)
    return east, north, up


def sidereal_orientation(drift: DriftConfig, arm_azimuth: float, t):
    """In-plane drift angle and speed seen by a horizontal interferometer.

    Parameters
    ----------
    drift : DriftConfig
    arm_azimuth : float
        Azimuth of arm 1, measured from local north toward east.
    t : float or array_like
        Seconds since the sidereal epoch.

    Returns
    -------
    theta_eff, v_eff
        Angle in ``[0, 2 pi)`` from arm 1 to the horizontal projection of the
        drift, and the projected speed (never above ``drift.speed``).
    """
    east, north, _ = drift_unit_vector_enu(drift, t)
    horizontal = np.hypot(east, north)
    v_eff = drift.speed * np.minimum(horizontal, 1.0)
    drift_azimuth = np.arctan2(east, north)
    theta_eff = np.mod(drift_azimuth - arm_azimuth, TWO_PI)
    if np.ndim(theta_eff) == 0:
        return float(theta_eff), float(v_eff)
    return theta_eff, v_eff

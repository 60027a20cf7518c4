"""Physical constants shared across the package."""

import math

C = 299_792_458.0
"""Speed of light in vacuum, m/s (exact SI value)."""

C_PAPER = 3.0e8
"""Rounded speed of light used to reproduce round-number design figures."""

SIDEREAL_DAY = 86_164.1
"""Earth rotation period relative to the fixed stars, s."""

EARTH_ROTATION_RATE = 2.0 * math.pi / SIDEREAL_DAY
"""Sidereal angular rate, rad/s."""

MAX_BETA = 0.999999
"""Largest boost speed accepted, as a fraction of c."""

TAU_ISO = 1e-12
"""Guard band on the interval squared (m^2) inside which a pair is light-like."""

TAU_SIM = 1e-18
"""Guard band on boosted time differences (s) inside which events are simultaneous."""


def speed_of_light(paper_mode: bool = False) -> float:
    return C_PAPER if paper_mode else C

"""
Arm travel-time difference in a drifting preferred frame
========================================================

A Michelson interferometer moving at v through a hypothetical ether sees
its two arm times differ by L v^2 / c^3 cos(2 theta). Turning it by 90
degrees flips the sign, which shifts the phase by 4 pi (L / lambda) (v/c)^2.
"""

import math

import numpy as np

from collapse_lab.constants import C, C_PAPER
from collapse_lab.ether import (
    drift_time_difference,
    drift_time_difference_exact,
    rotation_phase_shift,
    solve_arm_length,
)

L, v = 6.25, 3.0e4
theta = np.linspace(0, np.pi, 5)
approx = drift_time_difference(L, v, theta, c=C_PAPER)
exact = drift_time_difference_exact(L, v, theta, c=C_PAPER)
for th, a, e in zip(theta, approx, exact):
    print(f"theta={th:5.3f}  dtau={a:+.6e} s  exact-approx={e - a:+.1e} s")

# the 6.25 m arm is matched to 1500 nm light when c is rounded to 3e8
print("shift at 1500 nm:", rotation_phase_shift(L, 1500e-9, v, c=C_PAPER), "vs pi/6 =", math.pi / 6)
print("shift at 1550 nm:", rotation_phase_shift(L, 1550e-9, v, c=C_PAPER))
print("arm for pi/6 at 1550 nm:", solve_arm_length(1550e-9, v, math.pi / 6, c=C_PAPER), "m")
print("same with exact c:", solve_arm_length(1550e-9, v, math.pi / 6, c=C), "m")

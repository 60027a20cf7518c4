"""
Space-like detection events and before-before frames
====================================================

Two detectors 0.3 m apart that fire within 1 ns of each other cannot be
linked by a light signal. We check that, then build moving-detector frames
in which each detector is the first to fire.
"""

import numpy as np

from collapse_lab.constants import C
from collapse_lab.spacetime import (
    InertialFrame,
    SpacetimeEvent,
    boost,
    classify_interval,
    find_before_before,
    interval_squared,
    time_order_in_frame,
)

a = SpacetimeEvent(0.0)
b = SpacetimeEvent(1e-9, 0.3)
print("interval^2 =", interval_squared(a, b), "m^2 ->", classify_interval(a, b).value)

# light covers only ~0.2998 m in a nanosecond, so 0.2 m is reachable
print("0.2 m apart:", classify_interval(a, SpacetimeEvent(1e-9, 0.2)).value)

# the class does not depend on who is looking
rng = np.random.default_rng(0)
for _ in range(3):
    v = rng.uniform(-0.9, 0.9, size=3) * C / np.sqrt(3)
    f = InertialFrame(tuple(v))
    print(f"  frame at {f.speed / C:.2f}c:", classify_interval(boost(a, f), boost(b, f)).value)

# detectors receding at 100 m/s; B lags by almost d/c, so its frame must move near c
f_a, f_b = find_before_before(a, b, 100.0)
print("A frame speed", f_a.speed, "m/s, B frame speed", f_b.speed, "m/s")
print("in A's frame A fires", time_order_in_frame(a, b, f_a).value.lower(), "B")
print("in B's frame B fires", time_order_in_frame(b, a, f_b).value.lower(), "A")

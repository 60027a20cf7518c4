"""
Single-decision collapse versus independent detectors
=====================================================

If each detector decides on its own, a single photon sometimes fires both
or neither. Count those gates for each model.
"""

import math

from collapse_lab import CollapseModel, Interferometer, RunConfig, Variant, simulate_run

ifo = Interferometer(6.25, 1550e-9, device_phase=math.pi / 2)
n = 200_000
for variant in Variant:
    cfg = RunConfig(ifo, CollapseModel(variant), n_heralds=n, seed=3, efficiency=1.0, dark_count_prob=0.0)
    t = simulate_run(cfg)
    print(f"{variant.value:>16}: doubles {t.doubles / n:.3f}  nulls {t.nulls / n:.3f}")

# with real detectors the single-decision models also show nulls (losses)
cfg = RunConfig(ifo, n_heralds=n, seed=3)
print("lossy covariant:", simulate_run(cfg).to_dict())

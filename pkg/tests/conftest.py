import math

import pytest

from collapse_lab.collapse import CollapseModel, Variant
from collapse_lab.ether import DriftConfig, Interferometer
from collapse_lab.experiment import RunConfig, calibrate_device_phase

# lab near Geneva; drift direction fixed on the sky (roughly the CMB dipole)
SKY_DRIFT = dict(
    right_ascension=math.radians(168.0),
    declination=math.radians(-7.0),
    lab_latitude=math.radians(46.2),
    lab_longitude=math.radians(6.1),
)


def binomial_tol(p, n, k=5.0):
    return k * math.sqrt(p * (1 - p) / n)


@pytest.fixture
def trial_ifo():
    # 1500 nm makes a 6.25 m arm give exactly pi/6 with c = 3e8
    return Interferometer(arm_length=6.25, wavelength=1500e-9, orientation=math.pi / 2)


@pytest.fixture
def trial_rotation_cfg(trial_ifo):
    """Preferred-frame trial: arm 2 along the 30 km/s drift, total phase pi/2 before the turn."""
    model = CollapseModel(Variant.PREFERRED_FRAME, drift=DriftConfig(3.0e4))
    cfg = RunConfig(
        trial_ifo, model, n_heralds=1_000_000, seed=2014, efficiency=1.0, dark_count_prob=0.0,
        paper_mode=True,
    )
    return calibrate_device_phase(cfg)


@pytest.fixture
def sky_scan_cfg():
    model = CollapseModel(Variant.PREFERRED_FRAME, drift=DriftConfig(3.0e4, **SKY_DRIFT))
    ifo = Interferometer(arm_length=6.25, wavelength=1500e-9, device_phase=math.pi / 2)
    return RunConfig(
        ifo, model, n_heralds=100_000, seed=11, efficiency=1.0, dark_count_prob=0.0, paper_mode=True
    )

"""Monte Carlo engine for the heralded single-photon interferometer.

Each herald opens one counting gate. The collapse model decides which
detectors the photon triggers; lossy detectors then drop true clicks with
probability ``1 - efficiency`` and add dark counts to silent gates.

Heralds are split into a fixed number of shards, each driven by its own
child of the root ``SeedSequence``. The thread count only changes how
shards are scheduled, never which random numbers they consume, so results
are bit-identical for any ``threads`` value.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, astuple, dataclass, field, replace

import numpy as np

from .collapse import (
    CollapseModel,
    DetectionRecord,
    detection_probability,
    effective_phase,
    sample_photons,
)
from .constants import speed_of_light
from .ether import DriftConfig, Interferometer, sidereal_orientation

DEFAULT_SHARDS = 8

__all__ = [
    "CountTally",
    "DetectionRecord",
    "EmptyDenominatorError",
    "RotationResult",
    "RunConfig",
    "ScanPoint",
    "analytic_scan",
    "calibrate_device_phase",
    "expected_probabilities",
    "rotation_protocol",
    "scan_times",
    "sidereal_scan",
    "simulate_run",
    "tally_to_probabilities",
]


class EmptyDenominatorError(ValueError):
    """Raised when a rate estimator has no heralds to divide by."""


@dataclass(frozen=True)
class RunConfig:
    interferometer: Interferometer
    model: CollapseModel = field(default_factory=CollapseModel)
    n_heralds: int = 1_000_000
    seed: int = 0
    efficiency: float = 0.8
    dark_count_prob: float = 1e-4
    separate_runs: bool = False
    paper_mode: bool = False
    shards: int = DEFAULT_SHARDS

    def __post_init__(self):
        if int(self.n_heralds) != self.n_heralds or self.n_heralds < 1:
            raise ValueError(f"n_heralds must be a positive integer, got {self.n_heralds}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        for name in ("efficiency", "dark_count_prob"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if int(self.shards) != self.shards or self.shards < 1:
            raise ValueError(f"shards must be a positive integer, got {self.shards}")

    @property
    def visibility(self) -> float:
        return self.model.visibility

    @property
    def drift(self) -> DriftConfig:
        return self.model.drift

    @property
    def c(self) -> float:
        return speed_of_light(self.paper_mode)


@dataclass(frozen=True)
class CountTally:
    """Gate and coincidence counts for one acquisition.

    ``heralds_a`` is R_H(A) (herald counts while A was recorded) and
    ``coinc_a`` is R_HA; likewise for B. ``doubles`` and ``nulls`` count gates
    where both or neither detector clicked; they are only observable when A
    and B are recorded together and stay zero in separate-run mode.
    """

    heralds_a: int = 0
    coinc_a: int = 0
    heralds_b: int = 0
    coinc_b: int = 0
    doubles: int = 0
    nulls: int = 0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")
        if self.coinc_a > self.heralds_a or self.coinc_b > self.heralds_b:
            raise ValueError("coincidences cannot exceed herald counts")

    def __add__(self, other: "CountTally") -> "CountTally":
        return CountTally(*(a + b for a, b in zip(astuple(self), astuple(other))))

    def to_dict(self) -> dict:
        return {
            "R_H_A": self.heralds_a,
            "R_HA": self.coinc_a,
            "R_H_B": self.heralds_b,
            "R_HB": self.coinc_b,
            "doubles": self.doubles,
            "nulls": self.nulls,
        }


def tally_to_probabilities(t: CountTally) -> tuple[float, float]:
    """Rate estimators ``P_A = R_HA / R_H(A)`` and ``P_B = R_HB / R_H(B)``."""
    if t.heralds_a == 0 or t.heralds_b == 0:
        raise EmptyDenominatorError(
            f"herald count is zero (R_H(A)={t.heralds_a}, R_H(B)={t.heralds_b})"
        )
    return t.coinc_a / t.heralds_a, t.coinc_b / t.heralds_b


def _detect(true_click: np.ndarray, efficiency: float, dark: float, rng: np.random.Generator):
    kept = true_click & (rng.random(true_click.size) < efficiency)
    spurious = rng.random(true_click.size) < dark
    return kept | (~kept & spurious)


def _run_shard(cfg: RunConfig, phi: float, n: int, seed: np.random.SeedSequence) -> CountTally:
    rng = np.random.default_rng(seed)
    if cfg.separate_runs:
        a, _ = sample_photons(cfg.model, phi, n, rng)
        seen_a = _detect(a, cfg.efficiency, cfg.dark_count_prob, rng)
        _, b = sample_photons(cfg.model, phi, n, rng)
        seen_b = _detect(b, cfg.efficiency, cfg.dark_count_prob, rng)
        return CountTally(n, int(seen_a.sum()), n, int(seen_b.sum()), 0, 0)
    a, b = sample_photons(cfg.model, phi, n, rng)
    seen_a = _detect(a, cfg.efficiency, cfg.dark_count_prob, rng)
    seen_b = _detect(b, cfg.efficiency, cfg.dark_count_prob, rng)
    doubles = int(np.count_nonzero(seen_a & seen_b))
    nulls = int(np.count_nonzero(~seen_a & ~seen_b))
    return CountTally(n, int(seen_a.sum()), n, int(seen_b.sum()), doubles, nulls)


def _simulate(cfg: RunConfig, phi: float, root: np.random.SeedSequence, threads: int) -> CountTally:
    base, extra = divmod(cfg.n_heralds, cfg.shards)
    sizes = [base + (i < extra) for i in range(cfg.shards)]
    children = root.spawn(cfg.shards)
    jobs = [(n, s) for n, s in zip(sizes, children) if n]
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda job: _run_shard(cfg, phi, *job), jobs))
    else:
        parts = [_run_shard(cfg, phi, n, s) for n, s in jobs]
    total = CountTally()
    for part in parts:
        total = total + part
    return total


def _stream(seed: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=key)


def simulate_run(cfg: RunConfig, *, t: float | None = None, threads: int = 1) -> CountTally:
    """Simulate ``cfg.n_heralds`` gates and return the count tally.

    ``t`` selects the sidereal time used for the drift geometry; ``None``
    places the drift in the interferometer plane at ``ifo.orientation``.
    """
    phi = float(effective_phase(cfg.model, cfg.interferometer, t, c=cfg.c))
    return _simulate(cfg, phi, _stream(cfg.seed), threads)


def expected_probabilities(cfg: RunConfig, t=None):
    """Noise-free expectation of ``(P_A, P_B)`` including detector losses and dark counts."""
    phi = effective_phase(cfg.model, cfg.interferometer, t, c=cfg.c)
    out = []
    for a in (+1, -1):
        p = detection_probability(phi, a, cfg.visibility) * cfg.efficiency
        out.append(p + (1.0 - p) * cfg.dark_count_prob)
    return out[0], out[1]


def calibrate_device_phase(cfg: RunConfig, target: float = math.pi / 2) -> RunConfig:
    """Return ``cfg`` with the device phase set so the pre-rotation total phase is ``target``."""
    ifo = replace(cfg.interferometer, device_phase=0.0)
    drift_term = float(effective_phase(cfg.model, ifo, c=cfg.c))
    return replace(cfg, interferometer=replace(cfg.interferometer, device_phase=target - drift_term))


@dataclass(frozen=True)
class RotationResult:
    before: tuple[float, float]
    after: tuple[float, float]
    delta_p: float
    tally_before: CountTally
    tally_after: CountTally


def rotation_protocol(cfg: RunConfig, *, threads: int = 1) -> RotationResult:
    """Measure at ``ifo.orientation`` and again after a 90 degree turn.

    ``delta_p`` is ``(P_B - P_A)`` after minus before. The two acquisitions
    draw from independent child streams of ``cfg.seed``.
    """
    turned = replace(cfg, interferometer=cfg.interferometer.rotated(math.pi / 2))
    results = []
    for k, run in enumerate((cfg, turned)):
        phi = float(effective_phase(run.model, run.interferometer, c=run.c))
        results.append(_simulate(run, phi, _stream(cfg.seed, 1, k), threads))
    before = tally_to_probabilities(results[0])
    after = tally_to_probabilities(results[1])
    delta = (after[1] - after[0]) - (before[1] - before[0])
    return RotationResult(before, after, delta, results[0], results[1])


@dataclass(frozen=True)
class ScanPoint:
    t: float
    theta_eff: float
    v_eff: float
    p_a: float
    p_b: float
    n_heralds: int


def scan_times(duration: float, step: float) -> np.ndarray:
    if not (step > 0 and duration >= step):
        raise ValueError(f"need duration >= step > 0, got duration={duration}, step={step}")
    count = math.floor(duration / step + 1e-9) + 1
    return step * np.arange(count)


def sidereal_scan(
    cfg: RunConfig, duration: float, step: float, *, threads: int = 1
) -> list[ScanPoint]:
    """One simulated acquisition every ``step`` seconds over ``duration``."""
    times = scan_times(duration, step)
    theta, v = sidereal_orientation(cfg.drift, cfg.interferometer.arm_azimuth, times)
    phases = effective_phase(cfg.model, cfg.interferometer, times, c=cfg.c)
    points = []
    for k, (t, phi) in enumerate(zip(times, phases)):
        tally = _simulate(cfg, float(phi), _stream(cfg.seed, 2, k), threads)
        p_a, p_b = tally_to_probabilities(tally)
        points.append(ScanPoint(float(t), float(theta[k]), float(v[k]), p_a, p_b, tally.heralds_a))
    return points


def analytic_scan(cfg: RunConfig, duration: float, step: float) -> list[ScanPoint]:
    """Noise-free counterpart of :func:`sidereal_scan` (expected rates, no sampling)."""
    times = scan_times(duration, step)
    theta, v = sidereal_orientation(cfg.drift, cfg.interferometer.arm_azimuth, times)
    p_a, p_b = expected_probabilities(cfg, times)
    return [
        ScanPoint(float(t), float(th), float(ve), float(pa), float(pb), cfg.n_heralds)
        for t, th, ve, pa, pb in zip(times, theta, v, p_a, p_b)
    ]

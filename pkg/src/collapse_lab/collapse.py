"""Competing collapse models: analytic predictors, samplers, and a no-signaling audit.

Outcome label ``a = +1`` means detector A fires and ``a = -1`` means detector B
fires. Joint tables are indexed ``[alice_setting, bob_setting, a, b]`` with
outcome index 0 for ``+1`` and 1 for ``-1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .constants import C
from .ether import DriftConfig, Interferometer, drift_time_difference, sidereal_orientation

OUTCOMES = (+1, -1)
NORMALIZATION_TOL = 1e-12
AUDIT_ZERO_TOL = 64 * np.finfo(float).eps
"""Rate shifts at or below this are rounding residue and reported as exactly 0."""


class Variant(enum.Enum):
    COVARIANT = "covariant"
    PREFERRED_FRAME = "preferred-frame"
    MS_DETECTORS = "ms-detectors"


@dataclass(frozen=True)
class CollapseModel:
    """Which collapse semantics drive the detectors.

    ``drift`` is only consulted by the preferred-frame variant.
    ``before_before`` only matters for the Multisimultaneity variant: when it
    is false the detectors are not in before-before timing and the model
    behaves like the covariant one.
    """

    variant: Variant = Variant.COVARIANT
    visibility: float = 1.0
    drift: DriftConfig = field(default_factory=DriftConfig)
    before_before: bool = True

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError(f"visibility must lie in [0, 1], got {self.visibility}")

    @property
    def decorrelated(self) -> bool:
        return self.variant is Variant.MS_DETECTORS and self.before_before


@dataclass(frozen=True)
class DetectionRecord:
    herald_index: int
    fired_a: bool
    fired_b: bool


def detection_probability(phi, a: int, visibility: float = 1.0):
    """Probability ``(1 + a V cos phi) / 2`` of outcome ``a`` at phase ``phi``."""
    if a not in OUTCOMES:
        raise ValueError(f"outcome label must be +1 or -1, got {a}")
    if not 0.0 <= visibility <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {visibility}")
    return 0.5 * (1.0 + a * visibility * np.cos(phi))


def effective_phase(model: CollapseModel, ifo: Interferometer, t=None, *, c: float = C):
    """Interferometer phase predicted by ``model``.

    With ``t=None`` the drift lies in the interferometer plane at angle
    ``ifo.orientation`` from arm 1 and with the full drift speed. With ``t``
    given (scalar or array, seconds since the sidereal epoch), angle and
    speed follow the Earth's rotation.

    Only the preferred-frame model feels the drift. The Multisimultaneity
    model returns the device phase; its detectors use it only for their
    single-detector marginals.
    """
    if model.variant is not Variant.PREFERRED_FRAME or model.drift.speed == 0.0:
        if t is None:
            return ifo.device_phase
        return np.full(np.shape(t), ifo.device_phase, dtype=float)
    if t is None:
        theta, v = ifo.orientation, model.drift.speed
        return ifo.device_phase + ifo.angular_frequency(c) * float(
            drift_time_difference(ifo.arm_length, v, theta, c=c)
        )
    theta, v = sidereal_orientation(model.drift, ifo.arm_azimuth, t)
    dtau = drift_time_difference(ifo.arm_length, v, theta, c=c)
    return ifo.device_phase + ifo.angular_frequency(c) * dtau


def sample_photons(model: CollapseModel, phi, n: int, rng: np.random.Generator):
    """Draw detector outcomes for ``n`` heralded photons.

    Returns two boolean arrays ``(fired_a, fired_b)``. Single-decision models
    fire exactly one detector per herald. Decorrelated Multisimultaneity
    detectors fire independently with their own marginals, so double fires
    and silent gates both occur.
    """
    p_a = detection_probability(phi, +1, model.visibility)
    if model.decorrelated:
        p_b = detection_probability(phi, -1, model.visibility)
        fired_a = rng.random(n) < p_a
        fired_b = rng.random(n) < p_b
        return fired_a, fired_b
    fired_a = rng.random(n) < p_a
    return fired_a, ~fired_a


def sample_single_photon(
    model: CollapseModel, phi: float, rng: np.random.Generator, herald_index: int = 0
) -> DetectionRecord:
    fired_a, fired_b = sample_photons(model, phi, 1, rng)
    return DetectionRecord(herald_index, bool(fired_a[0]), bool(fired_b[0]))


class UnnormalizedTableError(ValueError):
    pass


@dataclass(frozen=True)
class JointModel:
    """Two-party outcome table ``P(a, b | alpha, beta)``.

    ``observable`` says what Bob sees: ``"marginal"`` (his own outcome only)
    or ``"joint"`` (both outcomes, as when he watches both detectors of the
    coincidence pair).
    """

    alice_settings: tuple
    bob_settings: tuple
    table: np.ndarray
    observable: str = "marginal"

    def __post_init__(self):
        table = np.array(self.table, dtype=float)
        shape = (len(self.alice_settings), len(self.bob_settings), 2, 2)
        if table.shape != shape:
            raise ValueError(f"table shape {table.shape} does not match settings {shape}")
        if self.observable not in ("marginal", "joint"):
            raise ValueError(f"observable must be 'marginal' or 'joint', got {self.observable!r}")
        if np.any(table < 0) or not np.all(np.isfinite(table)):
            raise UnnormalizedTableError("probabilities must be finite and nonnegative")
        sums = table.sum(axis=(2, 3))
        bad = np.argwhere(np.abs(sums - 1.0) > NORMALIZATION_TOL)
        if bad.size:
            i, j = bad[0]
            raise UnnormalizedTableError(
                f"table for settings ({self.alice_settings[i]!r}, {self.bob_settings[j]!r}) "
                f"sums to {sums[i, j]!r}, not 1"
            )
        table.setflags(write=False)
        object.__setattr__(self, "alice_settings", tuple(self.alice_settings))
        object.__setattr__(self, "bob_settings", tuple(self.bob_settings))
        object.__setattr__(self, "table", table)

    @classmethod
    def entangled(
        cls,
        alice_settings: Sequence[float],
        bob_settings: Sequence[float],
        visibility: float = 1.0,
        observable: str = "marginal",
    ) -> "JointModel":
        """Standard correlated table ``(1 + a b V cos(alpha + beta)) / 4``."""
        ab = np.outer(OUTCOMES, OUTCOMES)
        s = np.add.outer(np.asarray(alice_settings, float), np.asarray(bob_settings, float))
        table = 0.25 * (1.0 + visibility * np.cos(s)[:, :, None, None] * ab)
        return cls(tuple(alice_settings), tuple(bob_settings), table, observable)

    @classmethod
    def product(
        cls,
        alice_settings: Sequence[Hashable],
        bob_settings: Sequence[Hashable],
        p_alice_plus: Sequence[float],
        p_bob_plus: Sequence[float],
        observable: str = "marginal",
    ) -> "JointModel":
        """Local product table ``P(a|alpha) P(b|beta)`` from the ``+1`` probabilities."""
        pa = np.asarray(p_alice_plus, float)
        pb = np.asarray(p_bob_plus, float)
        pa = np.stack([pa, 1.0 - pa], axis=-1)
        pb = np.stack([pb, 1.0 - pb], axis=-1)
        table = pa[:, None, :, None] * pb[None, :, None, :]
        return cls(tuple(alice_settings), tuple(bob_settings), table, observable)

    def bob_marginal(self) -> np.ndarray:
        return self.table.sum(axis=2)

    def alice_marginal(self) -> np.ndarray:
        return self.table.sum(axis=3)

    def bob_observed(self) -> np.ndarray:
        """Outcome rates visible to Bob, shape ``(n_alice, n_bob, n_cells)``."""
        if self.observable == "joint":
            return self.table.reshape(*self.table.shape[:2], 4)
        return self.bob_marginal()


def ms_broken_model(beta0: float = 0.0, visibility: float = 1.0) -> JointModel:
    """Two-setting moving-detector instance of the signaling argument.

    Alice either leaves her detector at rest (correlations intact) or sets it
    moving to create before-before timing, which under Multisimultaneity
    erases the correlation. Bob watches the joint outcomes.
    """
    rest = JointModel.entangled([0.0], [beta0], visibility, "joint").table[0, 0]
    broken = ms_beamsplitter_prediction(
        JointModel.entangled([0.0], [beta0], visibility), before_before=True
    ).table[0, 0]
    table = np.stack([rest, broken])[:, None, :, :]
    return JointModel(("rest", "before-before"), (beta0,), table, "joint")


@dataclass(frozen=True)
class AuditResult:
    max_shift: float
    argmax: tuple | None
    """``(alpha, alpha_prime, beta)`` achieving ``max_shift``; None with one Alice setting."""


def no_signaling_audit(m: JointModel) -> AuditResult:
    """Largest change in any outcome rate Bob observes caused by Alice's setting.

    For each Bob setting and each pair of Alice settings the maximum absolute
    change over Bob's observed cells is taken. With the two-outcome marginal
    this equals the total-variation distance. Zero certifies no signaling
    over the declared setting grid; differences within ``AUDIT_ZERO_TOL``
    come from summing marginals in floating point and count as zero.
    """
    observed = m.bob_observed()
    n_alice = observed.shape[0]
    best, arg = 0.0, None
    for j, beta in enumerate(m.bob_settings):
        for i in range(n_alice):
            for k in range(i + 1, n_alice):
                shift = float(np.max(np.abs(observed[i, j] - observed[k, j])))
                if shift <= AUDIT_ZERO_TOL:
                    shift = 0.0
                if arg is None or shift > best:
                    best, arg = shift, (m.alice_settings[i], m.alice_settings[k], beta)
    return AuditResult(best, arg)


def ms_beamsplitter_prediction(correlated: JointModel, before_before: bool) -> JointModel:
    """Multisimultaneity prediction: correlations vanish under before-before timing.

    The returned table is the product of the input's two marginals for every
    setting pair, so each party's local statistics are untouched.
    """
    if not before_before:
        return correlated
    pa = correlated.alice_marginal()
    pb = correlated.bob_marginal()
    table = pa[:, :, :, None] * pb[:, :, None, :]
    return JointModel(correlated.alice_settings, correlated.bob_settings, table, correlated.observable)


def correlation(m: JointModel) -> np.ndarray:
    """Expectation ``E[a b]`` per setting pair."""
    ab = np.outer(OUTCOMES, OUTCOMES)
    return np.einsum("ijab,ab->ij", m.table, ab)


def phase_for_probability(p_a: float, visibility: float = 1.0) -> float:
    """Phase in ``[0, pi]`` at which detector A fires with probability ``p_a``."""
    x = (2.0 * p_a - 1.0) / visibility
    if not -1.0 <= x <= 1.0:
        raise ValueError(f"P_A = {p_a} is unreachable at visibility {visibility}")
    return math.acos(x)

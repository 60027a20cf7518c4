"""Statistics for the rotation trial and the sidereal modulation search."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize
from scipy.stats import norm

from .constants import SIDEREAL_DAY
from .experiment import CountTally, EmptyDenominatorError, ScanPoint

MIN_FIT_POINTS = 8


@dataclass(frozen=True)
class ProportionEstimate:
    p_hat: float
    n: int
    ci_low: float
    ci_high: float


def wilson_interval(successes: int, n: int, confidence: float = 0.95) -> ProportionEstimate:
    """Wilson score interval for a binomial proportion."""
    if n < 1:
        raise ValueError(f"need at least one trial, got n={n}")
    if not 0 <= successes <= n:
        raise ValueError(f"successes must lie in [0, n], got {successes} of {n}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    z = norm.ppf(0.5 + confidence / 2)
    p = successes / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    low = 0.0 if successes == 0 else max(0.0, centre - half)
    high = 1.0 if successes == n else min(1.0, centre + half)
    # rounding can nudge the bounds across p at the extremes
    return ProportionEstimate(p, n, min(low, p), max(high, p))


@dataclass(frozen=True)
class TestResult:
    z: float
    p_value: float


def two_proportion_test(t_before: CountTally, t_after: CountTally) -> TestResult:
    """Pooled two-sided z-test of ``P_A`` before against ``P_A`` after rotation.

    Positive ``z`` means ``P_A`` dropped after the turn.
    """
    n1, n2 = t_before.heralds_a, t_after.heralds_a
    if n1 == 0 or n2 == 0:
        raise EmptyDenominatorError("both tallies need a nonzero R_H(A)")
    x1, x2 = t_before.coinc_a, t_after.coinc_a
    pooled = (x1 + x2) / (n1 + n2)
    se = math.sqrt(pooled * (1 - pooled) * (1 / n1 + 1 / n2))
    if se == 0.0:
        return TestResult(0.0, 1.0)
    z = (x1 / n1 - x2 / n2) / se
    return TestResult(z, float(2 * norm.sf(abs(z))))


def required_heralds(
    p0: float, p1: float, significance_sigmas: float = 5.0, power: float = 0.99
) -> int:
    """Heralds per acquisition for the pooled two-proportion test to see ``p1 - p0``.

    Normal approximation without continuity correction: the test rejects at
    ``|z| > significance_sigmas`` and must do so with probability ``power``.
    """
    if p0 == p1:
        raise ValueError("p0 and p1 coincide; no sample size detects a zero effect")
    for p in (p0, p1):
        if not 0.0 < p < 1.0:
            raise ValueError(f"probabilities must lie in (0, 1), got {p}")
    if not 0.0 < power < 1.0 or significance_sigmas <= 0:
        raise ValueError("power must lie in (0, 1) and significance must be positive")
    z_b = norm.ppf(power)
    p_bar = 0.5 * (p0 + p1)
    spread_null = math.sqrt(2 * p_bar * (1 - p_bar))
    spread_alt = math.sqrt(p0 * (1 - p0) + p1 * (1 - p1))
    n = ((significance_sigmas * spread_null + z_b * spread_alt) / (p1 - p0)) ** 2
    return math.ceil(n - 1e-9)


@dataclass(frozen=True)
class FitResult:
    """Fit of ``P_A = 1/2 + amplitude * cos(2 theta + phase_offset)``.

    ``period`` is the best-fit repetition time of ``P_A(t)`` (NaN when no
    times were supplied). ``coefficients`` are ``(A cos phi, -A sin phi)``,
    the linear parameters actually solved for, with ``covariance``.
    """

    amplitude: float
    phase_offset: float
    period: float
    chi2: float
    dof: int
    amplitude_err: float
    coefficients: tuple[float, float]
    covariance: np.ndarray


def _design(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return np.column_stack([np.cos(2 * theta), np.sin(2 * theta)])


def binomial_sigma(p_a, n) -> np.ndarray:
    """Per-point standard error of a rate estimate, floored away from zero."""
    p_a = np.asarray(p_a, dtype=float)
    n = np.asarray(n, dtype=float)
    return np.sqrt(np.maximum(p_a * (1 - p_a), 1.0 / n) / n)


def series_arrays(series: Sequence[ScanPoint]):
    """Columns ``(t, theta_eff, p_a, sigma)`` of a scan."""
    t = np.array([p.t for p in series], dtype=float)
    theta = np.array([p.theta_eff for p in series], dtype=float)
    p_a = np.array([p.p_a for p in series], dtype=float)
    n = np.array([p.n_heralds for p in series], dtype=float)
    return t, theta, p_a, binomial_sigma(p_a, n)


def _harmonic_rss(t, y, w, period, harmonics):
    phase = 2 * math.pi * np.outer(t, np.arange(1, harmonics + 1)) / period
    X = np.column_stack([np.ones_like(t), np.cos(phase), np.sin(phase)]) * w[:, None]
    coef, *_ = np.linalg.lstsq(X, y * w, rcond=None)
    return float(np.sum((y * w - X @ coef) ** 2))


def estimate_period(
    t,
    y,
    sigma=None,
    *,
    bounds: tuple[float, float] = (0.75 * SIDEREAL_DAY, 1.25 * SIDEREAL_DAY),
    harmonics: int = 2,
    grid: int = 200,
) -> float:
    """Repetition time of ``y(t)`` from a harmonic-series fit.

    A truncated Fourier series is fitted for each trial period on a grid
    inside ``bounds``; the best grid point is refined with a bounded scalar
    minimization of the weighted residual sum of squares. The window must
    exclude 1/2 and 3/2 of the true period, where a few harmonics fit the
    same waveform equally well.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.ones_like(y) if sigma is None else 1.0 / np.asarray(sigma, dtype=float)
    if t.size < 2 * harmonics + 2:
        return math.nan
    periods = np.linspace(bounds[0], bounds[1], grid)
    rss = np.array([_harmonic_rss(t, y, w, p, harmonics) for p in periods])
    k = int(np.argmin(rss))
    lo = periods[max(k - 1, 0)]
    hi = periods[min(k + 1, grid - 1)]
    best = optimize.minimize_scalar(
        lambda p: _harmonic_rss(t, y, w, p, harmonics),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-6 * periods[k]},
    )
    return float(best.x)


def fit_sidereal(
    theta_eff,
    p_a,
    sigma=None,
    t=None,
) -> FitResult:
    """Linear least-squares fit of the ``cos 2 theta`` modulation of ``P_A``.

    Parameters
    ----------
    theta_eff : array_like
        Arm-to-drift angle of each point.
    p_a : array_like
        Measured (or expected) ``P_A`` at each point.
    sigma : array_like, optional
        Per-point standard errors. Without them every point has unit weight,
        ``chi2`` is the plain residual sum of squares and the parameter
        errors are scaled by the residual variance.
    t : array_like, optional
        Sample times; when given, the repetition period of ``P_A(t)`` is
        estimated as well.

    Raises
    ------
    ValueError
        With fewer than eight points.
    """
    theta = np.asarray(theta_eff, dtype=float)
    y = np.asarray(p_a, dtype=float) - 0.5
    if theta.size < MIN_FIT_POINTS or theta.shape != y.shape:
        raise ValueError(
            f"need at least {MIN_FIT_POINTS} matching points, got {theta.size} and {y.size}"
        )
    X = _design(theta)
    w = np.ones_like(y) if sigma is None else 1.0 / np.asarray(sigma, dtype=float)
    Xw, yw = X * w[:, None], y * w
    coef, *_ = np.linalg.lstsq(Xw, yw, rcond=None)
    resid = yw - Xw @ coef
    chi2 = float(resid @ resid)
    dof = theta.size - 2
    cov = np.linalg.pinv(Xw.T @ Xw)
    if sigma is None:
        cov = cov * chi2 / dof
    c1, c2 = (float(v) for v in coef)
    amplitude = math.hypot(c1, c2)
    if amplitude > 0:
        g = np.array([c1, c2]) / amplitude
        amp_err = math.sqrt(max(float(g @ cov @ g), 0.0))
    else:
        amp_err = math.sqrt(max(float(np.trace(cov)) / 2, 0.0))
    period = math.nan if t is None else estimate_period(t, p_a, sigma)
    return FitResult(
        amplitude=amplitude,
        phase_offset=math.atan2(-c2, c1) % (2 * math.pi),
        period=period,
        chi2=chi2,
        dof=dof,
        amplitude_err=amp_err,
        coefficients=(c1, c2),
        covariance=cov,
    )


def fit_series(series: Sequence[ScanPoint], *, weighted: bool = True, with_period: bool = True) -> FitResult:
    t, theta, p_a, sigma = series_arrays(series)
    return fit_sidereal(theta, p_a, sigma if weighted else None, t if with_period else None)


@dataclass(frozen=True)
class BootstrapInterval:
    low: float
    high: float
    confidence: float
    n_resamples: int


def bootstrap_ci(
    theta_eff,
    p_a,
    sigma=None,
    *,
    n_resamples: int = 1000,
    seed: int = 0,
    confidence: float = 0.95,
) -> BootstrapInterval:
    """Bootstrap interval for the modulation amplitude, resampling time points.

    Each resample refits the two linear coefficients ``(A cos phi,
    -A sin phi)``. The replicates within the ``confidence`` percentile of
    Mahalanobis distance from the full-sample fit form a confidence region
    for the coefficient vector. The interval runs from the smallest to the
    largest amplitude in that region, and starts at 0 whenever the origin
    (no modulation) falls inside it. Working in the coefficient plane keeps
    the interval able to cover zero, which a percentile of the nonnegative
    amplitude alone never does.
    """
    if n_resamples < 100:
        raise ValueError(f"need at least 100 resamples, got {n_resamples}")
    theta = np.asarray(theta_eff, dtype=float)
    full = fit_sidereal(theta, p_a, sigma)
    y = np.asarray(p_a, dtype=float) - 0.5
    w2 = np.ones_like(y) if sigma is None else np.asarray(sigma, dtype=float) ** -2
    X = _design(theta)
    n = theta.size

    rng = np.random.default_rng(seed)
    counts = rng.multinomial(n, np.full(n, 1.0 / n), size=n_resamples).astype(float)
    weights = counts * w2
    xtx = np.einsum("bi,ij,ik->bjk", weights, X, X)
    xty = np.einsum("bi,ij,i->bj", weights, X, y)
    # resamples drawing too few distinct angles are singular; pinv keeps them finite
    reps = np.einsum("bjk,bk->bj", np.linalg.pinv(xtx), xty)

    centre = np.array(full.coefficients)
    amps = np.hypot(reps[:, 0], reps[:, 1])
    spread = np.cov(reps, rowvar=False)
    scale = max(full.amplitude, float(np.max(np.abs(reps))), 1e-300)
    if np.max(np.linalg.eigvalsh(spread)) <= (1e-12 * scale) ** 2:
        return BootstrapInterval(full.amplitude, full.amplitude, confidence, n_resamples)
    prec = np.linalg.pinv(spread)
    diff = reps - centre
    dist = np.einsum("bj,jk,bk->b", diff, prec, diff)
    radius = np.quantile(dist, confidence)
    inside = dist <= radius
    origin = float(centre @ prec @ centre)
    low = 0.0 if origin <= radius else float(amps[inside].min())
    high = float(amps[inside].max())
    return BootstrapInterval(low, high, confidence, n_resamples)


def bootstrap_series(series: Sequence[ScanPoint], **kwargs) -> BootstrapInterval:
    _, theta, p_a, sigma = series_arrays(series)
    return bootstrap_ci(theta, p_a, sigma, **kwargs)

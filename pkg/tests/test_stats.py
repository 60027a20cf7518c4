import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from collapse_lab.constants import SIDEREAL_DAY
from collapse_lab.experiment import CountTally, EmptyDenominatorError, analytic_scan
from collapse_lab.stats import (
    bootstrap_ci,
    bootstrap_series,
    estimate_period,
    fit_series,
    fit_sidereal,
    required_heralds,
    two_proportion_test,
    wilson_interval,
)

def tally(x, n):
    return CountTally(n, x, n, n - x)


def noisy_series(amplitude, phase, n, rng, points=145):
    theta = np.linspace(0, 2 * np.pi, points, endpoint=False) + 0.3
    p = 0.5 + amplitude * np.cos(2 * theta + phase)
    p_hat = rng.binomial(n, p) / n
    sigma = np.sqrt(p_hat * (1 - p_hat) / n)
    return theta, p_hat, sigma


@pytest.mark.parametrize("x,n", [(0, 100), (1, 100), (50, 100), (99, 100), (37, 1000), (5000, 10000)])
def test_wilson_matches_statsmodels(x, n):
    proportion = pytest.importorskip("statsmodels.stats.proportion")
    lo, hi = proportion.proportion_confint(x, n, alpha=0.05, method="wilson")
    est = wilson_interval(x, n)
    assert est.ci_low == pytest.approx(lo, abs=1e-12)
    assert est.ci_high == pytest.approx(hi, abs=1e-12)


def test_wilson_boundaries():
    assert wilson_interval(0, 100).ci_low == 0.0
    assert wilson_interval(0, 100).ci_high == pytest.approx(0.03699349820698568, rel=1e-12)
    assert wilson_interval(100, 100).ci_high == 1.0
    with pytest.raises(ValueError):
        wilson_interval(3, 0)
    with pytest.raises(ValueError):
        wilson_interval(11, 10)


def test_wilson_coverage():
    rng = np.random.default_rng(7)
    rates = []
    for p in (0.01, 0.1, 0.25, 0.5, 0.9):
        for n in (50, 200, 1000):
            xs = rng.binomial(n, p, size=2000)
            hits = 0
            for x in xs:
                est = wilson_interval(int(x), n)
                hits += est.ci_low <= p <= est.ci_high
            rates.append(hits / xs.size)
    # Wilson dips to about 91% when n p is near 1
    assert np.mean(rates) >= 0.93
    assert min(rates) >= 0.90


def test_z_test_against_statsmodels():
    proportions_ztest = pytest.importorskip("statsmodels.stats.proportion").proportions_ztest

    res = two_proportion_test(tally(5000, 10_000), tally(2500, 10_000))
    z_ref, p_ref = proportions_ztest([5000, 2500], [10_000, 10_000])
    assert res.z == pytest.approx(z_ref, rel=1e-12)
    assert res.z == pytest.approx(36.51483716701107, rel=1e-12)
    assert res.p_value == pytest.approx(p_ref, abs=1e-300)
    assert res.p_value < 1e-200


def test_z_test_identical_and_swap():
    t = tally(4321, 10_000)
    assert two_proportion_test(t, t).z == 0.0
    assert two_proportion_test(t, t).p_value == 1.0
    a, b = tally(480, 1000), tally(530, 1000)
    assert two_proportion_test(a, b).z == -two_proportion_test(b, a).z
    assert two_proportion_test(a, b).p_value == two_proportion_test(b, a).p_value
    assert two_proportion_test(tally(0, 10), tally(0, 10)).p_value == 1.0
    with pytest.raises(EmptyDenominatorError):
        two_proportion_test(CountTally(), t)


def test_z_test_null_distribution():
    rng = np.random.default_rng(3)
    n = 1_000_000
    xs = rng.binomial(n, 0.5, size=(200, 2))
    passes = sum(abs(two_proportion_test(tally(int(a), n), tally(int(b), n)).z) < 5 for a, b in xs)
    assert passes >= 198


def test_required_heralds_default():
    assert required_heralds(0.5, 0.25) == 394


def brute_force_power(p0, p1, n, z_crit=5.0):
    # exact power of the pooled test, summing over the two binomials
    from scipy.stats import binom

    x = np.arange(n + 1)
    w0, w1 = binom.pmf(x, n, p0), binom.pmf(x, n, p1)
    X0, X1 = np.meshgrid(x, x, indexing="ij")
    pooled = (X0 + X1) / (2 * n)
    se = np.sqrt(pooled * (1 - pooled) * 2 / n)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, (X0 - X1) / n / se, 0.0)
    return float(np.sum(np.outer(w0, w1) * (np.abs(z) > z_crit)))


def test_required_heralds_power_is_close_to_target():
    n = required_heralds(0.5, 0.25)
    assert brute_force_power(0.5, 0.25, n) == pytest.approx(0.99, abs=0.005)
    assert brute_force_power(0.5, 0.25, n // 2) < 0.9


@given(
    st.floats(0.05, 0.95),
    st.floats(0.01, 0.2),
)
@settings(max_examples=50, deadline=None)
def test_required_heralds_monotone_and_symmetric(p0, gap):
    p1 = p0 - gap if p0 - gap > 0.01 else p0 + gap
    assert required_heralds(p0, p1) == required_heralds(p1, p0)
    closer = p0 + 0.5 * (p1 - p0)
    assert required_heralds(p0, closer) >= required_heralds(p0, p1)
    assert required_heralds(p0, p1, 6.0) >= required_heralds(p0, p1, 5.0)
    assert required_heralds(p0, p1, power=0.999) >= required_heralds(p0, p1)


def test_required_heralds_rejects():
    with pytest.raises(ValueError):
        required_heralds(0.3, 0.3)
    with pytest.raises(ValueError):
        required_heralds(0.0, 0.3)


def test_fit_pure_cosine():
    theta = np.linspace(0, np.pi, 12, endpoint=False)
    fit = fit_sidereal(theta, 0.5 + 0.2 * np.cos(2 * theta + 0.7))
    assert fit.amplitude == pytest.approx(0.2, abs=1e-12)
    assert fit.phase_offset == pytest.approx(0.7, abs=1e-12)
    assert fit.chi2 == pytest.approx(0.0, abs=1e-20)
    assert fit.dof == 10
    assert math.isnan(fit.period)


def test_fit_needs_eight_points():
    with pytest.raises(ValueError):
        fit_sidereal(np.arange(7.0), np.full(7, 0.5))


def test_fit_recovers_injected_signal():
    rng = np.random.default_rng(2024)
    hits_a = hits_phi = 0
    for _ in range(100):
        theta, p, sigma = noisy_series(0.05, 1.1, 100_000, rng)
        fit = fit_sidereal(theta, p, sigma)
        hits_a += abs(fit.amplitude - 0.05) <= 5 * fit.amplitude_err
        phi_err = math.sqrt(fit.covariance.trace() / 2) / fit.amplitude
        d = (fit.phase_offset - 1.1 + math.pi) % (2 * math.pi) - math.pi
        hits_phi += abs(d) <= 5 * phi_err
    assert hits_a == 100 and hits_phi == 100


def test_fit_null_signal():
    rng = np.random.default_rng(5)
    theta, p, sigma = noisy_series(0.0, 0.0, 100_000, rng)
    fit = fit_sidereal(theta, p, sigma)
    assert fit.amplitude < 5 * fit.amplitude_err
    assert fit.chi2 / fit.dof == pytest.approx(1.0, abs=0.5)


def test_period_of_analytic_scan(sky_scan_cfg):
    series = analytic_scan(sky_scan_cfg, 3 * 86400.0, 1800.0)
    fit = fit_series(series)
    assert fit.period == pytest.approx(SIDEREAL_DAY, rel=1e-4)


def test_period_of_plain_sinusoid():
    t = np.linspace(0, 2 * SIDEREAL_DAY, 200)
    y = 0.5 + 0.1 * np.cos(2 * np.pi * t / (1.1 * SIDEREAL_DAY) + 0.4)
    assert estimate_period(t, y) == pytest.approx(1.1 * SIDEREAL_DAY, rel=1e-6)


def test_bootstrap_degenerate_on_exact_series():
    theta = np.linspace(0, 2 * np.pi, 145, endpoint=False)
    p = 0.5 + 0.1 * np.cos(2 * theta + 2.0)
    ci = bootstrap_ci(theta, p, n_resamples=200)
    assert ci.low == pytest.approx(0.1, rel=1e-9)
    assert ci.high == pytest.approx(0.1, rel=1e-9)


def test_bootstrap_on_analytic_scan(sky_scan_cfg):
    # the drift phase is cos 2 theta only to first order, so the spread is nonzero
    series = analytic_scan(sky_scan_cfg, 86400.0, 600.0)
    fit = fit_series(series, with_period=False)
    ci = bootstrap_series(series, n_resamples=200)
    assert ci.low <= fit.amplitude <= ci.high
    assert ci.low > 0


def test_bootstrap_determinism_and_stability():
    rng = np.random.default_rng(8)
    theta, p, sigma = noisy_series(0.02, 0.3, 100_000, rng)
    a = bootstrap_ci(theta, p, sigma, n_resamples=1000, seed=4)
    assert bootstrap_ci(theta, p, sigma, n_resamples=1000, seed=4) == a
    b = bootstrap_ci(theta, p, sigma, n_resamples=2000, seed=5)
    assert a.low == pytest.approx(b.low, abs=1e-2)
    assert a.high == pytest.approx(b.high, abs=1e-2)
    assert a.low <= fit_sidereal(theta, p, sigma).amplitude <= a.high
    with pytest.raises(ValueError):
        bootstrap_ci(theta, p, sigma, n_resamples=50)


def test_bootstrap_null_coverage():
    rng = np.random.default_rng(9)
    contains = 0
    for k in range(100):
        theta, p, sigma = noisy_series(0.0, 0.0, 100_000, rng)
        contains += bootstrap_ci(theta, p, sigma, n_resamples=300, seed=k).low == 0.0
    assert contains >= 88


def test_bootstrap_excludes_zero_for_real_signal():
    rng = np.random.default_rng(10)
    theta, p, sigma = noisy_series(0.05, 0.0, 100_000, rng)
    ci = bootstrap_ci(theta, p, sigma)
    assert ci.low > 0.04 and ci.high < 0.06

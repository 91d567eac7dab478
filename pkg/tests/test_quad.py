import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jcrevival import (
    ConvergenceError,
    InvalidInputError,
    LineIntegralSpec,
    rabi_line_integral,
    rabi_line_integral_longtime,
    substituted_integrand,
    tail_bound,
)
from jcrevival.quad import _envelope_tail

OMEGA_N = 2.98168e5
GAMMA = 2.5021e5


def raw_integrand_times_jacobian(x, t, omega_n, gamma):
    """Integrand in the original variable W, times dW/dx, at 50 digits."""
    with mp.workdps(50):
        x, t, w, g = (mp.mpf(v) for v in (x, t, omega_n, gamma))
        big = mp.sqrt(w**2 + x**2)
        lorentz = g**2 / (4 * (big**2 - w**2) + g**2)
        raw = lorentz * mp.sin(big * t / 2) ** 2 / (big * mp.sqrt(big**2 - w**2))
        return raw * x / big


def trapezoid(t, omega_n, gamma, x_max=4e8, n=10**6):
    x = np.linspace(0.0, x_max, n)
    big = omega_n**2 + x**2
    f = gamma**2 / (4 * x**2 + gamma**2) * np.sin(np.sqrt(big) * t / 2) ** 2 / big
    return (x[1] - x[0]) * (f.sum() - 0.5 * (f[0] + f[-1]))


def test_spec_defaults_and_validation():
    spec = LineIntegralSpec(1e-5, 3e5, 2e5)
    assert spec.rel_tol == 1e-9
    assert spec.abs_tol == pytest.approx(1e-15 / 3e5)
    for bad in [dict(t=-1.0), dict(omega_n=0.0), dict(gamma=-2.0), dict(rel_tol=0.0), dict(abs_tol=2.0)]:
        args = dict(t=1e-5, omega_n=3e5, gamma=2e5) | bad
        with pytest.raises(InvalidInputError):
            LineIntegralSpec(**args)


def test_integrand_vanishes_at_t0():
    spec = LineIntegralSpec(0.0, OMEGA_N, GAMMA)
    x = np.linspace(0, 1e8, 1001)
    assert not substituted_integrand(x, spec).any()


def test_integrand_endpoint_value():
    t = math.pi / OMEGA_N  # sin^2(omega_n t / 2) = 1 at x = 0
    spec = LineIntegralSpec(t, OMEGA_N, GAMMA)
    assert substituted_integrand(0.0, spec) == pytest.approx(1 / OMEGA_N**2, rel=1e-15)


def test_substitution_matches_raw_integrand():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 1000:
        omega_n = 10 ** rng.uniform(4, 7)
        gamma = 10 ** rng.uniform(4, 6)
        x = omega_n * 10 ** rng.uniform(-3, 3)
        t = 10 ** rng.uniform(-8, -4)
        phase = math.sqrt(omega_n**2 + x**2) * t / 2
        if phase > 1e3 or abs(math.sin(phase)) < 1e-2:
            continue  # ill-conditioned phases compare argument rounding, not the substitution
        got = float(substituted_integrand(x, LineIntegralSpec(t, omega_n, gamma)))
        want = float(raw_integrand_times_jacobian(x, t, omega_n, gamma))
        assert got == pytest.approx(want, rel=1e-12)
        checked += 1


def test_line_integral_zero_time():
    assert rabi_line_integral(LineIntegralSpec(0.0, OMEGA_N, GAMMA)) == 0.0


@pytest.mark.parametrize("t", [3e-7, 4e-6, 2.5e-5, 8e-5])
def test_line_integral_matches_trapezoid(t):
    res = rabi_line_integral(LineIntegralSpec(t, OMEGA_N, GAMMA), full_output=True)
    assert res.value == pytest.approx(trapezoid(t, OMEGA_N, GAMMA), rel=1e-8)
    assert res.error <= max(1e-15 / OMEGA_N, 1e-9 * res.value) * (1 + 1e-12)


def test_late_time_tail_uses_oscillation_bound():
    spec = LineIntegralSpec(5e-4, OMEGA_N, GAMMA)
    late = rabi_line_integral(spec, full_output=True)
    assert late.tail != 0.0
    assert late.tail_error < 1e-2 * tail_bound(late.x_max, spec)
    assert late.tail_error <= 0.25 * 1e-9 * late.value * (1 + 1e-12)


def test_longtime_closed_form():
    assert rabi_line_integral_longtime(OMEGA_N, GAMMA) == pytest.approx(7.7854361990301624e-7, rel=1e-14)
    assert rabi_line_integral_longtime(OMEGA_N, GAMMA) == pytest.approx(7.79e-7, rel=1e-3)


@given(w=st.floats(1e3, 1e8), g=st.floats(1e3, 1e8))
def test_longtime_homogeneity(w, g):
    assert rabi_line_integral_longtime(2 * w, 2 * g) == pytest.approx(rabi_line_integral_longtime(w, g) / 2, rel=1e-14)


def test_longtime_reproduces_calibration_summand():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a0 = 10 ** rng.uniform(4, 7)
        gamma = 10 ** rng.uniform(4, 6)
        g = 10 ** rng.uniform(3, 7)
        nbar = rng.uniform(0, 5)
        n = int(rng.integers(0, 15))
        p = nbar**n * math.exp(-nbar) / math.factorial(n)
        summand = a0 * gamma * math.exp(-nbar) * nbar**n / (2 * g * (4 * g + gamma / math.sqrt(1 + n)) * math.factorial(n))
        omega_n = 2 * math.sqrt(n + 1) * g
        assert a0 * (4 / math.pi) * (n + 1) * p * rabi_line_integral_longtime(omega_n, gamma) == pytest.approx(summand, rel=1e-12)


def test_longtime_is_full_integral_of_half_envelope():
    with mp.workdps(30):
        w, g = mp.mpf(OMEGA_N), mp.mpf(GAMMA)
        quad = mp.quad(lambda x: g**2 / ((4 * x**2 + g**2) * (w**2 + x**2)) / 2, [0, g, w, mp.inf])
    assert rabi_line_integral_longtime(OMEGA_N, GAMMA) == pytest.approx(float(quad), rel=1e-12)


def test_tail_bound_value_and_monotone():
    spec = LineIntegralSpec(1e-5, OMEGA_N, 2.5e5)
    assert tail_bound(1e8, spec) == pytest.approx(5.2083e-15, rel=1e-4)
    xs = np.geomspace(1e5, 1e12, 50)
    bounds = [tail_bound(x, spec) for x in xs]
    assert all(b1 > b2 for b1, b2 in zip(bounds, bounds[1:]))
    assert bounds[-1] < 1e-26
    with pytest.raises(InvalidInputError):
        tail_bound(0.0, spec)


def test_tail_bound_dominates_brute_force_tail():
    rng = np.random.default_rng(11)
    for _ in range(50):
        spec = LineIntegralSpec(10 ** rng.uniform(-7, -4), 10 ** rng.uniform(4.5, 6.5), 10 ** rng.uniform(4.5, 6))
        x_max = 10 ** rng.uniform(5.5, 7)
        x = np.linspace(x_max, 50 * x_max, 2_000_001)
        f = substituted_integrand(x, spec)
        tail = (x[1] - x[0]) * (f.sum() - 0.5 * (f[0] + f[-1]))
        assert tail <= tail_bound(x_max, spec)


def test_envelope_tail_series_matches_quadrature():
    for w, g, x in [(OMEGA_N, GAMMA, 20 * OMEGA_N), (1e5, 5e5, 1e7), (3e6, 1e4, 1e9)]:
        with mp.workdps(30):
            ref = mp.quad(lambda s: mp.mpf(g) ** 2 / ((4 * s**2 + g**2) * (w**2 + s**2)), [x, mp.inf])
        assert _envelope_tail(x, w, g) == pytest.approx(float(ref), rel=1e-13)


@settings(max_examples=40, deadline=None)
@given(t=st.floats(0.0, 3e-4), w=st.floats(5e4, 2e6), g=st.floats(5e4, 1e6))
def test_line_integral_nonnegative_and_bounded(t, w, g):
    value = rabi_line_integral(LineIntegralSpec(t, w, g))
    assert value >= 0.0
    assert value <= 2 * rabi_line_integral_longtime(w, g) * (1 + 1e-9)


def test_running_average_reaches_longtime_limit():
    period = 2 * math.pi / OMEGA_N
    times = np.linspace(500e-6 - 5 * period, 500e-6 + 5 * period, 401)
    values = np.array([rabi_line_integral(LineIntegralSpec(t, OMEGA_N, GAMMA)) for t in times])
    average = np.trapezoid(values, times) / (times[-1] - times[0])
    assert average == pytest.approx(rabi_line_integral_longtime(OMEGA_N, GAMMA), rel=1e-2)


def test_cesaro_average_converges():
    # the [T, 2T] average oscillates in T, so compare the worst case over a band of T
    limit = rabi_line_integral_longtime(OMEGA_N, GAMMA)

    def worst_deviation(t0):
        worst = 0.0
        for big_t in t0 * np.array([1.0, 1.1, 1.2, 1.3]):
            times = np.linspace(big_t, 2 * big_t, 121)
            values = [rabi_line_integral(LineIntegralSpec(t, OMEGA_N, GAMMA)) for t in times]
            worst = max(worst, abs(np.trapezoid(values, times) / big_t - limit))
        return worst

    early, late = worst_deviation(20e-6), worst_deviation(160e-6)
    assert late < early
    assert late < 0.02 * limit


def test_convergence_failure_carries_estimate():
    with pytest.raises(ConvergenceError) as info:
        rabi_line_integral(LineIntegralSpec(5e-4, OMEGA_N, GAMMA, rel_tol=1e-15), max_panels=5000)
    assert math.isfinite(info.value.estimate)
    assert info.value.error > 0


def test_loose_tolerance_returns_midpoint():
    limit = rabi_line_integral_longtime(OMEGA_N, GAMMA)
    res = rabi_line_integral(LineIntegralSpec(3e-5, OMEGA_N, GAMMA, abs_tol=0.5), full_output=True)
    assert res.value == limit and res.error == limit

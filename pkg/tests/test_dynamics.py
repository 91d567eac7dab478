import math

import numpy as np
import pytest

from jcrevival import (
    ConvergenceError,
    DriveField,
    InvalidInputError,
    dynamics,
    sweep,
    transition_probability_multimode,
    transition_probability_singlemode,
)

# quadrature tolerance used for the bound check: rel 1e-9 plus 1e-12 absolute
EPS = 10 * (1e-9 + 1e-12)


def test_zero_time_is_exactly_zero(calibrated):
    sys, loss, drive, cal = calibrated
    assert transition_probability_multimode(0.0, sys, loss, drive, cal) == 0.0
    assert transition_probability_singlemode(0.0, cal.g_prime, drive.nbar, drive.n_max) == 0.0


def test_vacuum_singlemode_is_pure_rabi():
    t = np.linspace(0.0, 50e-6, 77)
    g = 1.3e5
    np.testing.assert_allclose(transition_probability_singlemode(t, g, 0.0, 20), np.sin(g * t) ** 2, rtol=0, atol=1e-15)


def test_singlemode_against_direct_summation():
    # 30-term direct sum, frozen
    assert transition_probability_singlemode(10e-6, 149084.0, 0.85, 30) == pytest.approx(0.73817982657596509, rel=1e-13)
    direct = math.fsum(
        math.exp(-0.85) * 0.85**n / math.factorial(n) * math.sin(149084.0 * 10e-6 * math.sqrt(n + 1)) ** 2
        for n in range(30)
    )
    assert direct == pytest.approx(0.73817982657596509, rel=1e-13)


def test_singlemode_validates_coupling():
    with pytest.raises(InvalidInputError):
        transition_probability_singlemode(1e-6, 0.0, 0.5, 20)


def test_multimode_rejects_negative_time(calibrated_085):
    with pytest.raises(InvalidInputError):
        transition_probability_multimode(-1e-6, *calibrated_085)


def test_first_maximum_near_rabi_half_period(calibrated_085):
    sys, loss, drive, cal = calibrated_085
    series = sweep(np.linspace(0.0, 12e-6, 241), sys, loss, drive, cal)
    t_peak = series.times[np.argmax(series.p_multimode)]
    target = math.pi / cal.omega_rabi
    assert target == pytest.approx(7.75e-6, rel=2e-3)
    assert abs(t_peak / target - 1.0) < 0.15


def test_truncation_insensitive(calibrated_085):
    sys, loss, drive, cal = calibrated_085
    n_big = 2 * drive.n_max
    weights = tuple((n, math.exp(n * math.log(drive.nbar) - drive.nbar - math.lgamma(n + 1))) for n in range(n_big + 1))
    bigger = DriveField(drive.nbar, weights, n_big, drive.tail_tol)
    for t in (3e-6, 15e-6, 64e-6, 97e-6):
        a = transition_probability_multimode(t, sys, loss, drive, cal)
        b = transition_probability_multimode(t, sys, loss, bigger, cal)
        assert abs(a - b) < 1e-8
        s_a = transition_probability_singlemode(t, cal.g_prime, drive.nbar, drive.n_max)
        s_b = transition_probability_singlemode(t, cal.g_prime, drive.nbar, n_big)
        assert abs(s_a - s_b) < 1e-8


def test_curves_bounded(calibrated):
    sys, loss, drive, cal = calibrated
    series = sweep(np.linspace(0.0, 100e-6, 101), sys, loss, drive, cal)
    for p in (series.p_multimode, series.p_singlemode):
        assert p.min() >= -EPS
        assert p.max() <= 1.0 + EPS
    assert series.metadata["t_collapse"] < series.metadata["t_revival"]
    assert series.metadata["g_prime"] == cal.g_prime


def test_single_point_grid(calibrated_085):
    series = sweep([0.0], *calibrated_085)
    assert series.times.tolist() == [0.0]
    assert series.p_multimode.tolist() == [0.0]
    assert series.p_singlemode.tolist() == [0.0]


def test_permuted_grid_matches_sorted(calibrated_085):
    grid = np.linspace(0.0, 80e-6, 17)
    shuffled = np.random.default_rng(3).permutation(grid)
    a = sweep(grid, *calibrated_085)
    b = sweep(shuffled, *calibrated_085)
    np.testing.assert_array_equal(a.times, b.times)
    np.testing.assert_array_equal(a.p_multimode, b.p_multimode)
    np.testing.assert_array_equal(a.p_singlemode, b.p_singlemode)


@pytest.mark.parametrize("grid", [[], [1e-6, 1e-6], [-1e-6, 0.0], [0.0, float("nan")]])
def test_invalid_grids(calibrated_085, grid):
    with pytest.raises(InvalidInputError):
        sweep(grid, *calibrated_085)


def test_process_pool_matches_serial(calibrated_085):
    grid = np.linspace(1e-6, 40e-6, 8)
    serial = sweep(grid, *calibrated_085)
    pooled = sweep(grid, *calibrated_085, workers=2)
    np.testing.assert_array_equal(serial.p_multimode, pooled.p_multimode)


def test_failure_carries_offending_time(calibrated_085, monkeypatch):
    def refuse(spec, **_):
        raise ConvergenceError("panel budget exhausted", estimate=1.0, error=1.0)

    monkeypatch.setattr(dynamics, "rabi_line_integral", refuse)
    with pytest.raises(ConvergenceError) as info:
        sweep([0.0, 2e-6, 4e-6], *calibrated_085)
    assert info.value.t == 2e-6
    assert "t=2e-06" in str(info.value)


def test_series_rejects_unsorted_columns():
    with pytest.raises(InvalidInputError):
        dynamics.TimeSeries(np.array([1.0, 0.0]), np.zeros(2), np.zeros(2))
    with pytest.raises(InvalidInputError):
        dynamics.TimeSeries(np.array([0.0, 1.0]), np.zeros(2), np.zeros(3))

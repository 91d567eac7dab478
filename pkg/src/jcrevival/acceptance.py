"""Exit-criteria checks shared by the pytest acceptance module and ``jcrevival --verb selftest``.

Every check recomputes its quantity from the public API and compares it with a
reference number or an independent oracle at a fixed tolerance.
"""
from __future__ import annotations

import filecmp
import math
import tempfile
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .calibrate import CalibrationProblem, collapse_time, f_of_g, revival_time, solve_coupling
from .dynamics import sweep
from .model import ResonantSystem, field_fwhm, field_spectrum_detuned, net_quality_factor, poisson_weights
from .quad import LineIntegralSpec, rabi_line_integral, rabi_line_integral_longtime
from .report import run_report
from .scenario import Scenario

# Reference values for the two coherent-drive data sets.
REFERENCE = {
    0.85: {"g_prime": 149084.0, "rabi_hz": 64.5457e3, "t_c": (14.5e-6, 15.5e-6), "t_r": (63e-6, 65e-6)},
    1.77: {"g_prime": 152852.0, "rabi_hz": 80.9769e3, "t_c": (12.0e-6, 13.0e-6), "t_r": (73e-6, 75e-6)},
}
REFERENCE_Q_NET = 1.28318e6
SEED = 20220207


@dataclass(frozen=True)
class Check:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.title}: {self.detail}"


@lru_cache(maxsize=None)
def calibrated(nbar: float):
    sys = ResonantSystem()
    problem = CalibrationProblem.from_constants(sys, nbar)
    return sys, problem.loss, problem.drive, solve_coupling(problem)


@lru_cache(maxsize=None)
def curve(nbar: float, t_lo: float = 0.0, t_hi: float = 100e-6, n_points: int = 1001):
    sys, loss, drive, cal = calibrated(nbar)
    return sweep(np.linspace(t_lo, t_hi, n_points), sys, loss, drive, cal)


def check_quality_factor() -> Check:
    q_net = net_quality_factor(ResonantSystem()).q_net
    rel = abs(q_net / REFERENCE_Q_NET - 1.0)
    return Check(1, "net quality factor", rel <= 1e-4, f"Q'={q_net:.6g}, rel dev {rel:.2e} (tol 1e-4)")


def check_calibration_roots() -> Check:
    ok, parts = True, []
    for nbar, ref in REFERENCE.items():
        cal = calibrated(nbar)[3]
        dg = abs(cal.g_prime / ref["g_prime"] - 1.0)
        dr = abs(cal.omega_rabi / (2.0 * math.pi * ref["rabi_hz"]) - 1.0)
        ok &= dg <= 2e-3 and dr <= 2e-3
        parts.append(f"nbar={nbar}: g'={cal.g_prime:.6g} ({dg:.1e}), Omega_R/2pi={cal.omega_rabi / (2 * math.pi):.6g} ({dr:.1e})")
    return Check(2, "calibration roots", ok, "; ".join(parts) + " (tol 2e-3)")


def check_collapse_revival() -> Check:
    ok, parts = True, []
    for nbar, ref in REFERENCE.items():
        g = calibrated(nbar)[3].g_prime
        tc, tr = collapse_time(g, nbar), revival_time(g, nbar)
        ok &= ref["t_c"][0] <= tc <= ref["t_c"][1] and ref["t_r"][0] <= tr <= ref["t_r"][1]
        parts.append(f"nbar={nbar}: t_c={tc * 1e6:.4g} us, t_r={tr * 1e6:.4g} us")
    return Check(3, "collapse/revival times", ok, "; ".join(parts))


def check_two_route_identity() -> Check:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for nbar in REFERENCE:
        sys, loss, drive, _ = calibrated(nbar)
        for g in 10.0 ** rng.uniform(3.0, 7.0, size=10):
            direct = f_of_g(g, sys, loss, drive)
            via_integral = math.fsum(
                sys.einstein_a * (4.0 / math.pi) * (n + 1) * p * rabi_line_integral_longtime(2.0 * math.sqrt(n + 1) * g, loss.gamma)
                for n, p in drive.weights
            )
            worst = max(worst, abs(direct / via_integral - 1.0))
    return Check(4, "f(g) vs long-time integral route", worst <= 1e-10, f"20 draws, worst rel dev {worst:.2e} (tol 1e-10)")


def trapezoid_oracle(t: float, omega_n: float, gamma: float, x_max: float = 4e8, n: int = 10**6) -> float:
    """Fixed-step trapezoid of the substituted integrand, written independently of the kernels."""
    x = np.linspace(0.0, x_max, n)
    x2 = x * x
    big = omega_n**2 + x2
    f = gamma**2 / (4.0 * x2 + gamma**2) * np.sin(np.sqrt(big) * t / 2.0) ** 2 / big
    return (x[1] - x[0]) * (f.sum() - 0.5 * (f[0] + f[-1]))


def check_quadrature_oracle() -> Check:
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(20):
        t = 10.0 ** rng.uniform(-6.0, -4.0)
        omega_n = 10.0 ** rng.uniform(5.0, 6.0)
        gamma = 10.0 ** rng.uniform(5.0, math.log10(5e5))
        adaptive = rabi_line_integral(LineIntegralSpec(t, omega_n, gamma))
        worst = max(worst, abs(adaptive / trapezoid_oracle(t, omega_n, gamma) - 1.0))
    return Check(5, "adaptive quadrature vs trapezoid oracle", worst <= 1e-8, f"20 specs, worst rel dev {worst:.2e} (tol 1e-8)")


def check_long_time_normalization() -> Check:
    ok, parts = True, []
    for nbar in REFERENCE:
        series = curve(nbar, 400e-6, 500e-6, 201)
        mean = float(np.mean(series.p_multimode))
        ok &= abs(mean - 0.5) <= 0.01
        parts.append(f"nbar={nbar}: <P>={mean:.4f}")
    return Check(6, "window mean over [400, 500] us", ok, "; ".join(parts) + " (0.50 +/- 0.01)")


def _swing(series, t_lo: float, t_hi: float) -> float:
    return float(np.ptp(series.p_multimode[series.window(t_lo, t_hi)]))


def check_collapse_morphology() -> Check:
    series = curve(1.77)
    tc, tr = series.metadata["t_collapse"], series.metadata["t_revival"]
    early = _swing(series, 0.0, 10e-6)
    collapsed = _swing(series, tc, tc + 10e-6)
    revived = _swing(series, tr - 10e-6, tr + 10e-6)
    ok = collapsed < early and collapsed < revived
    return Check(7, "collapse then revival (nbar=1.77)", ok,
                 f"swing early={early:.3f}, collapse={collapsed:.3f}, revival={revived:.3f}")


def check_model_divergence() -> Check:
    ok, parts = True, []
    for nbar in REFERENCE:
        series = curve(nbar)
        gap = np.abs(series.p_multimode - series.p_singlemode)
        short = float(gap[series.window(0.0, 10e-6)].mean())
        late = float(gap[series.window(50e-6, 90e-6)].mean())
        ok &= short < late
        parts.append(f"nbar={nbar}: short={short:.4f} < late={late:.4f}")
    return Check(8, "single- vs multi-mode divergence", ok, "; ".join(parts))


def _bisect(fun, lo: float, hi: float) -> float:
    f_lo = fun(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = fun(mid)
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def check_fwhm() -> Check:
    sys = ResonantSystem()
    peak = float(field_spectrum_detuned(0.0, sys))
    excess = lambda d: float(field_spectrum_detuned(d, sys)) - 0.5 * peak  # noqa: E731
    span = 10.0 * sys.omega0 / sys.q_bare
    width = _bisect(excess, 0.0, span) - _bisect(excess, -span, 0.0)
    rel = abs(width / field_fwhm(sys) - 1.0)
    return Check(9, "Lorentzian FWHM", rel <= 1e-9, f"measured {width:.10g} rad/s vs omega0/Q, rel dev {rel:.1e} (tol 1e-9)")


def check_determinism() -> Check:
    scenario = Scenario(name="determinism", nbar=0.85)
    with tempfile.TemporaryDirectory() as tmp:
        first = run_report(scenario, Path(tmp) / "a")
        second = run_report(scenario, Path(tmp) / "b")
        same = all(filecmp.cmp(first[k], second[k], shallow=False) for k in first)
    return Check(10, "report determinism", same, f"{', '.join(sorted(first))} byte-identical: {same}")


CHECKS = (
    check_quality_factor,
    check_calibration_roots,
    check_collapse_revival,
    check_two_route_identity,
    check_quadrature_oracle,
    check_long_time_normalization,
    check_collapse_morphology,
    check_model_divergence,
    check_fwhm,
    check_determinism,
)


def run_all(echo=print) -> list[Check]:
    results = []
    for check in CHECKS:
        result = check()
        echo(result.line())
        results.append(result)
    return results

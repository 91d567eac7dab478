"""Renormalized coupling from the long-time condition P(inf) = 1/2, plus collapse/revival times."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidInputError, NoRootError
from .model import Calibration, DriveField, LossModel, ResonantSystem, net_quality_factor, poisson_weights

DEFAULT_BRACKET = (1e3, 1e7)
DEFAULT_REL_TOL = 1e-10
MAX_EXPANSIONS = 12


def f_of_g(g: float, sys: ResonantSystem, loss: LossModel, drive: DriveField) -> float:
    """Long-time transition probability as a function of the coupling constant.

    Each Poisson term contributes ``A(0) G p_n / (2 g (4 g + G / sqrt(n+1)))``
    with G the net linewidth; every term falls strictly with g.
    """
    if not g > 0.0:
        raise InvalidInputError(f"coupling must be positive, got {g!r}")
    gamma = loss.gamma
    sqrt_n1 = np.sqrt(drive.n + 1.0)
    terms = sys.einstein_a * gamma * drive.p / (2.0 * g * (4.0 * g + gamma / sqrt_n1))
    return float(math.fsum(terms))


@dataclass(frozen=True)
class CalibrationProblem:
    sys: ResonantSystem
    loss: LossModel
    drive: DriveField
    bracket: tuple[float, float] = DEFAULT_BRACKET
    rel_tol: float = DEFAULT_REL_TOL

    def __post_init__(self) -> None:
        lo, hi = self.bracket
        if not 0.0 < lo < hi:
            raise InvalidInputError(f"bracket must satisfy 0 < g_lo < g_hi, got {self.bracket!r}")

    @classmethod
    def from_constants(cls, sys: ResonantSystem, nbar: float, tail_tol: float = 1e-10, **kwargs):
        return cls(sys, net_quality_factor(sys), poisson_weights(nbar, tail_tol), **kwargs)


def _expand_bracket(fun, lo: float, hi: float) -> tuple[float, float]:
    """Widen by decades until fun(lo) > 0 > fun(hi)."""
    for _ in range(MAX_EXPANSIONS + 1):
        f_lo, f_hi = fun(lo), fun(hi)
        if f_lo > 0.0 > f_hi:
            return lo, hi
        if f_lo <= 0.0:
            lo /= 10.0
        if f_hi >= 0.0:
            hi *= 10.0
    raise NoRootError(
        f"f(g) - 1/2 keeps one sign on [{lo:.3e}, {hi:.3e}] rad/s after {MAX_EXPANSIONS} expansions"
    )


def solve_coupling(problem: CalibrationProblem) -> Calibration:
    """Root of f(g') = 1/2, bracketed and refined with Brent's method."""
    def excess(g: float) -> float:
        return f_of_g(g, problem.sys, problem.loss, problem.drive) - 0.5

    lo, hi = _expand_bracket(excess, *problem.bracket)
    g_prime = brentq(excess, lo, hi, xtol=1e-300, rtol=problem.rel_tol, maxiter=500)
    return Calibration(g_prime=g_prime, nbar=problem.drive.nbar, residual=excess(g_prime))


def collapse_time(g_prime: float, nbar: float) -> float:
    """Time for the Rabi components one standard deviation apart in n to drift pi out of phase.

    Returns ``math.inf`` for the vacuum drive, where the photon-number spread
    vanishes and nothing dephases.
    """
    _check(g_prime, nbar)
    spread = math.sqrt(nbar)
    gap = math.sqrt(nbar + spread + 1.0) - math.sqrt(nbar - spread + 1.0)
    if gap == 0.0:
        return math.inf
    return math.pi / (2.0 * g_prime * gap)


def revival_time(g_prime: float, nbar: float) -> float:
    """Time for neighbouring photon-number components to come back into phase."""
    _check(g_prime, nbar)
    return 2.0 * math.pi / (2.0 * g_prime * (math.sqrt(nbar + 2.0) - math.sqrt(nbar + 1.0)))


def _check(g_prime: float, nbar: float) -> None:
    if not g_prime > 0.0:
        raise InvalidInputError(f"g_prime must be positive, got {g_prime!r}")
    if not nbar >= 0.0:
        raise InvalidInputError(f"nbar must be non-negative, got {nbar!r}")

"""Time-domain transition probabilities: multi-mode lossy model and single-mode lossless reference."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .calibrate import collapse_time, revival_time
from .errors import ConvergenceError, InvalidInputError
from .model import Calibration, DriveField, LossModel, ResonantSystem
from .quad import DEFAULT_REL_TOL, LineIntegralSpec, rabi_line_integral, rabi_line_integral_longtime

DEFAULT_P_ABS_TOL = 1e-12
DEFAULT_T_END = 100e-6
DEFAULT_N_POINTS = 1001


def default_grid() -> np.ndarray:
    return np.linspace(0.0, DEFAULT_T_END, DEFAULT_N_POINTS)


def series_coefficients(sys: ResonantSystem, drive: DriveField) -> np.ndarray:
    """Weights ``A(0) (4/pi) p_n (n+1)`` multiplying each line integral."""
    return sys.einstein_a * (4.0 / math.pi) * drive.p * (drive.n + 1.0)


def transition_probability_multimode(
    t: float,
    sys: ResonantSystem,
    loss: LossModel,
    drive: DriveField,
    cal: Calibration,
    *,
    rel_tol: float = DEFAULT_REL_TOL,
    p_abs_tol: float = DEFAULT_P_ABS_TOL,
) -> float:
    """Excited-to-ground transition probability summed over photon numbers and cavity modes.

    The absolute budget ``p_abs_tol`` is shared evenly between the Poisson
    terms, so strongly suppressed terms are integrated only as accurately as
    their weight demands.  Total error is at most ``p_abs_tol + rel_tol * P``.
    """
    if not (t >= 0.0 and math.isfinite(t)):
        raise InvalidInputError(f"t must be non-negative, got {t!r}")
    if t == 0.0:
        return 0.0
    coeffs = series_coefficients(sys, drive)
    omegas = cal.omega_n(drive.n)
    live = np.flatnonzero(coeffs > 0.0)
    share = p_abs_tol / max(1, live.size)
    terms = []
    for n in live:
        c, w = float(coeffs[n]), float(omegas[n])
        abs_tol = max(1e-15 / w, share / c)
        if abs_tol >= rabi_line_integral_longtime(w, loss.gamma):
            abs_tol = 0.5
        spec = LineIntegralSpec(t, w, loss.gamma, rel_tol=rel_tol, abs_tol=abs_tol)
        try:
            terms.append(c * rabi_line_integral(spec))
        except ConvergenceError as exc:
            raise ConvergenceError(f"term n={n} at t={t!r}: {exc}", exc.estimate, exc.error, t=t) from exc
    return math.fsum(terms)


def transition_probability_singlemode(t, g: float, nbar: float, n_max: int):
    """Lossless single-mode Jaynes-Cummings probability, ``sum_n p_n sin^2(g t sqrt(n+1))``.

    Vectorized over ``t``.
    """
    if not g > 0.0:
        raise InvalidInputError(f"g must be positive, got {g!r}")
    n = np.arange(n_max + 1)
    if nbar == 0.0:
        p = (n == 0).astype(float)
    else:
        log_p = n * math.log(nbar) - nbar - np.array([math.lgamma(k + 1) for k in n])
        p = np.exp(log_p)
    t_arr = np.asarray(t, dtype=float)
    s = np.sin(g * t_arr[..., None] * np.sqrt(n + 1.0))
    out = (s * s) @ p
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    p_multimode: np.ndarray
    p_singlemode: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not (len(self.times) == len(self.p_multimode) == len(self.p_singlemode)):
            raise InvalidInputError("time series columns differ in length")
        if np.any(np.diff(self.times) <= 0.0):
            raise InvalidInputError("times must be strictly increasing")

    def window(self, t_lo: float, t_hi: float) -> np.ndarray:
        return (self.times >= t_lo) & (self.times <= t_hi)


def _point(t, sys, loss, drive, cal, rel_tol, p_abs_tol):
    return transition_probability_multimode(t, sys, loss, drive, cal, rel_tol=rel_tol, p_abs_tol=p_abs_tol)


def sweep(
    t_grid,
    sys: ResonantSystem,
    loss: LossModel,
    drive: DriveField,
    cal: Calibration,
    *,
    rel_tol: float = DEFAULT_REL_TOL,
    p_abs_tol: float = DEFAULT_P_ABS_TOL,
    workers: int | None = None,
) -> TimeSeries:
    """Evaluate both models on a time grid (seconds).

    The grid is sorted before evaluation; duplicate times are rejected.
    ``workers > 1`` fans the multi-mode points out to a process pool, which
    leaves results unchanged because each point is computed independently.
    """
    times = np.sort(np.asarray(t_grid, dtype=float).ravel())
    if times.size == 0:
        raise InvalidInputError("time grid is empty")
    if times[0] < 0.0 or not np.all(np.isfinite(times)):
        raise InvalidInputError("time grid must be finite and non-negative")
    if np.any(np.diff(times) <= 0.0):
        raise InvalidInputError("time grid contains duplicate points")

    point = partial(_point, sys=sys, loss=loss, drive=drive, cal=cal, rel_tol=rel_tol, p_abs_tol=p_abs_tol)
    if workers and workers > 1 and times.size > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            multimode = list(pool.map(point, times.tolist(), chunksize=max(1, times.size // (4 * workers))))
    else:
        multimode = [point(t) for t in times.tolist()]

    singlemode = transition_probability_singlemode(times, cal.g_prime, drive.nbar, drive.n_max)
    metadata = {
        "g_prime": cal.g_prime,
        "omega_rabi": cal.omega_rabi,
        "nbar": drive.nbar,
        "n_max": drive.n_max,
        "q_net": loss.q_net,
        "gamma": loss.gamma,
        "t_collapse": collapse_time(cal.g_prime, drive.nbar),
        "t_revival": revival_time(cal.g_prime, drive.nbar),
        "system": sys,
        "rel_tol": rel_tol,
        "p_abs_tol": p_abs_tol,
    }
    return TimeSeries(times, np.array(multimode), np.atleast_1d(singlemode), metadata)

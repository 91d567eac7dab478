"""Lorentz-filtered Rabi line integral over the continuum of cavity modes.

For photon number n the transition probability needs

    I_n(t) = int_{w_n}^inf  L(W) sin^2(W t / 2) / (W sqrt(W^2 - w_n^2)) dW,
    L(W)   = G^2 / (4 (W^2 - w_n^2) + G^2),

which has an inverse square-root singularity at the lower limit, a
Lorentzian envelope of width G and an oscillating numerator.  Substituting
x = sqrt(W^2 - w_n^2) gives the smooth, even integrand

    h(x) sin^2(sqrt(w_n^2 + x^2) t / 2),    h(x) = G^2 / ((4x^2 + G^2)(w_n^2 + x^2)),

which is integrated with adaptive Gauss-Kronrod on [0, X] plus an explicit
treatment of [X, inf).  Panels never exceed pi/t, so each one covers at most
half a period of the sin^2 factor.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InvalidInputError

if os.environ.get("JCREVIVAL_PURE"):
    from . import _gk_py as _kernel
else:
    try:
        from . import _gk as _kernel
    except ImportError:  # extension not built
        from . import _gk_py as _kernel

BACKEND = "cython" if _kernel.__name__.endswith("._gk") else "numpy"

DEFAULT_REL_TOL = 1e-9
DEFAULT_ABS_SCALE = 1e-15
MAX_PANELS = 400_000

# share of the error budget granted to the [X, inf) remainder
_TAIL_SHARE = 0.25
# tail series needs X well above both Lorentz and Rabi scales
_X_MIN_FACTOR = 20.0


@dataclass(frozen=True)
class LineIntegralSpec:
    """One evaluation of I_n(t).

    ``abs_tol`` defaults to ``1e-15 / omega_n``.
    """

    t: float
    omega_n: float
    gamma: float
    rel_tol: float = DEFAULT_REL_TOL
    abs_tol: float | None = None

    def __post_init__(self) -> None:
        if self.abs_tol is None:
            object.__setattr__(self, "abs_tol", DEFAULT_ABS_SCALE / self.omega_n if self.omega_n > 0 else 0.0)
        if not (self.omega_n > 0.0 and math.isfinite(self.omega_n)):
            raise InvalidInputError(f"omega_n must be positive, got {self.omega_n!r}")
        if not (self.gamma > 0.0 and math.isfinite(self.gamma)):
            raise InvalidInputError(f"gamma must be positive, got {self.gamma!r}")
        if not (self.t >= 0.0 and math.isfinite(self.t)):
            raise InvalidInputError(f"t must be non-negative, got {self.t!r}")
        for name in ("rel_tol", "abs_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise InvalidInputError(f"{name} must lie in (0, 1), got {value!r}")


@dataclass(frozen=True)
class LineIntegral:
    value: float
    error: float
    x_max: float
    panels: int
    tail: float
    tail_error: float


def substituted_integrand(x, spec: LineIntegralSpec):
    """Integrand after the change of variables; finite and smooth for every x >= 0."""
    return _kernel.integrand(np.asarray(x, dtype=float), spec.t, spec.omega_n, spec.gamma)


def rabi_line_integral_longtime(omega_n: float, gamma: float) -> float:
    """t -> inf value of I_n, where sin^2 averages to 1/2.

    Closed form from int_0^inf dx / ((x^2 + a^2)(x^2 + b^2)) = pi / (2ab(a + b))
    with a = gamma/2, b = omega_n.
    """
    if omega_n <= 0.0 or gamma <= 0.0:
        raise InvalidInputError("omega_n and gamma must be positive")
    return math.pi * gamma / (4.0 * omega_n * (gamma + 2.0 * omega_n))


def tail_bound(x_max: float, spec: LineIntegralSpec) -> float:
    """Upper bound on int_{x_max}^inf of the substituted integrand, valid for every t."""
    if x_max <= 0.0:
        raise InvalidInputError(f"x_max must be positive, got {x_max!r}")
    return spec.gamma**2 / (12.0 * x_max**3)


def _envelope_tail(x: float, omega_n: float, gamma: float) -> float:
    """int_x^inf h(s) ds by its large-x series; requires x >> max(gamma/2, omega_n)."""
    alpha = 0.25 * gamma * gamma
    beta = omega_n * omega_n
    u = 1.0 / (x * x)
    total = 0.0
    hk = 1.0
    alpha_k = 1.0
    uk = u / x  # x^-(3+2k)
    for k in range(40):
        term = hk * uk / (3 + 2 * k)
        total += -term if k % 2 else term
        if term < 1e-18 * abs(total):
            break
        alpha_k *= alpha
        hk = beta * hk + alpha_k
        uk *= u
    return alpha * total


def _oscillatory_remainder(x: float, t: float, omega_n: float, gamma: float) -> float:
    """k(x) = h(x) W(x) / (t x): one integration by parts of the cos(tW) tail leaves |R| <= k(x)."""
    big = math.sqrt(omega_n * omega_n + x * x)
    denom = (4.0 * x * x + gamma * gamma) * x * t * big
    return gamma * gamma / denom if denom > 0.0 else math.inf


def _choose_cutoff(budget: float, spec: LineIntegralSpec) -> float:
    """Smallest X whose remainder treatment (see ``_tail_at``) fits in ``budget``."""
    t, w, g = spec.t, spec.omega_n, spec.gamma
    x_crude = max((g * g / (12.0 * budget)) ** (1.0 / 3.0), 4.0 * max(w, g))
    denom = 8.0 * t * budget
    x_osc = (g * g / denom) ** 0.25 if denom > 0.0 else math.inf
    return min(x_crude, max(x_osc, _X_MIN_FACTOR * max(w, 0.5 * g)))


def _tail_at(x_max: float, spec: LineIntegralSpec) -> tuple[float, float]:
    """Estimate and error bound for int_{x_max}^inf of the integrand.

    Dropping the remainder costs ``tail_bound``.  Writing sin^2 = (1 - cos)/2
    instead integrates the envelope exactly and the cosine part by parts once,
    leaving an error of k(X)/2 that falls like 1/(t X^4).  The cheaper of the
    two bounds wins.
    """
    t, w, g = spec.t, spec.omega_n, spec.gamma
    crude = tail_bound(x_max, spec)
    if x_max < _X_MIN_FACTOR * max(w, 0.5 * g):
        return 0.0, crude
    k = _oscillatory_remainder(x_max, t, w, g)
    if crude <= 0.5 * k:
        return 0.0, crude
    phase = math.sqrt(w * w + x_max * x_max) * t
    return 0.5 * _envelope_tail(x_max, w, g) + 0.5 * k * math.sin(phase), 0.5 * k


def _panels(x_max: float, spec: LineIntegralSpec) -> tuple[np.ndarray, np.ndarray]:
    """Geometric breakpoints from the Lorentz/Rabi scale out to x_max, each split to width <= pi/t."""
    base = 0.25 * min(spec.omega_n, 0.5 * spec.gamma)
    n_geo = max(1, int(math.ceil(math.log2(x_max / base))))
    edges = base * 2.0 ** np.arange(n_geo)
    edges = np.concatenate([[0.0], edges[edges < x_max], [x_max]])
    width = math.pi / spec.t
    counts = np.maximum(1, np.ceil(np.diff(edges) / width)).astype(np.int64)
    if counts.sum() > MAX_PANELS:
        raise ConvergenceError(
            f"{int(counts.sum())} initial panels exceed the budget of {MAX_PANELS}", math.nan, math.inf
        )
    left = np.repeat(edges[:-1], counts)
    step = np.repeat(np.diff(edges) / counts, counts)
    offset = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    a = left + offset * step
    b = np.append(a[1:], x_max)
    return a, b


def rabi_line_integral(spec: LineIntegralSpec, *, full_output: bool = False, max_panels: int = MAX_PANELS):
    """Evaluate I_n(t) to within ``max(abs_tol, rel_tol * |I_n|)``.

    Returns the value, or a :class:`LineIntegral` record with the error
    estimate, cutoff and panel count when ``full_output`` is set.

    Raises
    ------
    ConvergenceError
        If the tolerance cannot be met within ``max_panels``.
    """
    t, w, g = spec.t, spec.omega_n, spec.gamma
    if t == 0.0:
        res = LineIntegral(0.0, 0.0, 0.0, 0, 0.0, 0.0)
        return res if full_output else 0.0

    longtime = rabi_line_integral_longtime(w, g)
    # 0 <= I_n(t) <= 2 * longtime, so the midpoint already satisfies loose requests
    if spec.abs_tol >= longtime:
        res = LineIntegral(longtime, longtime, 0.0, 0, 0.0, 0.0)
        return res if full_output else longtime

    # small-t behaviour: I ~ t^2 pi G / 16
    scale = min(longtime, t * t * math.pi * g / 16.0)
    target = max(spec.abs_tol, spec.rel_tol * scale)
    x_max = 0.0
    value = err = math.nan
    for _ in range(8):
        new_x = _choose_cutoff(_TAIL_SHARE * target, spec)
        if new_x > x_max:
            x_max = new_x
            a, b = _panels(x_max, spec)
            est, perr, _ = _kernel.gk15_panels(a, b, t, w, g)
        tail, tail_err = _tail_at(x_max, spec)
        while True:
            head = float(np.sum(est))
            value = head + tail
            target = max(spec.abs_tol, spec.rel_tol * abs(value))
            err = float(np.sum(perr)) + tail_err
            allowed = target - tail_err
            if allowed <= 0.0 or np.sum(perr) <= allowed:
                break
            if a.size >= max_panels:
                raise ConvergenceError(
                    f"I_n(t={t!r}) not converged with {a.size} panels", value, err
                )
            split = perr > allowed / a.size
            split[np.argmax(perr)] = True
            mid = 0.5 * (a[split] + b[split])
            keep = ~split
            a = np.concatenate([a[keep], a[split], mid])
            b = np.concatenate([b[keep], mid, b[split]])
            e_new, p_new, _ = _kernel.gk15_panels(a[keep.sum():], b[keep.sum():], t, w, g)
            est = np.concatenate([est[keep], e_new])
            perr = np.concatenate([perr[keep], p_new])
            order = np.argsort(a, kind="stable")
            a, b, est, perr = a[order], b[order], est[order], perr[order]
        if tail_err <= _TAIL_SHARE * target * (1.0 + 1e-12) and err <= target:
            res = LineIntegral(value, err, x_max, int(a.size), tail, tail_err)
            return res if full_output else value
    raise ConvergenceError(f"I_n(t={t!r}) cutoff did not settle", value, err)

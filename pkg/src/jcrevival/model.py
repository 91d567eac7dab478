"""Cavity and atom constants, loss bookkeeping, photon statistics and closed-form kernels.

All frequencies are angular (rad/s).  Rates quoted in "Hz" for the Rb
experiment (coupling constants, the Einstein coefficient) are treated as
angular as well; the calibrated Rabi frequency only reproduces the reference
``2*pi*64.5457 kHz`` under that reading.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import pdtrc

from .errors import InvalidInputError

# Circular Rydberg states 50/51 of 87Rb in a superconducting microwave cavity.
OMEGA0 = 2.0 * math.pi * 51.099e9
Q_BARE = 7.0e7
MIRROR_RADIUS = 25.0e-3
MIRROR_GAP = 27.0e-3
EINSTEIN_A = 0.473053e6

DEFAULT_TAIL_TOL = 1e-10
MIN_N_MAX = 20


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not (value > 0.0 and math.isfinite(value)):
            raise InvalidInputError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class ResonantSystem:
    """Cavity mode plus resonant two-level atom.

    Parameters
    ----------
    omega0 : float
        Cavity resonance, equal to the atomic Bohr frequency (rad/s).
    q_bare : float
        Mode quality factor from ohmic loss and axial leakage.
    r : float
        Mirror radius (m).
    h : float
        Mirror separation (m).
    einstein_a : float
        Purcell-enhanced spontaneous emission rate A(0) (1/s).
    """

    omega0: float = OMEGA0
    q_bare: float = Q_BARE
    r: float = MIRROR_RADIUS
    h: float = MIRROR_GAP
    einstein_a: float = EINSTEIN_A

    def __post_init__(self) -> None:
        _require_positive(omega0=self.omega0, q_bare=self.q_bare, r=self.r, h=self.h)
        # A(0) = 0 is allowed as the lossless-emitter limit.
        if not (self.einstein_a >= 0.0 and math.isfinite(self.einstein_a)):
            raise InvalidInputError(f"einstein_a must be non-negative, got {self.einstein_a!r}")


@dataclass(frozen=True)
class LossModel:
    p0: float
    q3: float
    q_net: float
    gamma: float


@dataclass(frozen=True)
class DriveField:
    """Coherent drive with its Poisson weights truncated at ``n_max``."""

    nbar: float
    weights: tuple[tuple[int, float], ...]
    n_max: int
    tail_tol: float = DEFAULT_TAIL_TOL
    _p: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        p = np.array([w for _, w in self.weights], dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "_p", p)

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.n_max + 1)

    @property
    def p(self) -> np.ndarray:
        """Weights as a read-only array indexed by photon number."""
        return self._p


@dataclass(frozen=True)
class Calibration:
    """Renormalized coupling g' and the Rabi frequencies derived from it."""

    g_prime: float
    nbar: float
    residual: float = 0.0

    def omega_n(self, n):
        """n-photon Rabi frequency ``2 sqrt(n+1) g'``; accepts arrays and real n."""
        return 2.0 * np.sqrt(np.asarray(n, dtype=float) + 1.0) * self.g_prime

    @property
    def omega_rabi(self) -> float:
        return float(self.omega_n(self.nbar))


def escape_probability(r: float, h: float) -> float:
    """Fraction of spontaneous emission leaving through the open side of a cylinder.

    Ratio of the curved surface ``2 pi r h`` to the total ``2 pi r h + 2 pi r^2``.
    """
    _require_positive(r=r, h=h)
    return 1.0 / (1.0 + r / h)


def net_quality_factor(sys: ResonantSystem) -> LossModel:
    """Combine the bare Q with the open-surface emission channel harmonically."""
    p0 = escape_probability(sys.r, sys.h)
    emission_rate = p0 * sys.einstein_a
    q3 = sys.omega0 / emission_rate if emission_rate > 0.0 else math.inf
    q_net = 1.0 / (1.0 / sys.q_bare + emission_rate / sys.omega0)
    return LossModel(p0=p0, q3=q3, q_net=q_net, gamma=sys.omega0 / q_net)


def poisson_weights(nbar: float, tail_tol: float = DEFAULT_TAIL_TOL) -> DriveField:
    """Poisson photon-number distribution truncated once the tail mass is below ``tail_tol``.

    The cut index is the smallest ``n_max >= 20`` whose upper tail
    ``P(N > n_max)`` is at most ``tail_tol``.  The tail is taken from the
    regularized incomplete gamma function rather than from ``1 - sum(p)``,
    which would lose everything below about 1e-16 to cancellation.
    """
    if not (nbar >= 0.0 and math.isfinite(nbar)):
        raise InvalidInputError(f"nbar must be non-negative, got {nbar!r}")
    if not 0.0 < tail_tol < 1.0:
        raise InvalidInputError(f"tail_tol must lie in (0, 1), got {tail_tol!r}")

    weights: list[tuple[int, float]] = []
    n = 0
    while True:
        weights.append((n, _poisson_pmf(n, nbar)))
        if n >= MIN_N_MAX and pdtrc(n, nbar) <= tail_tol:
            break
        n += 1
        if n > 100_000:
            raise InvalidInputError(f"Poisson truncation did not close for nbar={nbar!r}")
    return DriveField(nbar=nbar, weights=tuple(weights), n_max=n, tail_tol=tail_tol)


def _poisson_pmf(n: int, nbar: float) -> float:
    if nbar == 0.0:
        return 1.0 if n == 0 else 0.0
    return math.exp(n * math.log(nbar) - nbar - math.lgamma(n + 1))


def single_photon_transition(g, omega, omega0, n, t):
    """Detuned single-mode Rabi probability for emission into a mode holding n photons."""
    detuning = np.asarray(omega, dtype=float) - omega0
    coupling = 4.0 * np.asarray(g, dtype=float) ** 2 * (np.asarray(n, dtype=float) + 1.0)
    gen_rabi_sq = detuning**2 + coupling
    out = coupling * np.sin(np.sqrt(gen_rabi_sq) * np.asarray(t, dtype=float) / 2.0) ** 2 / gen_rabi_sq
    return out[()] if isinstance(out, np.ndarray) else out


def energy_decay(w0: float, sys: ResonantSystem, t):
    """Stored mode energy after free ring-down for time ``t``."""
    return w0 * np.exp(-sys.omega0 * np.asarray(t, dtype=float) / sys.q_bare)


def field_spectrum_detuned(delta, sys: ResonantSystem, e0: float = 1.0):
    """Lorentzian power spectrum of the ringing mode as a function of ``omega - omega0``.

    Use this form when resolving the line shape numerically: at optical or
    microwave carriers ``omega - omega0`` loses most of its digits in float64.
    """
    delta = np.asarray(delta, dtype=float)
    return e0**2 / (delta**2 + sys.omega0**2 / (4.0 * sys.q_bare**2))


def field_spectrum(omega, sys: ResonantSystem, e0: float = 1.0):
    """Lorentzian power spectrum of the ringing mode at angular frequency ``omega``."""
    return field_spectrum_detuned(np.asarray(omega, dtype=float) - sys.omega0, sys, e0)


def field_fwhm(sys: ResonantSystem) -> float:
    """Analytic full width at half maximum, ``omega0 / Q``."""
    return sys.omega0 / sys.q_bare

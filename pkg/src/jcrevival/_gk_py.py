"""NumPy implementation of the panel kernel; used when the Cython build is absent."""
import numpy as np

# 7-point Gauss / 15-point Kronrod rule on [-1, 1], nodes listed for x >= 0.
XGK = np.array([
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993945,
    0.5860872354676911, 0.4058451513773972, 0.20778495500789848, 0.0,
])
WGK = np.array([
    0.022935322010529224, 0.06309209262997856, 0.10479001032225019, 0.14065325971552592,
    0.1690047266392679, 0.19035057806478542, 0.20443294007529889, 0.20948214108472782,
])
WG = np.array([
    0.0, 0.1294849661688697, 0.0, 0.27970539148927664,
    0.0, 0.3818300505051189, 0.0, 0.4179591836734694,
])

_NODES = np.concatenate([-XGK[:-1], XGK[::-1]])
_WK = np.concatenate([WGK[:-1], WGK[::-1]])
_WG = np.concatenate([WG[:-1], WG[::-1]])
_EPS50 = 50.0 * np.finfo(float).eps


def integrand(x, t, omega_n, gamma):
    """Lorentz-filtered, singularity-free Rabi integrand in the variable x = sqrt(W^2 - w_n^2)."""
    x2 = x * x
    big_omega_sq = omega_n * omega_n + x2
    lorentz = gamma * gamma / (4.0 * x2 + gamma * gamma)
    s = np.sin(np.sqrt(big_omega_sq) * (0.5 * t))
    return lorentz * s * s / big_omega_sq


def gk15_panels(a, b, t, omega_n, gamma):
    """Kronrod estimate, |Kronrod - Gauss| error and absolute-value integral per panel."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    f = integrand(center[:, None] + half[:, None] * _NODES, t, omega_n, gamma)
    kronrod = half * (f @ _WK)
    gauss = half * (f @ _WG)
    resabs = np.abs(half) * (np.abs(f) @ _WK)
    err = np.maximum(np.abs(kronrod - gauss), _EPS50 * resabs)
    return kronrod, err, resabs

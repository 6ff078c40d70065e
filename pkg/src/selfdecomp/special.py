"""Complex log-gamma by the Lanczos approximation (g = 7, 9 coefficients)."""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos(z):
    # valid for Re z >= 1/2
    z = z - 1.0
    acc = np.full(z.shape, LANCZOS_COEFFS[0], dtype=np.complex128)
    for i in range(1, len(LANCZOS_COEFFS)):
        acc = acc + LANCZOS_COEFFS[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(acc)


def complex_log_gamma(z):
    """log Gamma(z) for Re z > 0, continuous branch (real on the real axis).

    Accepts scalars or arrays. Points with Re z < 1/2 are shifted by
    log Gamma(z) = log Gamma(z + 1) - log z.
    """
    arr = np.asarray(z, dtype=np.complex128)
    if np.any(arr.real <= 0) or not np.all(np.isfinite(arr)):
        raise DomainError("complex_log_gamma needs Re z > 0")
    small = arr.real < 0.5
    shifted = np.where(small, arr + 1.0, arr)
    out = _lanczos(shifted) - np.where(small, np.log(arr), 0.0)
    if arr.ndim == 0:
        return complex(out)
    return out


def log_gamma(x):
    """Real log Gamma for x > 0 through the complex routine."""
    return np.real(complex_log_gamma(np.asarray(x, dtype=np.float64)))


def log_beta(a, b):
    return log_gamma(a) + log_gamma(b) - log_gamma(np.asarray(a) + np.asarray(b))


def gamma_ratio_sq(alpha, y):
    """|Gamma(alpha + i y) / Gamma(alpha)|**2."""
    y = np.asarray(y, dtype=np.float64)
    lg = complex_log_gamma(alpha + 1j * y)
    return np.exp(2.0 * (np.real(lg) - log_gamma(alpha)))


def _self_check():
    if abs(complex_log_gamma(1.0)) > 1e-13:
        raise RuntimeError("Lanczos table fails Gamma(1) = 1")
    if abs(complex_log_gamma(0.5) - 0.5 * math.log(math.pi)) > 1e-13:
        raise RuntimeError("Lanczos table fails Gamma(1/2) = sqrt(pi)")


_self_check()

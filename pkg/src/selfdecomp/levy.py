"""Symmetric Levy densities and the Levy-Khintchine exponent.

A density is carried by its tail ``u(x) = x * k(x)`` on x > 0, either as an
exact :class:`~selfdecomp.exp_poly.ExpPolySum` or as a
:class:`~selfdecomp.chains.ClosedFormChain`. Series densities built from a
truncated coefficient sequence may also carry ``tail_variance``: a Gaussian
stand-in for the dropped terms, contributing ``-tail_variance * t**2 / 2``
to the exponent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np

from .chains import ClosedFormChain
from .errors import InvalidParam, NonConvergent
from .exp_poly import ExpPolySum, integrate_over_x
from .quadrature import integrate

Tail = Union[ExpPolySum, ClosedFormChain]


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for the quadrature path of the exponent.

    ``tail_cutoff=None`` picks the first power of two where
    ``|u| < 1e-16 * |u(split_point)|``.
    """

    split_point: float = 1e-3
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000
    tail_cutoff: Optional[float] = None

    def __post_init__(self):
        if not self.split_point > 0 or not self.rel_tol > 0 or self.max_subdivisions < 1:
            raise InvalidParam("split_point, rel_tol and max_subdivisions must be positive")
        if self.tail_cutoff is not None and not self.tail_cutoff > self.split_point:
            raise InvalidParam("tail_cutoff must exceed split_point")


DEFAULT_QUAD = QuadratureConfig()


@dataclass(frozen=True)
class LevyDensity:
    tail: Tail
    tail_variance: float = 0.0
    label: str = ""

    @property
    def exact(self) -> bool:
        return isinstance(self.tail, ExpPolySum)

    def u(self, x):
        """x * k(x) for x >= 0."""
        return self.tail(x)

    def density(self, x):
        """k(x) for x > 0."""
        x = np.asarray(x, dtype=np.float64)
        if self.exact:
            return self.tail(x) / x
        return self.tail.density(x)

    def __call__(self, x):
        """k(x) on the whole line, k(-x) = k(x)."""
        return self.density(np.abs(np.asarray(x, dtype=np.float64)))

    def at_zero(self) -> float:
        """u(0+), possibly infinite."""
        return self.tail.at_zero()

    def derive(self, n: int = 1) -> "LevyDensity":
        # under t d/dt a Gaussian term -s t^2/2 becomes -s t^2
        return replace(self, tail=self.tail.derive(n), tail_variance=self.tail_variance * 2**n)


@dataclass(frozen=True)
class IDRepresentation:
    """The triple [shift, gaussian_var, Levy density]."""

    shift: float
    gaussian_var: float
    density: LevyDensity
    total_mass: float = field(init=False)

    def __post_init__(self):
        if self.gaussian_var < 0:
            raise InvalidParam("gaussian_var must be nonnegative")
        object.__setattr__(self, "total_mass", integrability_check(self.density).total_mass)


@dataclass(frozen=True)
class Integrability:
    valid: bool
    total_mass: float


def _zero_tol(tail: Tail) -> float:
    if isinstance(tail, ExpPolySum):
        return 1e-12 * max(1.0, float(np.abs(tail.coeff[tail.power == 0]).sum()))
    return 1e-12


def tail_cutoff(k: LevyDensity, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    if cfg.tail_cutoff is not None:
        return cfg.tail_cutoff
    ref = abs(float(k.u(cfg.split_point)))
    if ref == 0.0:
        ref = max(abs(float(k.u(x))) for x in (0.01, 0.1, 1.0))
    x = 1.0
    while x < 2.0**24:
        probe = np.abs(k.u(np.array([x, 1.5 * x, 2.0 * x])))
        if np.all(probe < 1e-16 * ref):
            return max(x, 2.0 * cfg.split_point)
        x *= 2.0
    raise NonConvergent(f"tail of {k.label or 'density'} does not decay")


def total_mass(k: LevyDensity, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Integral of k over the real line; +-inf when u(0+) != 0."""
    u0 = k.at_zero()
    if math.isinf(u0) or abs(u0) > _zero_tol(k.tail):
        return math.copysign(math.inf, u0)
    if k.exact:
        return 2.0 * integrate_over_x(k.tail)
    cut = tail_cutoff(k, cfg)
    val, _ = integrate(k.density, 0.0, cut, rel_tol=min(cfg.rel_tol, 1e-12),
                       max_subdivisions=cfg.max_subdivisions)
    return 2.0 * val


def integrability_check(k: LevyDensity, cfg: QuadratureConfig = DEFAULT_QUAD) -> Integrability:
    """Check that min(x^2, 1) integrates against k and report the total mass.

    Exponential-polynomial tails always qualify (all rates are positive);
    chains qualify by construction at the origin (u = O(1/x)) and must
    show exponential decay at infinity.
    """
    if not k.exact:
        tail_cutoff(k, cfg)  # raises NonConvergent
    return Integrability(True, total_mass(k, cfg))


def _exact_exponent(tail: ExpPolySum, t: float) -> float:
    c, m, b = tail.coeff, tail.power, tail.rate
    tau = t / b
    out = np.empty(c.size)
    base = m == 0
    # int_0^inf (cos tx - 1) e^{-bx}/x dx = -log(1 + t^2/b^2)/2
    out[base] = -np.log1p(tau[base] ** 2)
    mm = m[~base].astype(np.float64)
    if mm.size:
        tt = tau[~base]
        # Re[(1 - i tau)^{-m}] - 1, written to avoid cancellation
        rho_m1 = np.expm1(-0.5 * mm * np.log1p(tt**2))
        phase = mm * np.arctan(tt)
        bracket = rho_m1 * np.cos(phase) - 2.0 * np.sin(0.5 * phase) ** 2
        gam = np.exp(np.array([math.lgamma(v) for v in mm]) - mm * np.log(b[~base]))
        out[~base] = 2.0 * gam * bracket
    return float(np.sum(c * out))


def _quad_exponent(k: LevyDensity, t: float, cfg: QuadratureConfig) -> float:
    def f(x):
        return -4.0 * np.sin(0.5 * t * x) ** 2 * k.density(x)

    eps = cfg.split_point
    cut = tail_cutoff(k, cfg)
    head, _ = integrate(f, 0.0, eps, rel_tol=cfg.rel_tol, max_subdivisions=cfg.max_subdivisions)
    body, _ = integrate(f, eps, cut, rel_tol=cfg.rel_tol, max_subdivisions=cfg.max_subdivisions)
    return head + body


def lk_exponent(k: LevyDensity, t, cfg: QuadratureConfig = DEFAULT_QUAD, method: str = "auto"):
    """Return int (cos(tx) - 1) k(x) dx over the real line.

    ``method="auto"`` uses the closed-form per-term integrals for
    exponential-polynomial tails and adaptive quadrature for chains;
    ``"quadrature"`` forces the numerical path.
    """
    if method not in ("auto", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    ts = np.asarray(t, dtype=np.float64)
    out = np.empty(ts.size)
    for i, tv in enumerate(ts.ravel()):
        if tv == 0.0:
            out[i] = 0.0
            continue
        if k.exact and method == "auto":
            val = _exact_exponent(k.tail, abs(tv))
        else:
            val = _quad_exponent(k, abs(tv), cfg)
        out[i] = val - 0.5 * k.tail_variance * tv * tv
    if ts.ndim == 0:
        return float(out[0])
    return out.reshape(ts.shape)


def char_function(k: LevyDensity, t, cfg: QuadratureConfig = DEFAULT_QUAD, method: str = "auto"):
    return np.exp(lk_exponent(k, t, cfg, method))


def residual_density(k: LevyDensity, c: float) -> LevyDensity:
    """Levy density of t -> phi(t) / phi(ct): tail u(x) - u(x/c)."""
    if not 0.0 < c < 1.0:
        raise InvalidParam(f"residual factor must lie in (0, 1), got {c!r}")
    if k.exact:
        tail = k.tail - k.tail.dilate(c)
    else:
        tail = k.tail.residual(c)
    label = f"{k.label}/res({c:g})" if k.label else ""
    return LevyDensity(tail, k.tail_variance * (1.0 - c * c), label)


def iterated_residual(k: LevyDensity, factors: Sequence[float]) -> LevyDensity:
    for c in factors:
        k = residual_density(k, c)
    return k

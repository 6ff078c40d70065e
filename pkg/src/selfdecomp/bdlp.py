"""Background driving characteristic functions psi(t) = exp[t (log phi(t))'].

If X = int_0^inf e^{-s} dY(s) then psi is the law of Y(1). For every
0 < c < 1 the residual law with cf phi(t)/phi(ct) satisfies
psi(t) = psi(ct) * psi_c(t), which :func:`verify_decomposition` checks.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .distributions import DistributionSpec
from .errors import InvalidParam
from .levy import residual_density

RICHARDSON_LEVELS = 4


def log_derivative(cf, t: float) -> float:
    """phi'(t)/phi(t) by central differences with Richardson extrapolation.

    The base step is max(1e-5, 1e-5 |t|); the table uses steps h, 2h, 4h, 8h.
    """
    h = max(1e-5, 1e-5 * abs(t))
    steps = [h * 2.0**j for j in range(RICHARDSON_LEVELS - 1, -1, -1)]
    table = [(cf(t + s) - cf(t - s)) / (2.0 * s) for s in steps]
    for m in range(1, RICHARDSON_LEVELS):
        factor = 4.0**m - 1.0
        table = [table[i + 1] + (table[i + 1] - table[i]) / factor for i in range(len(table) - 1)]
    return float(table[0]) / float(cf(t))


def bdcf_numeric(cf, t):
    ts = np.asarray(t, dtype=np.float64)
    out = np.array([1.0 if tv == 0.0 else np.exp(tv * log_derivative(cf, tv)) for tv in ts.ravel()])
    return float(out[0]) if ts.ndim == 0 else out.reshape(ts.shape)


def bdcf(spec: DistributionSpec, t, method: str = "auto"):
    """psi(t) of the catalog law; closed form when known unless ``method="numeric"``.

    Returns exactly 1 at t = 0 (phi is even, so (log phi)'(0) = 0).
    """
    if method not in ("auto", "closed", "numeric"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed" and spec.bdcf_closed is None:
        raise ValueError(f"{spec.name} has no closed-form BDCF")
    if spec.bdcf_closed is not None and method != "numeric":
        ts = np.asarray(t, dtype=np.float64)
        out = np.where(ts == 0.0, 1.0, spec.bdcf_closed(ts))
        return float(out) if ts.ndim == 0 else out
    return bdcf_numeric(spec.cf_closed, t)


@dataclass(frozen=True)
class BdcfResult:
    t_grid: tuple
    psi_values: tuple
    method: str

    def rows(self):
        return list(zip(self.t_grid, self.psi_values))


def bdcf_table(spec: DistributionSpec, t_grid, method: str = "auto") -> BdcfResult:
    t_grid = np.asarray(t_grid, dtype=np.float64)
    used = "closed" if (spec.bdcf_closed is not None and method != "numeric") else "numeric_logderiv"
    psi = bdcf(spec, t_grid, method)
    return BdcfResult(tuple(t_grid.tolist()), tuple(np.atleast_1d(psi).tolist()), used)


def residual_spec(spec: DistributionSpec, c: float) -> DistributionSpec:
    """The law with cf phi(t)/phi(ct); its BDCF is always taken numerically."""
    if not 0.0 < c < 1.0:
        raise InvalidParam(f"c must lie in (0, 1), got {c!r}")
    phi = spec.cf_closed

    def cf(t):
        return phi(t) / phi(c * np.asarray(t, dtype=np.float64))

    return replace(
        spec,
        name=f"{spec.name}_residual",
        params={**spec.params, "c": c},
        cf_closed=cf,
        density=residual_density(spec.density, c),
        cf_formula=f"phi(t)/phi({c:g} t)",
        rate_sequence=None,
        finite_rates=None,
        tail_sum_sq=None,
        bdcf_closed=None,
    )


def verify_decomposition(spec: DistributionSpec, c: float, t_grid) -> float:
    """max over the grid of |psi(t) - psi(ct) psi_c(t)|."""
    ts = np.asarray(t_grid, dtype=np.float64)
    res = residual_spec(spec, c)
    lhs = np.atleast_1d(bdcf(spec, ts))
    rhs = np.atleast_1d(bdcf(spec, c * ts)) * np.atleast_1d(bdcf(res, ts))
    return float(np.max(np.abs(lhs - rhs)))

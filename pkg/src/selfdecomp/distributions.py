"""Catalog of symmetric selfdecomposable laws built from Laplace series.

Each entry binds a closed-form characteristic function to its Levy density
(closed-form chain or exact exponential sum), the rate sequence
``b_k = 1/a_k`` of its Laplace-series representation when there is one,
and the background driving characteristic function when known in closed
form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.special import polygamma

from .chains import cosh_chain, exp_ratio_chain, sinh_chain, tanh_chain
from .errors import InvalidParam, InvalidSequence, UnknownDistribution
from .exp_poly import ExpPolySum
from .levy import DEFAULT_QUAD, LevyDensity, QuadratureConfig, residual_density
from .quadrature import integrate
from .special import complex_log_gamma, gamma_ratio_sq, log_beta, log_gamma

PI = math.pi


def _trigamma(x: float) -> float:
    return float(polygamma(1, x))


# ---------------------------------------------------------------------------
# Laplace series


@dataclass(frozen=True)
class LaplaceSeriesSpec:
    """Coefficients a_1, a_2, ... of X = sum a_k eta_k, truncated at K terms.

    ``coefficients`` is either a finite sequence (then K is its length) or a
    vectorized callable ``k -> a_k`` (k starting at 1). Summability of
    ``a_k**2`` is established by ``tail_sum_sq`` (exact ``K -> sum_{k>K}
    a_k**2``), by a user ``bound`` on the full sum, or else by a doubling
    test on partial sums (see :meth:`validate`).
    """

    coefficients: Union[Sequence[float], Callable[[np.ndarray], np.ndarray]]
    K: int = 0
    tail_sum_sq: Optional[Callable[[int], float]] = None
    bound: Optional[float] = None

    @property
    def finite(self) -> bool:
        return not callable(self.coefficients)

    @property
    def n_terms(self) -> int:
        return len(self.coefficients) if self.finite else self.K

    def a(self, n: Optional[int] = None) -> np.ndarray:
        n = self.n_terms if n is None else n
        if self.finite:
            return np.asarray(self.coefficients, dtype=np.float64)[:n]
        return np.asarray(self.coefficients(np.arange(1, n + 1)), dtype=np.float64)

    def validate(self) -> None:
        """Raise ``InvalidSequence`` unless sum a_k**2 is judged finite.

        Without an analytic tail or a bound the rule compares successive
        dyadic blocks of the squared partial sums up to N = max(K, 4096):
        the sequence passes when (S_N - S_{N/2}) / (S_{N/2} - S_{N/4}) < 0.95,
        i.e. squares decaying faster than about k**-1.07.
        """
        if self.n_terms < 1:
            raise InvalidSequence("need at least one coefficient")
        a = self.a()
        if not np.all(np.isfinite(a)) or np.any(a <= 0):
            raise InvalidSequence("coefficients must be positive and finite")
        if self.finite or self.tail_sum_sq is not None:
            return
        if self.bound is not None:
            if np.sum(a**2) > self.bound:
                raise InvalidSequence("partial sum of squares exceeds the supplied bound")
            return
        ratio = self._doubling_ratio()
        if not ratio < 0.95:
            raise InvalidSequence(
                f"sum of a_k^2 looks divergent (dyadic block ratio {ratio:.4f})"
            )

    def _doubling_ratio(self) -> float:
        n = max(self.K, 4096)
        sq = np.cumsum(self.a(n) ** 2)
        b1 = sq[n - 1] - sq[n // 2 - 1]
        b0 = sq[n // 2 - 1] - sq[n // 4 - 1]
        return float(b1 / b0) if b0 > 0 else 0.0

    def dropped_sum_sq(self) -> float:
        """sum_{k>K} a_k**2, analytic when available, else extrapolated."""
        if self.finite:
            return 0.0
        if self.tail_sum_sq is not None:
            return float(self.tail_sum_sq(self.K))
        if self.bound is not None:
            return max(0.0, self.bound - float(np.sum(self.a() ** 2)))
        r = self._doubling_ratio()
        sq = np.cumsum(self.a() ** 2)
        last = sq[-1] - sq[len(sq) // 2 - 1] if len(sq) >= 2 else sq[-1]
        return float(last * r / (1.0 - r))


def series_density(spec: LaplaceSeriesSpec) -> LevyDensity:
    """Levy density (1/|x|) sum_{k<=K} exp(-|x|/a_k).

    The dropped terms are carried as a Gaussian of variance
    2 * sum_{k>K} a_k**2.
    """
    spec.validate()
    a = spec.a()
    tail = ExpPolySum.from_arrays(np.ones(a.size), np.zeros(a.size, dtype=np.int64), 1.0 / a)
    return LevyDensity(tail, 2.0 * spec.dropped_sum_sq(), "series")


def product_cf(spec: LaplaceSeriesSpec, t):
    """prod_{k<=K} 1/(1 + (a_k t)^2), times exp(-t^2 sum_{k>K} a_k^2)."""
    spec.validate()
    a = spec.a()
    tail = spec.dropped_sum_sq()
    ts = np.asarray(t, dtype=np.float64)
    out = np.array([
        math.exp(-float(np.sum(np.log1p((a * tv) ** 2))) - tv * tv * tail) for tv in ts.ravel()
    ])
    if ts.ndim == 0:
        return float(out[0])
    return out.reshape(ts.shape)


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class DistributionSpec:
    name: str
    params: dict
    cf_closed: Callable
    density: LevyDensity
    cf_formula: str
    urbanik_class: str
    rate_sequence: Optional[Callable[[np.ndarray], np.ndarray]] = None
    finite_rates: Optional[tuple] = None
    tail_sum_sq: Optional[Callable[[int], float]] = None
    bdcf_closed: Optional[Callable] = None

    def series(self, K: int = 10_000) -> Optional[LaplaceSeriesSpec]:
        """The truncated Laplace-series representation, if the law has one."""
        if self.finite_rates is not None:
            return LaplaceSeriesSpec([1.0 / b for b in self.finite_rates])
        if self.rate_sequence is None:
            return None
        rates = self.rate_sequence
        return LaplaceSeriesSpec(lambda k: 1.0 / rates(k), K, self.tail_sum_sq)

    def tail_variance(self, K: int) -> Optional[float]:
        """Variance 2 sum_{k>K} a_k^2 of the dropped series terms."""
        if self.finite_rates is not None:
            return 0.0
        if self.tail_sum_sq is None:
            return None
        return 2.0 * self.tail_sum_sq(K)


def _even(fn, at_zero=1.0):
    """Wrap an even function of t whose formula has a removable 0/0 at t = 0."""

    def wrapped(t):
        ts = np.asarray(t, dtype=np.float64)
        a = np.abs(ts)
        zero = a == 0
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.where(zero, at_zero, fn(np.where(zero, 1.0, a)))
        return float(out) if ts.ndim == 0 else out

    return wrapped


def _t_coth(t):
    return t / np.tanh(t)


def _laplace(a: float = 1.0) -> DistributionSpec:
    if not a > 0:
        raise InvalidParam("laplace scale a must be positive")
    return DistributionSpec(
        name="laplace",
        params={"a": a},
        cf_closed=_even(lambda t: 1.0 / (1.0 + (a * t) ** 2)),
        density=LevyDensity(ExpPolySum([(1.0, 0, 1.0 / a)]), label="laplace"),
        cf_formula="1/(1+(a t)^2)",
        urbanik_class="L0 \\ L1",
        finite_rates=(1.0 / a,),
        bdcf_closed=_even(lambda t: np.exp(-2.0 * (a * t) ** 2 / (1.0 + (a * t) ** 2))),
    )


def _sinh() -> DistributionSpec:
    return DistributionSpec(
        name="sinh",
        params={},
        cf_closed=_even(lambda t: t / np.sinh(t)),
        density=LevyDensity(sinh_chain(), label="sinh"),
        cf_formula="t/sinh(t)",
        urbanik_class="L2 \\ L3",
        rate_sequence=lambda k: PI * np.asarray(k, dtype=np.float64),
        tail_sum_sq=lambda K: _trigamma(K + 1.0) / PI**2,
        bdcf_closed=_even(lambda t: np.exp(1.0 - _t_coth(t))),
    )


def _cosh() -> DistributionSpec:
    return DistributionSpec(
        name="cosh",
        params={},
        cf_closed=_even(lambda t: 1.0 / np.cosh(t), at_zero=1.0),
        density=LevyDensity(cosh_chain(), label="cosh"),
        cf_formula="1/cosh(t)",
        urbanik_class="L2 \\ L3",
        rate_sequence=lambda k: (2.0 * np.asarray(k, dtype=np.float64) - 1.0) * PI / 2.0,
        tail_sum_sq=lambda K: _trigamma(K + 0.5) / PI**2,
        bdcf_closed=_even(lambda t: np.exp(-t * np.tanh(t))),
    )


def _tanh() -> DistributionSpec:
    return DistributionSpec(
        name="tanh",
        params={},
        cf_closed=_even(lambda t: np.tanh(t) / t),
        density=LevyDensity(tanh_chain(), label="tanh"),
        cf_formula="tanh(t)/t",
        urbanik_class="L0 \\ L1",
        bdcf_closed=_even(lambda t: np.exp(2.0 * t / np.sinh(2.0 * t) - 1.0)),
    )


def _check_alpha(alpha):
    if not (isinstance(alpha, (int, float)) and alpha > 0 and math.isfinite(alpha)):
        raise InvalidParam(f"alpha must be a positive real, got {alpha!r}")


def _logistic(alpha: float = 1.0) -> DistributionSpec:
    _check_alpha(alpha)
    lg_alpha = float(log_gamma(alpha))

    def cf(t):
        ts = np.asarray(t, dtype=np.float64)
        out = np.exp(2.0 * (np.real(complex_log_gamma(alpha + 1j * ts / PI)) - lg_alpha))
        return float(out) if ts.ndim == 0 else out

    return DistributionSpec(
        name="logistic",
        params={"alpha": alpha},
        cf_closed=cf,
        density=LevyDensity(exp_ratio_chain(alpha, PI, 1, f"logistic({alpha:g})"),
                            label=f"logistic({alpha:g})"),
        cf_formula="|Gamma(alpha + i t/pi)/Gamma(alpha)|^2",
        urbanik_class="L1 (at least)",
        rate_sequence=lambda k: PI * (alpha + np.asarray(k, dtype=np.float64) - 1.0),
        tail_sum_sq=lambda K: _trigamma(alpha + K) / PI**2,
    )


def _generalized_logistic(alpha: float = 1.0) -> DistributionSpec:
    _check_alpha(alpha)

    def cf(t):
        ts = np.asarray(t, dtype=np.float64)
        out = gamma_ratio_sq(alpha, ts)
        return float(out) if ts.ndim == 0 else out

    return DistributionSpec(
        name="generalized_logistic",
        params={"alpha": alpha},
        cf_closed=cf,
        density=LevyDensity(exp_ratio_chain(alpha, 1.0, 1, f"generalized_logistic({alpha:g})"),
                            label=f"generalized_logistic({alpha:g})"),
        cf_formula="|Gamma(alpha + i t)/Gamma(alpha)|^2",
        urbanik_class="L1 (at least)",
        rate_sequence=lambda k: alpha + np.asarray(k, dtype=np.float64) - 1.0,
        tail_sum_sq=lambda K: _trigamma(alpha + K),
    )


def _talacko_zolotarev(c: float = 0.5) -> DistributionSpec:
    if not (isinstance(c, (int, float)) and 0.0 < c < 1.0):
        raise InvalidParam(f"c must lie in (0, 1), got {c!r}")
    base = LevyDensity(sinh_chain(), label="sinh")
    return DistributionSpec(
        name="talacko_zolotarev",
        params={"c": c},
        cf_closed=_even(lambda t: np.sinh(c * t) / (c * np.sinh(t))),
        density=residual_density(base, c),
        cf_formula="sinh(c t)/(c sinh(t))",
        urbanik_class="L1 (at least)",
        bdcf_closed=_even(lambda t: np.exp(_t_coth(c * t) - _t_coth(t))),
    )


_BUILDERS = {
    "laplace": (_laplace, ("a",)),
    "sinh": (_sinh, ()),
    "cosh": (_cosh, ()),
    "tanh": (_tanh, ()),
    "logistic": (_logistic, ("alpha",)),
    "generalized_logistic": (_generalized_logistic, ("alpha",)),
    "talacko_zolotarev": (_talacko_zolotarev, ("c",)),
}

CATALOG_NAMES = tuple(_BUILDERS)


def catalog_get(name: str, **params) -> DistributionSpec:
    """Build the catalog entry ``name`` with the given parameters.

    >>> catalog_get("sinh").cf_closed(0.0)
    1.0
    """
    try:
        builder, allowed = _BUILDERS[name]
    except KeyError:
        raise UnknownDistribution(
            f"unknown distribution {name!r}; choose from {', '.join(CATALOG_NAMES)}"
        ) from None
    params = {k: v for k, v in params.items() if v is not None}
    extra = set(params) - set(allowed)
    if extra:
        raise InvalidParam(f"{name} takes no parameter(s) {sorted(extra)}")
    return builder(**{k: float(v) for k, v in params.items()})


def catalog_table() -> list:
    """One row per catalog entry: name, parameters, cf formula, Urbanik class."""
    rows = []
    for name, (_, allowed) in _BUILDERS.items():
        spec = catalog_get(name)
        rows.append({
            "name": name,
            "params": list(allowed),
            "cf": spec.cf_formula,
            "class": spec.urbanik_class,
        })
    return rows


# ---------------------------------------------------------------------------
# generalized logistic density and the log-gamma integral identity


def generalized_logistic_pdf(alpha: float, s):
    """exp(alpha s) (1 + e^s)^(-2 alpha) / B(alpha, alpha)."""
    _check_alpha(alpha)
    s = np.asarray(s, dtype=np.float64)
    # log(1 + e^s) via logaddexp keeps large |s| finite
    logpdf = alpha * s - 2.0 * alpha * np.logaddexp(0.0, s) - log_beta(alpha, alpha)
    out = np.exp(logpdf)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GammaIdentity:
    alpha: float
    t: float
    lhs: float
    rhs: float
    abs_diff: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "abs_diff", abs(self.lhs - self.rhs))


def gamma_identity_check(alpha: float, t: float,
                         cfg: QuadratureConfig = DEFAULT_QUAD) -> GammaIdentity:
    """Compare int_0^inf (cos tx - 1) e^{-alpha pi x} / (x (1 - e^{-pi x})) dx
    with log|Gamma(alpha + i t/pi)| - log Gamma(alpha).

    The left side is computed by adaptive quadrature of the integrand as
    written, the right side by the Lanczos log-gamma.
    """
    _check_alpha(alpha)
    t = float(t)
    rhs = float(np.real(complex_log_gamma(alpha + 1j * t / PI)) - log_gamma(alpha))
    if t == 0.0:
        return GammaIdentity(alpha, t, 0.0, rhs)

    def f(x):
        return -2.0 * np.sin(0.5 * t * x) ** 2 * np.exp(-alpha * PI * x) / (x * -np.expm1(-PI * x))

    eps = cfg.split_point
    # e^{-alpha pi x} / (pi x) below 1e-17 of its value at eps
    cut = cfg.tail_cutoff or max(2 * eps, (40.0 + math.log(1.0 / (PI * eps))) / (alpha * PI))
    head, _ = integrate(f, 0.0, eps, rel_tol=cfg.rel_tol, max_subdivisions=cfg.max_subdivisions)
    body, _ = integrate(f, eps, cut, rel_tol=cfg.rel_tol, max_subdivisions=cfg.max_subdivisions)
    return GammaIdentity(alpha, t, head + body, rhs)

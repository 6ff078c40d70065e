"""Finite sums of terms ``c * x**m * exp(-b * x)`` on x >= 0.

Every tail function ``u(x) = x * k(x)`` of a Laplace-series Levy density
lives in this algebra, and the algebra is closed under the operations the
Urbanik analysis needs: differentiation, multiplication by x and dilation.

Values are immutable. The canonical form merges terms whose rates agree to
a relative ``RATE_RTOL``, adds coefficients of equal ``(rate, power)``,
drops coefficients below ``COEFF_FLOOR`` and sorts by ``(rate, power)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from . import _kernels

RATE_RTOL = 1e-14
COEFF_FLOOR = 1e-300


@dataclass(frozen=True)
class ExpPolyTerm:
    coeff: float
    power: int
    rate: float

    def __post_init__(self):
        if self.power < 0 or int(self.power) != self.power:
            raise ValueError(f"power must be a nonnegative integer, got {self.power!r}")
        if not self.rate > 0:
            raise ValueError(f"rate must be positive, got {self.rate!r}")


def _canonical(coeff, power, rate):
    coeff = np.asarray(coeff, dtype=np.float64).ravel()
    power = np.asarray(power, dtype=np.int64).ravel()
    rate = np.asarray(rate, dtype=np.float64).ravel()
    keep = coeff != 0.0
    coeff, power, rate = coeff[keep], power[keep], rate[keep]
    if coeff.size == 0:
        return coeff, power, rate
    if np.any(power < 0):
        raise ValueError("powers must be nonnegative")
    if not np.all(rate > 0) or not np.all(np.isfinite(rate)):
        raise ValueError("rates must be positive and finite")

    order = np.lexsort((power, rate))
    coeff, power, rate = coeff[order], power[order], rate[order]

    # chain nearly equal rates into groups represented by their first rate
    starts = np.empty(rate.size, dtype=bool)
    starts[0] = True
    starts[1:] = np.diff(rate) > RATE_RTOL * rate[1:]
    group = np.cumsum(starts) - 1
    rate = rate[np.flatnonzero(starts)][group]

    order = np.lexsort((power, group))
    coeff, power, rate, group = coeff[order], power[order], rate[order], group[order]
    first = np.empty(coeff.size, dtype=bool)
    first[0] = True
    first[1:] = (group[1:] != group[:-1]) | (power[1:] != power[:-1])
    idx = np.flatnonzero(first)
    coeff = np.add.reduceat(coeff, idx)
    power, rate = power[idx], rate[idx]

    keep = np.abs(coeff) >= COEFF_FLOOR
    return coeff[keep], power[keep], rate[keep]


class ExpPolySum:
    """An immutable canonical sum of ``c * x**m * exp(-b * x)`` terms.

    Construct from ``ExpPolyTerm`` objects or ``(coeff, power, rate)`` tuples,
    or from parallel arrays with :meth:`from_arrays`.

    >>> s = ExpPolySum([(1.0, 0, 1.0)])
    >>> s + s
    ExpPolySum([2*exp(-1*x)])
    """

    __slots__ = ("coeff", "power", "rate")

    def __init__(self, terms: Iterable[Union[ExpPolyTerm, tuple]] = ()):
        cs, ms, bs = [], [], []
        for t in terms:
            if not isinstance(t, ExpPolyTerm):
                t = ExpPolyTerm(float(t[0]), int(t[1]), float(t[2]))
            cs.append(t.coeff)
            ms.append(t.power)
            bs.append(t.rate)
        self._set(*_canonical(cs, ms, bs))

    @classmethod
    def from_arrays(cls, coeff, power, rate) -> "ExpPolySum":
        obj = cls.__new__(cls)
        obj._set(*_canonical(coeff, power, rate))
        return obj

    @classmethod
    def _raw(cls, coeff, power, rate) -> "ExpPolySum":
        # caller guarantees canonical input
        obj = cls.__new__(cls)
        obj._set(coeff, power, rate)
        return obj

    def _set(self, coeff, power, rate):
        for arr in (coeff, power, rate):
            arr.setflags(write=False)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "power", power)
        object.__setattr__(self, "rate", rate)

    def __setattr__(self, name, value):
        raise AttributeError("ExpPolySum is immutable")

    # -- container protocol -------------------------------------------------
    @property
    def terms(self) -> tuple:
        return tuple(
            ExpPolyTerm(float(c), int(m), float(b))
            for c, m, b in zip(self.coeff, self.power, self.rate)
        )

    def __len__(self):
        return self.coeff.size

    def __iter__(self):
        return iter(self.terms)

    def __bool__(self):
        return self.coeff.size > 0

    def __eq__(self, other):
        if not isinstance(other, ExpPolySum):
            return NotImplemented
        if len(self) != len(other) or not np.array_equal(self.power, other.power):
            return False
        return bool(
            np.all(np.abs(self.rate - other.rate) <= RATE_RTOL * np.maximum(self.rate, other.rate))
            and np.all(
                np.abs(self.coeff - other.coeff)
                <= RATE_RTOL * np.maximum(np.abs(self.coeff), np.abs(other.coeff))
            )
        )

    __hash__ = None

    def __repr__(self):
        if len(self) > 6:
            return f"ExpPolySum(<{len(self)} terms, rates {self.rate[0]:.4g}..{self.rate[-1]:.4g}>)"
        parts = []
        for c, m, b in zip(self.coeff, self.power, self.rate):
            xm = "" if m == 0 else ("*x" if m == 1 else f"*x**{m}")
            parts.append(f"{c:.6g}{xm}*exp(-{b:.6g}*x)")
        return "ExpPolySum([" + ", ".join(parts) + "])"

    # -- algebra -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ExpPolySum):
            return NotImplemented
        return ExpPolySum.from_arrays(
            np.concatenate([self.coeff, other.coeff]),
            np.concatenate([self.power, other.power]),
            np.concatenate([self.rate, other.rate]),
        )

    def __neg__(self):
        return ExpPolySum._raw(-self.coeff, self.power.copy(), self.rate.copy())

    def __sub__(self, other):
        if not isinstance(other, ExpPolySum):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float, np.floating, np.integer)):
            return NotImplemented
        return ExpPolySum.from_arrays(self.coeff * float(scalar), self.power, self.rate)

    __rmul__ = __mul__

    def differentiate(self) -> "ExpPolySum":
        m = self.power
        lower = m > 0
        return ExpPolySum.from_arrays(
            np.concatenate([self.coeff[lower] * m[lower], -self.coeff * self.rate]),
            np.concatenate([m[lower] - 1, m]),
            np.concatenate([self.rate[lower], self.rate]),
        )

    def multiply_by_x(self) -> "ExpPolySum":
        return ExpPolySum._raw(self.coeff.copy(), self.power + 1, self.rate.copy())

    def dilate(self, c: float) -> "ExpPolySum":
        """Return the sum evaluating to ``s(x / c)``."""
        if not c > 0:
            raise ValueError(f"dilation factor must be positive, got {c!r}")
        scale = np.power(float(c), -self.power.astype(np.float64))
        return ExpPolySum.from_arrays(self.coeff * scale, self.power, self.rate / c)

    def __call__(self, x):
        return evaluate(self, x)

    def at_zero(self) -> float:
        """Continuous extension at x = 0: the sum of the power-0 coefficients."""
        return float(self.coeff[self.power == 0].sum())

    def integrate_zero_inf(self) -> float:
        m = self.power.astype(np.float64)
        logs = np.array([math.lgamma(k + 1.0) for k in m]) - (m + 1.0) * np.log(self.rate)
        return float(np.sum(self.coeff * np.exp(logs)))

    # -- Urbanik operator hook ---------------------------------------------
    def derive(self, n: int = 1) -> "ExpPolySum":
        """Apply ``u -> -x u'`` n times: the tail of the next D-iterate."""
        s = self
        for _ in range(n):
            s = -s.differentiate().multiply_by_x()
        return s


def add(s1: ExpPolySum, s2: ExpPolySum) -> ExpPolySum:
    return s1 + s2


def differentiate(s: ExpPolySum) -> ExpPolySum:
    return s.differentiate()


def multiply_by_x(s: ExpPolySum) -> ExpPolySum:
    return s.multiply_by_x()


def dilate(s: ExpPolySum, c: float) -> ExpPolySum:
    return s.dilate(c)


def evaluate(s: ExpPolySum, x):
    """Evaluate at x >= 0 (x = 0 by continuous extension).

    Terms are accumulated in order of increasing rate. Accepts a scalar or
    an array and returns the same shape.
    """
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0):
        raise ValueError("ExpPolySum is defined on x >= 0")
    flat = _kernels.exppoly_eval(s.coeff, s.power, s.rate, arr.ravel())
    if arr.ndim == 0:
        return float(flat[0])
    return flat.reshape(arr.shape)


def integrate_zero_inf(s: ExpPolySum) -> float:
    """Exact integral over (0, inf): sum of c * m! / b**(m+1)."""
    return s.integrate_zero_inf()


def integrate_over_x(s: ExpPolySum, zero_tol: float = 1e-12) -> float:
    """Exact integral of s(x)/x over (0, inf).

    Finite only when s(0+) = 0; power-0 terms then combine into a Frullani
    integral -sum(c * log b). Raises ``ValueError`` when s(0+) != 0.
    """
    base = s.power == 0
    c0 = s.coeff[base]
    if abs(c0.sum()) > zero_tol * max(1.0, np.abs(c0).sum()):
        raise ValueError("integral of s(x)/x diverges at 0 since s(0+) != 0")
    total = -float(np.sum(c0 * np.log(s.rate[base])))
    m = s.power[~base].astype(np.float64)
    if m.size:
        logs = np.array([math.lgamma(k) for k in m]) - m * np.log(s.rate[~base])
        total += float(np.sum(s.coeff[~base] * np.exp(logs)))
    return total

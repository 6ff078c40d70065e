"""Closed-form tails u(x) = x*k(x) with exact iterates of ``u -> -x u'``.

A chain stores the level functions ``u_n(x) = x * (D^n k)(x)`` of one base
density and represents any finite combination ``sum_i w_i * u_n(x / s_i)``
of dilated copies. Dilation commutes with ``x d/dx``, so the residual
``u(x) - u(x/c)`` of a chain is again a chain at every level.

Two constructions are provided:

* hand-written hyperbolic forms for the sinh, cosh and tanh densities
  (levels 0..4), and
* :func:`exp_ratio_chain` for ``u(x) = q**a / (1 - sigma*q)`` with
  ``q = exp(-beta*x)``, whose derivatives are polynomials in
  ``w = 1/(1 - sigma*q)`` and are available to any order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DerivativeOrderUnavailable

PI = math.pi

# level functions take x > 0 (ndarray) and return (D^n k)(x)
LevelFn = Callable[[int, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ClosedFormChain:
    """A combination ``sum w * u_order(x / s)`` of one base chain.

    ``origin`` gives the small-x expansion of the base tail,
    ``u_0(x) = origin[0] / x + origin[1] + O(x)``.
    """

    name: str
    level_fn: LevelFn
    max_order: Optional[int]
    origin: tuple
    order: int = 0
    combination: tuple = ((1.0, 1.0),)

    def _check(self, n):
        if self.max_order is not None and n > self.max_order:
            raise DerivativeOrderUnavailable(
                f"chain {self.name!r} stores levels up to {self.max_order}, level {n} requested"
            )

    def density(self, x):
        """(D^order k)(x) for x > 0 (summed over the combination)."""
        self._check(self.order)
        x = np.asarray(x, dtype=np.float64)
        out = np.zeros(x.shape)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            for w, s in self.combination:
                # (D^n k)(x/s) is the level of u(x/s) up to the Jacobian 1/s
                out = out + (w / s) * self.level_fn(self.order, x / s)
        return out

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        return x * self.density(x)

    def derive(self, n: int = 1) -> "ClosedFormChain":
        self._check(self.order + n)
        return replace(self, order=self.order + n)

    def dilate(self, c: float) -> "ClosedFormChain":
        """The chain evaluating to u(x / c)."""
        return replace(self, combination=tuple((w, s * c) for w, s in self.combination))

    def combine(self, other: "ClosedFormChain", weight: float = 1.0) -> "ClosedFormChain":
        if other.level_fn is not self.level_fn or other.order != self.order:
            raise ValueError("can only combine dilations of the same chain at the same level")
        merged: dict = {}
        for w, s in self.combination + tuple((weight * w, s) for w, s in other.combination):
            merged[s] = merged.get(s, 0.0) + w
        comb = tuple((w, s) for s, w in sorted(merged.items()) if w != 0.0)
        return replace(self, combination=comb)

    def residual(self, c: float) -> "ClosedFormChain":
        return self.combine(self.dilate(c), -1.0)

    def origin_coeffs(self) -> tuple:
        """(a, b) with u_order(x) = a/x + b + o(1) as x -> 0+."""
        a0, b0 = self.origin
        a = sum(w * a0 * s for w, s in self.combination)
        b = sum(w * b0 for w, s in self.combination) if self.order == 0 else 0.0
        scale = sum(abs(w * a0 * s) for w, s in self.combination)
        if abs(a) <= 1e-14 * scale:
            a = 0.0
        return a, b

    def at_zero(self) -> float:
        a, b = self.origin_coeffs()
        if a > 0:
            return math.inf
        if a < 0:
            return -math.inf
        return b


# ---------------------------------------------------------------------------
# hyperbolic forms, written in z = pi*x and coth/csch of z/2 (tanh/sech^2 of
# z/4 for the tanh law); level 4 was obtained once by symbolic
# differentiation of level 3 and simplified by hand.


def _sinh_levels(n, x):
    z = PI * x
    if n == 0:
        return 1.0 / (x * np.expm1(z))
    C = 1.0 / np.tanh(z / 2)
    S2 = 1.0 / np.sinh(z / 2) ** 2
    if n == 1:
        return PI / 4 * S2
    if n == 2:
        return PI / 4 * S2 * (z * C - 1)
    if n == 3:
        return PI / 8 * S2 * (2 * z**2 * C**2 + z**2 * S2 - 6 * z * C + 2)
    return PI / 4 * S2 * (
        z**3 * C**3 + 2 * z**3 * C * S2 - 6 * z**2 * C**2 - 3 * z**2 * S2 + 7 * z * C - 1
    )


def _cosh_levels(n, x):
    z = PI * x
    S = 1.0 / np.sinh(z / 2)
    if n == 0:
        return S / (2 * x)
    C = 1.0 / np.tanh(z / 2)
    if n == 1:
        return PI / 4 * C * S
    if n == 2:
        return PI / 8 * S * (z * C**2 - 2 * C + z * S**2)
    if n == 3:
        return PI / 16 * S * (z**2 * C**3 + C * (5 * z**2 * S**2 + 4) - 6 * z * (C**2 + S**2))
    return PI / 32 * S * (
        z**3 * (C**4 + 18 * C**2 * S**2 + 5 * S**4)
        - z**2 * (12 * C**3 + 60 * C * S**2)
        + 28 * z * (C**2 + S**2)
        - 8 * C
    )


def _tanh_levels(n, x):
    z = PI * x
    if n == 0:
        return 1.0 / (x * (1.0 + np.exp(z / 2)))
    Q = 1.0 / np.cosh(z / 4) ** 2
    if n == 1:
        return PI / 8 * Q
    T = np.tanh(z / 4)
    if n == 2:
        return PI / 16 * Q * (z * T - 2)
    if n == 3:
        return PI / 64 * Q * (8 - 12 * z * T + z**2 * (2 * T**2 - Q))
    return PI / 64 * Q * (28 * z * T + z**3 * (T**3 - 2 * Q * T) + z**2 * (6 * Q - 12 * T**2) - 8)


def sinh_chain() -> ClosedFormChain:
    return ClosedFormChain("sinh", _sinh_levels, 4, (1 / PI, -0.5))


def cosh_chain() -> ClosedFormChain:
    return ClosedFormChain("cosh", _cosh_levels, 4, (1 / PI, 0.0))


def tanh_chain() -> ClosedFormChain:
    return ClosedFormChain("tanh", _tanh_levels, 4, (0.0, 0.5))


# ---------------------------------------------------------------------------
# generic q**a / (1 - sigma*q) chains


@lru_cache(maxsize=None)
def stirling2(n: int, j: int) -> int:
    if n == j:
        return 1
    if j == 0 or j > n:
        return 0
    return j * stirling2(n - 1, j) + stirling2(n - 1, j - 1)


@lru_cache(maxsize=64)
def _ratio_polys(alpha: float, order: int) -> tuple:
    """Coefficients (ascending powers of w) of P_j with d^j/ds^j u = q**alpha * P_j(w)."""
    polys = [np.array([0.0, 1.0])]
    for _ in range(order):
        p = polys[-1]
        nxt = np.zeros(p.size + 1)
        for i, c in enumerate(p):
            # -q d/dq [q**a w**i] = q**a [(i - a) w**i - i w**(i+1)]
            nxt[i] += (i - alpha) * c
            nxt[i + 1] -= i * c
        polys.append(nxt)
    return tuple(polys)


def _ratio_level_fn(alpha: float, beta: float, sigma: int) -> LevelFn:
    def level(n, x):
        s = beta * x
        qa = np.exp(-alpha * s)
        if sigma > 0:
            w = -1.0 / np.expm1(-s)
        else:
            w = 1.0 / (1.0 + np.exp(-s))
        polys = _ratio_polys(alpha, n)
        acc = np.zeros(np.shape(x))
        for j in range(n + 1):
            pj = np.polynomial.polynomial.polyval(w, polys[j])
            acc = acc + stirling2(n, j) * s**j * pj
        return (-1) ** n * qa * acc / x

    return level


def exp_ratio_chain(alpha: float, beta: float, sigma: int = 1, name: str = "") -> ClosedFormChain:
    """Chain for u(x) = exp(-alpha*beta*x) / (1 - sigma*exp(-beta*x)).

    ``sigma = 1`` gives the logistic family (alpha = 1: sinh, 1/2: cosh
    with beta = pi); ``sigma = -1`` with alpha = 1, beta = pi/2 gives tanh.
    """
    if not alpha > 0 or not beta > 0 or sigma not in (1, -1):
        raise ValueError("need alpha > 0, beta > 0, sigma in {1, -1}")
    origin = (1.0 / beta, 0.5 - alpha) if sigma > 0 else (0.0, 0.5)
    return ClosedFormChain(
        name or f"exp_ratio(alpha={alpha:g}, beta={beta:g}, sigma={sigma})",
        _ratio_level_fn(float(alpha), float(beta), int(sigma)),
        None,
        origin,
    )


def chain_levels(chain: ClosedFormChain, x: Sequence[float], n_max: int) -> np.ndarray:
    """Rows n = 0..n_max of (D^n k)(x); convenience for tables and tests."""
    x = np.asarray(x, dtype=np.float64)
    return np.stack([chain.derive(n).density(x) for n in range(n_max + 1)])

"""Iterated D-operator, sign scans and Urbanik-class verdicts.

With ``u_j(x) = x * (D^j k)(x)`` the operator acts as ``u_{j+1} = -x u_j'``.
A density sits in L_j (numerically, on the scanned grid) when
D^1 k, ..., D^{j+1} k are nonnegative and D^0 k, ..., D^j k all have
infinite mass. Negativity found on the grid is a genuine witness;
nonnegativity is only evidence on that grid.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .levy import DEFAULT_QUAD, LevyDensity, QuadratureConfig, total_mass

SIGN_ABS_TOL = 1e-12


@dataclass(frozen=True)
class ScanGrid:
    x_min: float = 1e-4
    x_max: float = 50.0
    points: int = 4000
    scale: str = "logarithmic"
    refine_iters: int = 40

    def __post_init__(self):
        if not 0 < self.x_min < self.x_max:
            raise ValueError("need 0 < x_min < x_max")
        if self.points < 2:
            raise ValueError("need at least 2 grid points")
        if self.scale not in ("linear", "logarithmic"):
            raise ValueError(f"scale must be 'linear' or 'logarithmic', got {self.scale!r}")

    def nodes(self) -> np.ndarray:
        if self.scale == "logarithmic":
            return np.geomspace(self.x_min, self.x_max, self.points)
        return np.linspace(self.x_min, self.x_max, self.points)

    def refined(self) -> "ScanGrid":
        """Grid containing every node of this one plus all midpoints."""
        return ScanGrid(self.x_min, self.x_max, 2 * self.points - 1, self.scale, self.refine_iters)


DEFAULT_GRID = ScanGrid()


@dataclass(frozen=True)
class NonNegative:
    grid_min: float
    grid_limited: bool = True


@dataclass(frozen=True)
class NegativeAt:
    x: float
    value: float
    interval: tuple


ScanResult = Union[NonNegative, NegativeAt]


def d_operator(k: LevyDensity, n: int) -> LevyDensity:
    """D^n k. For n = 0 the density itself is returned; its tail is D^0 k = x k(x)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return k.derive(n) if n else k


def _bisect(f: Callable[[float], float], good: float, bad: float, iters: int) -> float:
    # f(good) >= 0 > f(bad); returns the crossing estimate
    for _ in range(iters):
        mid = 0.5 * (good + bad)
        if f(mid) < 0:
            bad = mid
        else:
            good = mid
        if abs(bad - good) < 1e-12 * max(1.0, abs(mid)):
            break
    return 0.5 * (good + bad)


def sign_scan(k: LevyDensity, grid: ScanGrid = DEFAULT_GRID,
              abs_tol: float = SIGN_ABS_TOL) -> ScanResult:
    """Look for negative values of k on the grid.

    Values count as negative below ``-abs_tol * max|k|`` (max over the
    grid). The most negative run is refined: its endpoints by bisection and
    its minimum by bounded Brent search.
    """
    xs = grid.nodes()
    v = np.asarray(k.density(xs), dtype=np.float64)
    finite = np.isfinite(v)
    scale = float(np.max(np.abs(v[finite]))) if finite.any() else 0.0
    neg = finite & (v < -abs_tol * scale)
    if not neg.any():
        return NonNegative(float(np.min(v[finite])) if finite.any() else math.nan)

    def f(x):
        return float(k.density(np.array([x]))[0])

    idx = np.flatnonzero(neg)
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate([[idx[0]], idx[breaks + 1]])
    ends = np.concatenate([idx[breaks], [idx[-1]]])
    worst = int(np.argmin([v[s:e + 1].min() for s, e in zip(starts, ends)]))
    s, e = int(starts[worst]), int(ends[worst])
    # widen to the actual sign change; the tolerance only decides detection
    while s > 0 and v[s - 1] < 0:
        s -= 1
    while e + 1 < xs.size and v[e + 1] < 0:
        e += 1

    lo = _bisect(f, xs[s - 1], xs[s], grid.refine_iters) if s > 0 else float(xs[0])
    hi = _bisect(f, xs[e + 1], xs[e], grid.refine_iters) if e + 1 < xs.size else float(xs[-1])

    i = s + int(np.argmin(v[s:e + 1]))
    a, b = float(xs[max(i - 1, 0)]), float(xs[min(i + 1, xs.size - 1)])
    res = minimize_scalar(f, bounds=(a, b), method="bounded",
                          options={"xatol": 1e-7 * max(1.0, abs(xs[i]))})
    x_min, v_min = (float(res.x), float(res.fun)) if res.fun <= v[i] else (float(xs[i]), float(v[i]))
    return NegativeAt(x_min, v_min, (float(lo), float(hi)))


@dataclass(frozen=True)
class ClassVerdict:
    achieved_level: int
    bounded_above: bool
    witness_x: Optional[float] = None
    witness_value: Optional[float] = None
    witness_interval: Optional[tuple] = None
    witness_level: Optional[int] = None
    mass_failures: tuple = ()
    grid_used: ScanGrid = field(default=DEFAULT_GRID)
    distribution: str = ""

    def to_dict(self) -> dict:
        witness = None
        if self.witness_x is not None:
            witness = {
                "level": self.witness_level,
                "x": self.witness_x,
                "value": self.witness_value,
                "interval": list(self.witness_interval),
            }
        return {
            "distribution": self.distribution,
            "achieved_level": self.achieved_level,
            "bounded_above": self.bounded_above,
            "witness": witness,
            "mass_failures": [{"level": lv, "mass": m} for lv, m in self.mass_failures],
            "grid": asdict(self.grid_used),
        }


def classify(k: LevyDensity, max_level: int, grid: ScanGrid = DEFAULT_GRID,
             cfg: QuadratureConfig = DEFAULT_QUAD, name: str = "") -> ClassVerdict:
    """Largest j <= max_level with D^1..D^{j+1} k nonnegative on the grid and
    D^0..D^j k of infinite mass; -1 means infinitely divisible only.

    Levels are examined in order and the first failure (finite mass at level
    j, else a sign failure of D^{j+1}) stops the search.
    """
    if max_level < 0:
        raise ValueError("max_level must be nonnegative")
    name = name or k.label
    for j in range(max_level + 1):
        mass = total_mass(d_operator(k, j), cfg)
        if mass != math.inf:
            return ClassVerdict(j - 1, True, mass_failures=((j, mass),), grid_used=grid,
                                distribution=name)
        scan = sign_scan(d_operator(k, j + 1), grid)
        if isinstance(scan, NegativeAt):
            return ClassVerdict(j - 1, True, scan.x, scan.value, scan.interval, j + 1,
                                grid_used=grid, distribution=name)
    return ClassVerdict(max_level, False, grid_used=grid, distribution=name)


@dataclass(frozen=True)
class LevelRow:
    n: int
    grid_min: float
    mass: float


def level_report(k: LevyDensity, n_max: int, grid: ScanGrid = DEFAULT_GRID,
                 cfg: QuadratureConfig = DEFAULT_QUAD) -> list:
    rows = []
    xs = grid.nodes()
    for n in range(1, n_max + 1):
        dn = d_operator(k, n)
        rows.append(LevelRow(n, float(np.min(dn.density(xs))), total_mass(dn, cfg)))
    return rows


def series_truncation(rate_fn: Callable[[np.ndarray], np.ndarray], n: int, x_min: float,
                      rel: float = 1e-14, cap: int = 100_000) -> int:
    """Smallest K with sum_{k>K} b_k^n e^{-b_k x_min} < rel * sum_{k<=K} (capped).

    D^n multiplies the k-th series term by (b_k x)^n, so a truncation that
    suffices for the density itself can be far too short for its iterates.
    """
    b = np.asarray(rate_fn(np.arange(1, cap + 1)), dtype=np.float64)
    logw = n * np.log(b) - b * x_min
    w = np.exp(logw - logw.max())
    head = np.cumsum(w)
    suffix = np.cumsum(w[::-1])[::-1]
    tail = np.append(suffix[1:], 0.0)  # tail[K-1] = sum over k > K
    ok = np.flatnonzero(tail < rel * head)
    return int(ok[0] + 1) if ok.size else cap

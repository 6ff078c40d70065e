"""Monte Carlo draws from catalog laws and the empirical-cf band test.

Random numbers come from numpy's PCG64. Every (purpose, term, block) triple
gets its own stream, ``SeedSequence(seed, spawn_key=(purpose, k, block))``,
with blocks of ``BLOCK`` samples. Output is therefore independent of the
thread count, term k of a series draws the same numbers whatever the
truncation K, and a shorter run is a prefix of a longer one.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .distributions import DistributionSpec
from .errors import InvalidParam, TailUnknown

BLOCK = 1 << 16
_TERM, _TAIL, _GLOGIS = 1, 2, 3


def thread_count() -> int:
    """Worker cap from ``URBANIK_THREADS`` (default: CPU count)."""
    raw = os.environ.get("URBANIK_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def _gen(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def _blocks(n: int):
    return [(b, b * BLOCK, min(n, (b + 1) * BLOCK)) for b in range(-(-n // BLOCK))]


def _run_blocks(fn, n: int) -> np.ndarray:
    out = np.empty(n)
    jobs = _blocks(n)

    def work(job):
        b, lo, hi = job
        out[lo:hi] = fn(b, hi - lo)

    workers = min(thread_count(), len(jobs))
    if workers <= 1:
        for job in jobs:
            work(job)
    else:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(work, jobs))
    return out


def _series_samples(a: np.ndarray, n: int, seed: int, tail_var: float) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)

    def block(b, size):
        acc = np.zeros(size)
        for k, ak in enumerate(a, start=1):
            e = _gen(seed, _TERM, k, b).standard_exponential((size, 2))
            acc += ak * (e[:, 0] - e[:, 1])
        if tail_var > 0:
            acc += math.sqrt(tail_var) * _gen(seed, _TAIL, 0, b).standard_normal(size)
        return acc

    return _run_blocks(block, n)


def _check_n(n):
    if int(n) != n or n < 1:
        raise InvalidParam(f"sample count must be a positive integer, got {n!r}")


def sample_laplace(n: int, seed: int) -> np.ndarray:
    """Draws with density e^{-|x|}/2, as a difference of two exponentials."""
    _check_n(n)
    return _series_samples(np.array([1.0]), int(n), seed, 0.0)


@dataclass(frozen=True)
class SampleRun:
    distribution: DistributionSpec
    n: int
    K: int = 1000
    seed: int = 0
    tail_correction: str = "gaussian_variance_match"

    def __post_init__(self):
        _check_n(self.n)
        if self.K < 1:
            raise InvalidParam("K must be at least 1")
        if self.tail_correction not in ("none", "gaussian_variance_match"):
            raise InvalidParam(f"unknown tail correction {self.tail_correction!r}")


def sample_series(run: SampleRun) -> np.ndarray:
    """sum_{k<=K} a_k eta_k, plus an independent normal standing in for the
    dropped terms when ``tail_correction="gaussian_variance_match"``."""
    spec = run.distribution
    series = spec.series(run.K)
    if series is None:
        raise InvalidParam(f"{spec.name} has no Laplace-series representation")
    tail_var = 0.0
    if run.tail_correction == "gaussian_variance_match":
        tail_var = spec.tail_variance(run.K)
        if tail_var is None:
            raise TailUnknown(f"no analytic tail variance for {spec.name}")
    return _series_samples(series.a(), run.n, run.seed, tail_var)


def sample_generalized_logistic(alpha: float, n: int, seed: int) -> np.ndarray:
    """log(U/(1-U)) with U ~ Beta(alpha, alpha), computed as log G1 - log G2."""
    if not alpha > 0:
        raise InvalidParam("alpha must be positive")
    _check_n(n)

    def block(b, size):
        lg = np.log(_gen(seed, _GLOGIS, 0, b).standard_gamma(alpha, (size, 2)))
        return lg[:, 0] - lg[:, 1]

    return _run_blocks(block, int(n))


def sample(spec: DistributionSpec, n: int, seed: int, K: int = 1000,
           tail_correction: bool = True) -> np.ndarray:
    """Dispatch to the sampler suited to ``spec``."""
    if spec.name == "generalized_logistic":
        return sample_generalized_logistic(spec.params["alpha"], n, seed)
    mode = "gaussian_variance_match" if tail_correction else "none"
    return sample_series(SampleRun(spec, n, K, seed, mode))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EcfReport:
    t: np.ndarray
    ecf: np.ndarray
    target: np.ndarray
    band: float
    violations: int

    @property
    def deviation(self) -> np.ndarray:
        return np.abs(self.ecf - self.target)

    @property
    def allowed(self) -> int:
        # twice the 5% expected under the 95% band
        return int(math.floor(2 * 0.05 * self.t.size))

    @property
    def passed(self) -> bool:
        return self.violations <= self.allowed

    def rows(self):
        return [(float(t), float(e), float(g), self.band) for t, e, g in zip(self.t, self.ecf, self.target)]


def ecf_check(samples, target_cf, t_grid, z: float = 1.96) -> EcfReport:
    """Compare (1/n) sum cos(t x_i) with a real target cf on ``t_grid``."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        raise InvalidParam("need at least one sample")
    t = np.asarray(t_grid, dtype=np.float64)
    ecf = _kernels.cos_mean(samples, t)
    target = np.asarray(target_cf(t), dtype=np.float64)
    band = z / math.sqrt(samples.size)
    violations = int(np.sum(np.abs(ecf - target) > band))
    return EcfReport(t, ecf, target, band, violations)


def write_samples_csv(fh, samples) -> None:
    """RFC-4180 CSV with header ``x``; values are shortest round-trip reprs."""
    w = csv.writer(fh, lineterminator="\r\n")
    w.writerow(["x"])
    w.writerows([repr(float(v))] for v in samples)


def write_ecf_csv(fh, report: EcfReport) -> None:
    w = csv.writer(fh, lineterminator="\r\n")
    w.writerow(["t", "ecf", "target", "band"])
    for row in report.rows():
        w.writerow([repr(v) for v in row])

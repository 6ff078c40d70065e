"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported directly, so the result does not depend on
SELFDECOMP_PURE_PYTHON.
"""
import argparse
import timeit

import numpy as np

from selfdecomp._kernels import _pykernels

try:
    from selfdecomp._kernels import _ckernels
except ImportError:
    _ckernels = None


def cases():
    rng = np.random.default_rng(0)
    # sinh series with K = 10^4 on a 4000-point log grid
    k = np.arange(1, 10_001, dtype=np.float64)
    coeff = np.full(k.size, 2.0)
    power = np.zeros(k.size, dtype=np.int64)
    rate = np.pi * k
    x = np.geomspace(1e-4, 50, 4000)
    yield "exppoly_eval K=1e4, 4000 pts", "exppoly_eval", (coeff, power, rate, x)
    small = (np.array([1.0, -2.0, 3.0, 0.5]), np.arange(4, dtype=np.int64), np.array([1.0, 2.0, 3.0, 4.0]))
    pts = [np.array([v]) for v in rng.uniform(0.1, 5, 2000)]
    yield "2000 single-point calls, 4 terms", "point", (*small, pts)
    samples = rng.standard_normal(100_000)
    t = np.linspace(-8, 8, 161)
    yield "cos_mean n=1e5, 161 pts", "cos_mean", (samples, t)


def best_of(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def point_calls(impl, coeff, power, rate, xs):
    # bisection and Brent refinement evaluate one abscissa per call
    for xv in xs:
        impl.exppoly_eval(coeff, power, rate, xv)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'case':32s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for label, name, data in cases():
        if name == "point":
            py = best_of(lambda *a: point_calls(_pykernels, *a), data, args.repeat)
            if _ckernels is not None:
                cy = best_of(lambda *a: point_calls(_ckernels, *a), data, args.repeat)
                print(f"{label:32s} {py:11.4f} {cy:11.4f} {py / cy:7.1f}x")
            continue
        py = best_of(getattr(_pykernels, name), data, args.repeat)
        if _ckernels is None:
            print(f"{label:32s} {py:11.4f} {'n/a':>11s} {'':>8s}")
            continue
        cy = best_of(getattr(_ckernels, name), data, args.repeat)
        ref = getattr(_pykernels, name)(*data)
        err = np.max(np.abs(getattr(_ckernels, name)(*data) - ref) / np.maximum(np.abs(ref), 1e-300))
        print(f"{label:32s} {py:11.4f} {cy:11.4f} {py / cy:7.1f}x  (max rel diff {err:.1e})")


if __name__ == "__main__":
    main()

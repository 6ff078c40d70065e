"""Numpy implementations of the compiled kernels (fallback backend)."""
import numpy as np

_EXP_UNDERFLOW = 745.2  # exp(-745.2) == 0.0 in IEEE double
_BLOCK = 1 << 21


def exppoly_eval(coeff, power, rate, x):
    coeff = np.asarray(coeff, dtype=np.float64)
    power = np.asarray(power, dtype=np.int64)
    rate = np.asarray(rate, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros(x.shape[0])
    if coeff.size == 0 or x.size == 0:
        return out
    chunk = max(1, _BLOCK // x.shape[0])
    for start in range(0, rate.shape[0], chunk):
        sl = slice(start, start + chunk)
        live = rate[start] * x < _EXP_UNDERFLOW
        if not live.any():
            break
        xs = x[live]
        terms = np.exp(-np.multiply.outer(xs, rate[sl]))
        terms *= xs[:, None] ** power[sl]
        out[live] += terms @ coeff[sl]
    return out


def cos_mean(samples, t):
    samples = np.asarray(samples, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    out = np.empty(t.shape[0])
    for k, tk in enumerate(t):
        out[k] = np.cos(tk * samples).mean()
    return out

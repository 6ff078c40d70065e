# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: exponential-polynomial evaluation and cosine averages."""
import numpy as np
from libc.math cimport exp, cos


cdef inline double _ipow(double x, long long m) nogil:
    cdef double r = 1.0
    while m > 0:
        if m & 1:
            r *= x
        x *= x
        m >>= 1
    return r


def exppoly_eval(const double[::1] coeff, const long long[::1] power,
                 const double[::1] rate, const double[::1] x):
    cdef Py_ssize_t n = x.shape[0], m = coeff.shape[0], i, j
    cdef double xi, b, e, acc
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            xi = x[i]
            acc = 0.0
            j = 0
            while j < m:
                b = rate[j]
                e = exp(-b * xi)
                if e == 0.0:
                    # rates are sorted, every later factor underflows as well
                    break
                while j < m and rate[j] == b:
                    acc += coeff[j] * _ipow(xi, power[j]) * e
                    j += 1
            o[i] = acc
    return out


def cos_mean(const double[::1] samples, const double[::1] t):
    cdef Py_ssize_t n = samples.shape[0], nt = t.shape[0], i, k
    cdef double acc, tk
    out = np.empty(nt, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for k in range(nt):
            tk = t[k]
            acc = 0.0
            for i in range(n):
                acc += cos(tk * samples[i])
            o[k] = acc / n
    return out

"""Hot-loop kernels with a compiled backend and a numpy fallback.

The compiled module is used when it was built and importable; setting the
environment variable ``SELFDECOMP_PURE_PYTHON=1`` forces the fallback.
``BACKEND`` names the active choice.
"""
import os

import numpy as np

from . import _pykernels

if os.environ.get("SELFDECOMP_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"


def exppoly_eval(coeff, power, rate, x):
    """Evaluate sum(coeff * x**power * exp(-rate * x)) at every x.

    Terms must be sorted by rate (ties grouped together).
    """
    return _impl.exppoly_eval(
        np.ascontiguousarray(coeff, dtype=np.float64),
        np.ascontiguousarray(power, dtype=np.int64),
        np.ascontiguousarray(rate, dtype=np.float64),
        np.ascontiguousarray(x, dtype=np.float64),
    )


def cos_mean(samples, t):
    """Return (1/n) * sum_i cos(t * samples_i) for every t."""
    return _impl.cos_mean(
        np.ascontiguousarray(samples, dtype=np.float64),
        np.ascontiguousarray(t, dtype=np.float64),
    )

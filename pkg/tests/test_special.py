import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import loggamma

from selfdecomp.errors import DomainError
from selfdecomp.special import (
    LANCZOS_COEFFS,
    LANCZOS_G,
    complex_log_gamma,
    gamma_ratio_sq,
    log_beta,
    log_gamma,
)


def test_pinned_parameters():
    assert LANCZOS_G == 7.0 and len(LANCZOS_COEFFS) == 9


def test_known_values():
    assert abs(complex_log_gamma(1.0)) < 1e-15
    assert complex_log_gamma(5.0).real == pytest.approx(math.log(24.0), rel=1e-14)
    assert complex_log_gamma(0.5).real == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)


@pytest.mark.parametrize("y", [0.1, 0.5, 1.0, 3.0, 7.0])
def test_modulus_on_line_one(y):
    # |Gamma(1 + iy)|^2 = pi y / sinh(pi y)
    got = math.exp(2 * complex_log_gamma(1 + 1j * y).real)
    assert got == pytest.approx(math.pi * y / math.sinh(math.pi * y), rel=1e-13)


@given(st.floats(0.01, 20.0), st.floats(-20.0, 20.0))
def test_against_scipy(x, y):
    z = complex(x, y)
    got = complex_log_gamma(z)
    ref = complex(loggamma(z))
    assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("z", [0.3 + 15j, 2.5 - 0.5j, 19.0 + 19.0j, 0.05 + 0.01j])
def test_against_mpmath(z):
    with mpmath.workdps(30):
        ref = complex(mpmath.loggamma(z))
    assert abs(complex_log_gamma(z) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_vectorized_and_real():
    z = np.array([1.0, 2.0, 3.0])
    np.testing.assert_allclose(log_gamma(z), [0.0, 0.0, math.log(2.0)], atol=1e-14)
    assert complex_log_gamma(z).shape == (3,)


@pytest.mark.parametrize("z", [0.0, -1.0, -0.5 + 2j, complex("nan")])
def test_domain(z):
    with pytest.raises(DomainError):
        complex_log_gamma(z)


def test_log_beta():
    assert log_beta(2.0, 3.0) == pytest.approx(math.log(1.0 / 12.0), rel=1e-14)


def test_gamma_ratio_sq():
    assert gamma_ratio_sq(2.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    # |Gamma(2 + iy)|^2 = (1 + y^2) pi y / sinh(pi y)
    y = 1.3
    ref = (1 + y * y) * math.pi * y / math.sinh(math.pi * y)
    assert gamma_ratio_sq(2.0, y) == pytest.approx(ref, rel=1e-13)

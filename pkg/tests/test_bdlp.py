import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from selfdecomp.bdlp import (
    bdcf,
    bdcf_numeric,
    bdcf_table,
    log_derivative,
    residual_spec,
    verify_decomposition,
)
from selfdecomp.distributions import CATALOG_NAMES, catalog_get, series_density
from selfdecomp.errors import InvalidParam
from selfdecomp.levy import char_function
from selfdecomp.urbanik import d_operator

T5 = np.linspace(-5, 5, 101)


def test_sinh_at_one():
    spec = catalog_get("sinh")
    closed = math.exp(1 - 1 / math.tanh(1))
    assert closed == pytest.approx(0.7312, abs=1e-4)
    assert bdcf(spec, 1.0) == pytest.approx(closed, rel=1e-15)
    assert bdcf(spec, 1.0, "numeric") == pytest.approx(closed, abs=1e-8)


def test_cosh_at_two():
    spec = catalog_get("cosh")
    ref = math.exp(-2 * math.tanh(2))
    assert bdcf(spec, 2.0) == pytest.approx(ref, rel=1e-15)
    assert bdcf(spec, 2.0, "numeric") == pytest.approx(ref, abs=1e-8)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_origin(name):
    spec = catalog_get(name)
    assert bdcf(spec, 0.0) == 1.0
    assert bdcf(spec, 0.0, "numeric") == 1.0


def test_log_derivative_simple():
    # phi = exp(-t^2): (log phi)' = -2t
    assert log_derivative(lambda t: np.exp(-t * t), 0.7) == pytest.approx(-1.4, rel=1e-10)


@pytest.mark.parametrize("name", ["laplace", "sinh", "cosh", "tanh", "talacko_zolotarev"])
def test_numeric_matches_closed(name):
    spec = catalog_get(name)
    np.testing.assert_allclose(bdcf(spec, T5, "numeric"), bdcf(spec, T5), atol=1e-8)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_values_in_unit_interval(name):
    t = np.linspace(-10, 10, 81)
    psi = bdcf(catalog_get(name), t)
    assert np.all(psi > 0) and np.all(psi <= 1 + 1e-12)


@given(st.floats(0.01, 20))
def test_sinh_self_check(t):
    assert bdcf(catalog_get("sinh"), t) * math.exp(t / math.tanh(t) - 1) == pytest.approx(1.0, abs=1e-12)


def test_table():
    r = bdcf_table(catalog_get("cosh"), [0.0, 1.0])
    assert r.method == "closed" and r.psi_values[0] == 1.0
    assert bdcf_table(catalog_get("logistic", alpha=2.0), [1.0]).method == "numeric_logderiv"
    assert r.rows()[1] == (1.0, pytest.approx(math.exp(-math.tanh(1.0))))


def test_closed_missing():
    with pytest.raises(ValueError):
        bdcf(catalog_get("logistic"), 1.0, "closed")


@pytest.mark.parametrize("name", ["sinh", "cosh"])
@pytest.mark.parametrize("c", [0.3, 0.5, 0.9])
def test_decomposition(name, c):
    assert verify_decomposition(catalog_get(name), c, T5) < 1e-8


def test_decomposition_near_one():
    spec = catalog_get("sinh")
    res = residual_spec(spec, 1 - 1e-6)
    assert np.max(np.abs(bdcf(res, T5) - 1.0)) < 1e-4
    assert verify_decomposition(spec, 1 - 1e-6, T5) < 1e-8


def test_residual_spec_of_sinh_is_talacko_zolotarev():
    res = residual_spec(catalog_get("sinh"), 0.4)
    tz = catalog_get("talacko_zolotarev", c=0.4)
    np.testing.assert_allclose(res.cf_closed(T5), tz.cf_closed(T5), rtol=1e-14)
    np.testing.assert_allclose(bdcf(res, T5), bdcf(tz, T5), atol=1e-8)


def test_residual_spec_bad_c():
    with pytest.raises(InvalidParam):
        residual_spec(catalog_get("sinh"), 1.0)


@pytest.mark.parametrize("name,params", [("sinh", {}), ("cosh", {}), ("logistic", {"alpha": 2.0})])
def test_two_routes_to_bdrv(name, params):
    # D^1 of the series density is the BDRV Levy density; its cf is psi
    spec = catalog_get(name, **params)
    k = d_operator(series_density(spec.series(10_000)), 1)
    t = np.linspace(-5, 5, 41)
    np.testing.assert_allclose(char_function(k, t), bdcf(spec, t), atol=1e-6)


def test_numeric_array_shape():
    out = bdcf_numeric(catalog_get("sinh").cf_closed, np.ones((2, 2)))
    assert out.shape == (2, 2)

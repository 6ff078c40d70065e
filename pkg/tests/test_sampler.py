import csv
import io
import math

import numpy as np
import pytest

from selfdecomp import sampler
from selfdecomp.distributions import catalog_get
from selfdecomp.errors import InvalidParam, TailUnknown
from selfdecomp.sampler import (
    BLOCK,
    SampleRun,
    ecf_check,
    sample_generalized_logistic,
    sample_laplace,
    sample_series,
    write_ecf_csv,
    write_samples_csv,
)

N = 100_000
TGRID = np.linspace(-8, 8, 161)


@pytest.fixture(scope="module")
def laplace_draws():
    return sample_laplace(N, 2024)


class TestLaplace:
    def test_variance(self, laplace_draws):
        assert 1.94 <= laplace_draws.var() <= 2.06

    def test_sign_balance(self, laplace_draws):
        assert 0.494 <= np.mean(laplace_draws > 0) <= 0.506

    def test_mean(self, laplace_draws):
        assert abs(laplace_draws.mean()) < 0.02

    def test_deterministic(self):
        np.testing.assert_array_equal(sample_laplace(1000, 5), sample_laplace(1000, 5))
        assert not np.array_equal(sample_laplace(1000, 5), sample_laplace(1000, 6))

    def test_prefix_stable(self):
        long = sample_laplace(BLOCK + 100, 3)
        np.testing.assert_array_equal(sample_laplace(50, 3), long[:50])
        np.testing.assert_array_equal(sample_laplace(BLOCK + 10, 3), long[:BLOCK + 10])

    @pytest.mark.parametrize("n", [0, -1, 2.5])
    def test_bad_n(self, n):
        with pytest.raises(InvalidParam):
            sample_laplace(n, 1)


class TestSeries:
    def test_single_term_is_laplace(self):
        run = SampleRun(catalog_get("laplace"), 500, K=1, seed=11)
        np.testing.assert_array_equal(sample_series(run), sample_laplace(500, 11))

    def test_sinh_variance(self):
        x = sample_series(SampleRun(catalog_get("sinh"), N, 1000, 42))
        # Var(s^2) ~ (kappa4 + 2 sigma^4)/n; kappa4 = 2/15 for the t/sinh t law
        var, kappa4 = 1 / 3, 2 / 15
        sd = math.sqrt((kappa4 + 2 * var**2) / N)
        assert abs(x.var() - var) < 3 * sd

    def test_cosh_variance(self):
        x = sample_series(SampleRun(catalog_get("cosh"), N, 1000, 9))
        var, kappa4 = 1.0, 2.0
        assert abs(x.var() - var) < 3 * math.sqrt((kappa4 + 2 * var**2) / N)

    def test_variance_additivity_without_tail(self):
        spec = catalog_get("sinh")
        K = 10
        x = sample_series(SampleRun(spec, N, K, 1, "none"))
        a = spec.series(K).a()
        var = 2 * np.sum(a**2)
        kappa4 = 12 * np.sum(a**4)
        assert abs(x.var() - var) < 3 * math.sqrt((kappa4 + 2 * var**2) / N)

    def test_term_streams_shared_across_K(self):
        spec = catalog_get("sinh")
        a = spec.series(3).a()
        x2 = sample_series(SampleRun(spec, 100, 2, 4, "none"))
        x3 = sample_series(SampleRun(spec, 100, 3, 4, "none"))
        # the third term alone is a scaled Laplace draw, symmetric about 0
        diff = (x3 - x2) / a[2]
        assert np.all(np.isfinite(diff)) and abs(np.mean(diff)) < 0.5

    def test_tail_unknown(self):
        spec = catalog_get("sinh")
        from dataclasses import replace
        bare = replace(spec, tail_sum_sq=None)
        with pytest.raises(TailUnknown):
            sample_series(SampleRun(bare, 10, 5, 0))
        assert sample_series(SampleRun(bare, 10, 5, 0, "none")).size == 10

    def test_no_series(self):
        with pytest.raises(InvalidParam):
            sample_series(SampleRun(catalog_get("tanh"), 10))

    def test_run_validation(self):
        with pytest.raises(InvalidParam):
            SampleRun(catalog_get("sinh"), 10, K=0)
        with pytest.raises(InvalidParam):
            SampleRun(catalog_get("sinh"), 10, tail_correction="exact")

    def test_truncation_consistency(self):
        spec = catalog_get("sinh")
        t = np.linspace(-8, 8, 33)
        lo = ecf_check(sample_series(SampleRun(spec, 20_000, 100, 3, "none")), spec.cf_closed, t)
        hi = ecf_check(sample_series(SampleRun(spec, 20_000, 10_000, 3, "none")), spec.cf_closed, t)
        bound = t**2 * spec.series(100).dropped_sum_sq()
        assert np.all(np.abs(lo.ecf - hi.ecf) <= bound + 1e-12)

    def test_threads_do_not_change_output(self, monkeypatch):
        run = SampleRun(catalog_get("cosh"), 2 * BLOCK + 7, 20, 8)
        monkeypatch.setenv("URBANIK_THREADS", "1")
        one = sample_series(run)
        monkeypatch.setenv("URBANIK_THREADS", "3")
        assert sampler.thread_count() == 3
        np.testing.assert_array_equal(sample_series(run), one)


class TestGeneralizedLogistic:
    def test_logistic_alpha_one(self):
        x = sample_generalized_logistic(1.0, N, 17)
        target = catalog_get("generalized_logistic", alpha=1.0).cf_closed
        assert ecf_check(x, target, TGRID).passed

    def test_median(self):
        assert abs(np.median(sample_generalized_logistic(2.0, N, 3))) < 0.02

    def test_alpha_two_band(self):
        x = sample_generalized_logistic(2.0, N, 7)
        r = ecf_check(x, catalog_get("generalized_logistic", alpha=2.0).cf_closed, TGRID)
        assert r.violations <= 0.05 * TGRID.size

    def test_invalid(self):
        with pytest.raises(InvalidParam):
            sample_generalized_logistic(0.0, 10, 1)


class TestEcf:
    def test_origin(self):
        r = ecf_check(sample_laplace(1001, 1), lambda t: 1 / (1 + t * t), [0.0])
        assert r.ecf[0] == 1.0 and r.deviation[0] == 0.0

    def test_band(self):
        r = ecf_check(np.zeros(400), lambda t: np.ones_like(t), [1.0])
        assert r.band == pytest.approx(1.96 / 20)

    def test_wrong_target_fails(self):
        x = sample_series(SampleRun(catalog_get("sinh"), N, 1000, 42))
        assert ecf_check(x, catalog_get("sinh").cf_closed, TGRID).passed
        assert not ecf_check(x, catalog_get("cosh").cf_closed, TGRID).passed

    def test_empty(self):
        with pytest.raises(InvalidParam):
            ecf_check([], np.cos, [1.0])


class TestCsv:
    def test_samples(self):
        buf = io.StringIO()
        write_samples_csv(buf, [0.1, -2.5])
        assert buf.getvalue() == "x\r\n0.1\r\n-2.5\r\n"

    def test_ecf(self):
        r = ecf_check(np.zeros(4), lambda t: np.ones_like(t), [0.0, 1.0])
        buf = io.StringIO()
        write_ecf_csv(buf, r)
        rows = list(csv.reader(io.StringIO(buf.getvalue())))
        assert rows[0] == ["t", "ecf", "target", "band"]
        assert [float(v) for v in rows[2]] == [1.0, 1.0, 1.0, 0.98]

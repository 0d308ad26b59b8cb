import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from cyclosense.theory import (
    FDistParams,
    baseline_ratio_threshold,
    energy_threshold,
    f_cdf,
    h0_cdf,
    pf_of_threshold,
    regularized_incomplete_beta,
    threshold_for_pf,
)


@pytest.mark.parametrize("lam, pf", [(9, 0.1), (1, 0.5), (19, 0.05)])
def test_pf_of_threshold(lam, pf):
    assert pf_of_threshold(lam) == pytest.approx(pf, abs=1e-15)


@pytest.mark.parametrize("pf, lam", [(0.1, 9), (0.5, 1), (0.01, 99)])
def test_threshold_for_pf(pf, lam):
    assert threshold_for_pf(pf) == pytest.approx(lam, rel=1e-14)


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_pf_of_threshold_domain(bad):
    with pytest.raises(ValueError):
        pf_of_threshold(bad)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.5])
def test_threshold_for_pf_domain(bad):
    with pytest.raises(ValueError):
        threshold_for_pf(bad)


def _round_trip_error_ok(lam):
    # pf = 1/(lam+1) is stored near 1 for small lam, which caps the recoverable
    # absolute precision at a few ulp(1); elsewhere relative 1e-14 holds
    back = threshold_for_pf(pf_of_threshold(lam))
    return abs(back - lam) <= 1e-14 * lam + 4.5e-16


@settings(max_examples=300)
@given(st.floats(1e-3, 1e6))
def test_round_trip(lam):
    assert _round_trip_error_ok(lam)


def test_round_trip_grid():
    lams = np.logspace(-3, 6, 2000)
    assert all(_round_trip_error_ok(l) for l in lams)
    big = lams[lams >= 0.05]
    back = np.array([threshold_for_pf(pf_of_threshold(l)) for l in big])
    np.testing.assert_allclose(back, big, rtol=1e-14, atol=0)


def test_pf_strictly_decreasing():
    lams = np.logspace(-3, 6, 500)
    pfs = np.array([pf_of_threshold(l) for l in lams])
    assert np.all(np.diff(pfs) < 0)


class TestIncompleteBeta:
    @pytest.mark.parametrize("z", [0.0, 0.1, 0.37, 0.5, 0.9, 1.0])
    def test_uniform_case(self, z):
        assert regularized_incomplete_beta(z, 1, 1) == pytest.approx(z, abs=1e-15)

    def test_endpoints(self):
        assert regularized_incomplete_beta(0.0, 2.5, 3.5) == 0.0
        assert regularized_incomplete_beta(1.0, 2.5, 3.5) == 1.0

    # values from adaptive quadrature of t (1 - t)^2 over [0, z], divided by B(2, 3)
    @pytest.mark.parametrize(
        "z, expected",
        [(0.05, 0.01401875), (0.2, 0.1808), (0.5, 0.6875), (0.8, 0.9728), (0.95, 0.99951875)],
    )
    def test_against_frozen_quadrature(self, z, expected):
        assert regularized_incomplete_beta(z, 2, 3) == pytest.approx(expected, abs=1e-10)

    def test_against_live_quadrature(self):
        total = integrate.quad(lambda t: t * (1 - t) ** 2, 0, 1)[0]
        for z in np.linspace(0, 1, 41):
            part = integrate.quad(lambda t: t * (1 - t) ** 2, 0, z, epsabs=1e-14, epsrel=1e-14)[0]
            assert regularized_incomplete_beta(z, 2, 3) == pytest.approx(part / total, abs=1e-10)

    @pytest.mark.parametrize("a, b", [(0.5, 0.5), (1, 2), (2.5, 7), (10, 3), (0.3, 12)])
    def test_against_scipy(self, a, b):
        for z in np.linspace(0, 1, 51):
            assert regularized_incomplete_beta(z, a, b) == pytest.approx(special.betainc(a, b, z), abs=1e-13)

    @pytest.mark.parametrize("z, a, b", [(-0.1, 1, 1), (1.1, 1, 1), (0.5, 0, 1), (0.5, 1, -2)])
    def test_domain(self, z, a, b):
        with pytest.raises(ValueError):
            regularized_incomplete_beta(z, a, b)

    @settings(max_examples=100, deadline=None)
    @given(
        st.floats(0.0, 1.0),
        st.floats(0.0, 1.0),
        st.floats(0.1, 20.0),
        st.floats(0.1, 20.0),
    )
    def test_monotone_and_bounded(self, z1, z2, a, b):
        lo, hi = sorted((z1, z2))
        i_lo = regularized_incomplete_beta(lo, a, b)
        i_hi = regularized_incomplete_beta(hi, a, b)
        assert 0.0 <= i_lo <= i_hi + 1e-14 <= 1.0 + 1e-14


class TestFDistribution:
    @pytest.mark.parametrize("r", [0.1, 1.0, 9.0, 100.0])
    def test_two_two_closed_form(self, r):
        assert f_cdf(r, FDistParams(2, 2)) == pytest.approx(r / (r + 1), abs=1e-12)

    def test_two_two_dense_grid(self):
        for r in np.concatenate([[0.0], np.logspace(-6, 4, 400)]):
            assert abs(f_cdf(r) - h0_cdf(r)) < 1e-12

    def test_zero(self):
        assert f_cdf(0.0, FDistParams(3, 7)) == 0.0

    def test_two_four_analytic(self):
        # I_{1/3}(1, 2) = 1 - (2/3)^2
        assert f_cdf(1.0, FDistParams(2, 4)) == pytest.approx(5 / 9, abs=1e-14)

    @pytest.mark.parametrize("d1, d2", [(1, 1), (4, 6), (10, 3), (2, 30)])
    def test_against_scipy(self, d1, d2):
        from scipy.stats import f as fdist

        for r in [0.01, 0.3, 1, 2.5, 10, 80]:
            assert f_cdf(r, FDistParams(d1, d2)) == pytest.approx(fdist.cdf(r, d1, d2), abs=1e-12)

    def test_bad_params(self):
        with pytest.raises(ValueError):
            FDistParams(0, 2)
        with pytest.raises(ValueError):
            f_cdf(-1.0)


class TestEnergyThreshold:
    def test_median_threshold_is_nominal(self):
        assert energy_threshold(0.5, 1000, 2.0) == pytest.approx(2.0, abs=1e-15)

    def test_tabulated_quantile(self):
        # Q^-1(0.1) = 1.2815515655446004
        assert energy_threshold(0.1, 10_000, 1.0) == pytest.approx(1.012816, abs=1e-6)

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            energy_threshold(0.1, 50)

    @pytest.mark.slow
    def test_calibration_without_uncertainty(self):
        n, trials = 18432, 20000
        lam = energy_threshold(0.1, n, 1.0)
        rng = np.random.default_rng(99)
        # the mean power of n unit circular samples is Gamma(n, 1/n)
        stat = rng.gamma(n, 1.0 / n, size=trials)
        assert abs(np.mean(stat >= lam) - 0.1) < 0.01


def test_baseline_ratio_threshold_scaling():
    lam = baseline_ratio_threshold(0.1, 1152, 128, 126)
    assert lam == pytest.approx(math.sqrt(9 * 1026 / 1024), rel=1e-14)

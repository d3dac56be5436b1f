"""Tests for Monte Carlo and quadrature smoothing oracles and the
inequality checks built on them."""

import math

import numpy as np
import pytest

from spbzo.catalog import UnsupportedFunctionError, get_function
from spbzo.seeding import make_rng
from spbzo.smoothing import (
    check_approx_error,
    check_descent_lemma,
    check_moment_bound,
    gaussian_norm_moment_mc,
    gs_grad_fd_oracle,
    gs_grad_oracle,
    gs_grad_onepoint_mc,
    gs_grad_quadrature_1d,
    gs_grad_twopoint_mc,
    gs_value_mc,
    gs_value_oracle,
    gs_value_quadrature,
)

ORACLE_IDS = ("abs1d", "pw1d", "quad", "quart")


class TestMonteCarloEstimators:
    def test_value_estimate_matches_closed_form(self):
        fn = get_function("quad")
        est = gs_value_mc(fn, [1.0, 2.0], sigma=0.5, n=200_000, seed=0)
        exact = fn.analytic_gs_value([1.0, 2.0], 0.5)
        assert abs(est.mean - exact) <= 4.0 * est.stderr
        assert est.n == 200_000 and est.seed == 0

    def test_estimates_are_seed_deterministic(self):
        fn = get_function("abs1d")
        a = gs_value_mc(fn, 0.7, 0.3, n=5000, seed=3)
        b = gs_value_mc(fn, 0.7, 0.3, n=5000, seed=3)
        assert a.mean == b.mean and a.stderr == b.stderr
        c = gs_value_mc(fn, 0.7, 0.3, n=5000, seed=4)
        assert c.mean != a.mean

    @pytest.mark.parametrize("estimator", [gs_grad_onepoint_mc, gs_grad_twopoint_mc])
    def test_gradient_estimators_unbiased(self, estimator):
        fn = get_function("quad")
        x = np.array([0.5, -1.5])
        est = estimator(fn, x, sigma=0.4, n=400_000, seed=1)
        exact = fn.analytic_gs_grad(x, 0.4)
        assert np.all(np.abs(est.mean - exact) <= 4.0 * est.stderr + 1e-12)

    def test_differenced_form_cuts_variance_far_from_minimum(self):
        fn = get_function("abs1d")
        one = gs_grad_onepoint_mc(fn, 5.0, 0.1, n=2000, seed=0)
        two = gs_grad_twopoint_mc(fn, 5.0, 0.1, n=2000, seed=0)
        assert two.stderr[0] < one.stderr[0] / 5.0

    def test_one_and_two_point_forms_estimate_the_same_target(self):
        fn = get_function("pw1d")
        one = gs_grad_onepoint_mc(fn, 0.4, 0.3, n=300_000, seed=2)
        two = gs_grad_twopoint_mc(fn, 0.4, 0.3, n=300_000, seed=3)
        pooled = math.sqrt(float(one.stderr[0]) ** 2 + float(two.stderr[0]) ** 2)
        assert abs(float(one.mean[0]) - float(two.mean[0])) <= 4.0 * pooled

    def test_input_validation(self):
        fn = get_function("quad")
        with pytest.raises(ValueError):
            gs_value_mc(fn, [0.0, 0.0], sigma=0.0, n=100, seed=0)
        with pytest.raises(ValueError):
            gs_value_mc(fn, [0.0, 0.0], sigma=0.1, n=1, seed=0)


class TestQuadratureOracles:
    def test_one_dimensional_members_match_closed_forms(self):
        for fid in ("abs1d", "pw1d"):
            fn = get_function(fid)
            for x in (-2.0, -0.4, 0.0, 0.15, 0.9, 3.0):
                for sigma in (0.05, 0.3, 1.0):
                    res = gs_value_quadrature(fn, x, sigma)
                    if fn.analytic_gs_value is not None:
                        assert abs(res.value - fn.analytic_gs_value(x, sigma)) <= 1e-10
                    mc = gs_value_mc(fn, x, sigma, n=200_000, seed=0)
                    assert abs(res.value - mc.mean) <= 5.0 * mc.stderr + 1e-4
                    assert res.est_error <= 1e-8

    def test_two_dimensional_members_match_closed_forms(self):
        for fid in ("quad", "quart"):
            fn = get_function(fid)
            for x in ([0.0, 0.0], [1.0, -0.5], [2.0, 2.0]):
                for sigma in (0.1, 0.6):
                    res = gs_value_quadrature(fn, x, sigma)
                    exact = fn.analytic_gs_value(x, sigma)
                    assert abs(res.value - exact) <= 1e-10 * max(1.0, abs(exact))

    def test_gradient_quadrature_matches_closed_form(self):
        fn = get_function("abs1d")
        for x in (-1.2, 0.0, 0.3, 2.5):
            for sigma in (0.1, 0.7):
                res = gs_grad_quadrature_1d(fn, x, sigma)
                exact = fn.analytic_gs_grad(x, sigma)[0]
                assert abs(np.asarray(res.value).reshape(-1)[0] - exact) <= 1e-10

    def test_piecewise_gradient_quadrature_against_finite_differences(self):
        fn = get_function("pw1d")
        for x in (-0.6, 0.1, 0.5, 1.4):
            sigma = 0.25
            grad = np.asarray(gs_grad_quadrature_1d(fn, x, sigma).value).reshape(-1)[0]
            step = 1e-5
            fd = (
                gs_value_quadrature(fn, x + step, sigma).value
                - gs_value_quadrature(fn, x - step, sigma).value
            ) / (2.0 * step)
            assert abs(grad - fd) <= 1e-6

    def test_fd_gradient_oracle_matches_closed_form(self):
        fn = get_function("quart")
        x = np.array([0.8, -0.3])
        sigma = 0.4
        fd = gs_grad_fd_oracle(fn, x, sigma)
        assert np.allclose(fd, fn.analytic_gs_grad(x, sigma), atol=1e-8)

    def test_high_dimensional_members_unsupported(self):
        for fid in ("relu_net", "nnls"):
            fn = get_function(fid)
            with pytest.raises(UnsupportedFunctionError):
                gs_value_quadrature(fn, np.zeros(fn.dim), 0.3)

    def test_invalid_sigma_rejected(self):
        with pytest.raises(ValueError):
            gs_value_quadrature(get_function("abs1d"), 0.0, 0.0)


class TestBestOracleDispatch:
    def test_closed_form_preferred(self):
        fn = get_function("quad")
        assert gs_value_oracle(fn, [1.0, 1.0], 0.5) == fn.analytic_gs_value([1.0, 1.0], 0.5)
        assert np.array_equal(gs_grad_oracle(fn, [1.0, 1.0], 0.5), np.array([1.0, 1.0]))

    def test_quadrature_fallback_for_piecewise_member(self):
        fn = get_function("pw1d")
        got = gs_value_oracle(fn, 0.4, 0.3)
        mc = gs_value_mc(fn, 0.4, 0.3, n=200_000, seed=1)
        assert abs(got - mc.mean) <= 5.0 * mc.stderr
        grad = gs_grad_oracle(fn, 0.4, 0.3)
        assert grad.shape == (1,)

    def test_high_dimensional_members_have_no_oracle(self):
        fn = get_function("relu_net")
        with pytest.raises(UnsupportedFunctionError):
            gs_value_oracle(fn, np.zeros(3), 0.3)


class TestDescentLemma:
    @pytest.mark.parametrize("fid", ORACLE_IDS)
    def test_no_violations_on_random_pairs(self, fid):
        fn = get_function(fid)
        res = check_descent_lemma(fn, pairs=200, seed=0)
        assert res["violations"] == 0
        assert res["max_violation"] <= res["tol"]

    def test_fixed_sigma_accepted(self):
        res = check_descent_lemma(get_function("quad"), sigma=0.2, pairs=50, seed=1)
        assert res["violations"] == 0


class TestApproxError:
    @pytest.mark.parametrize("fid", ORACLE_IDS)
    def test_no_violations_on_random_points(self, fid):
        fn = get_function(fid)
        res = check_approx_error(fn, points=200, seed=0)
        assert res["violations"] == 0
        assert 0.0 < res["worst_ratio"] <= 1.0 + 1e-12


class TestMomentBound:
    @pytest.mark.parametrize("p", [1, 2, 4])
    def test_bound_holds_for_quadratic_member(self, p):
        fn = get_function("quad")
        res = check_moment_bound(fn, [1.0, -2.0], sigma=0.5, p=p, n=50_000, seed=0)
        assert res["ok"]
        assert res["estimate"] <= res["bound"] * (1.0 + 5.0 * res["rel_stderr"])

    def test_zeroth_moment_trivial(self):
        res = check_moment_bound(get_function("abs1d"), 0.5, 0.3, p=0)
        assert res["ok"] and res["estimate"] == 1.0

    def test_out_of_range_p_rejected(self):
        with pytest.raises(ValueError):
            check_moment_bound(get_function("abs1d"), 0.5, 0.3, p=7)


class TestGaussianNormMoments:
    @pytest.mark.parametrize("d", [1, 2, 5, 10])
    @pytest.mark.parametrize("p", [1, 2, 3, 4])
    def test_moment_bound_by_shifted_dimension_power(self, d, p):
        est = gaussian_norm_moment_mc(d, p, n=100_000, seed=0)
        assert est.mean + 4.0 * est.stderr <= (p + d) ** (p / 2.0)

    def test_second_moment_matches_dimension(self):
        est = gaussian_norm_moment_mc(6, 2, n=200_000, seed=1)
        assert abs(est.mean - 6.0) <= 4.0 * est.stderr

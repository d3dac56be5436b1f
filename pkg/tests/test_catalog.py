"""Tests for the certified test-function catalog."""

import math
from dataclasses import replace

import numpy as np
import pytest

from spbzo import _netdata
from spbzo.catalog import (
    PW1D_KINK_INNER,
    PW1D_KINK_OUTER,
    SpbCertificate,
    UnsupportedFunctionError,
    clarke_norm_bound,
    evaluate,
    function_ids,
    get_function,
    lipschitz_envelope,
    make_quad,
    make_quart,
    validate_certificate,
)
from spbzo.seeding import make_rng

ALL_IDS = ("abs1d", "nnls", "pw1d", "quad", "quart", "relu_net")


def finite_difference_gradient(fn, x, step=1e-6):
    """Central-difference gradient of a catalog member's oracle."""
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = step
        g[i] = (evaluate(fn, x + e) - evaluate(fn, x - e)) / (2.0 * step)
    return g


class TestRegistry:
    def test_function_ids_complete(self):
        assert sorted(function_ids()) == sorted(ALL_IDS)

    def test_get_function_returns_member_with_matching_id(self):
        for fid in ALL_IDS:
            assert get_function(fid).id == fid

    def test_unknown_id_error_lists_available(self):
        with pytest.raises(ValueError) as err:
            get_function("no_such_member")
        for fid in ALL_IDS:
            assert fid in str(err.value)


class TestCertificateValidation:
    def test_r2_must_be_positive(self):
        with pytest.raises(ValueError):
            SpbCertificate(r1=0.0, r2=0.0, m=0)
        with pytest.raises(ValueError):
            SpbCertificate(r1=0.0, r2=-1.0, m=0)

    def test_r1_nonnegative(self):
        with pytest.raises(ValueError):
            SpbCertificate(r1=-0.5, r2=1.0, m=1)

    def test_slope_and_degree_vanish_together(self):
        with pytest.raises(ValueError):
            SpbCertificate(r1=0.0, r2=1.0, m=1)
        with pytest.raises(ValueError):
            SpbCertificate(r1=1.0, r2=1.0, m=0)

    def test_degree_is_nonnegative_integer(self):
        with pytest.raises(ValueError):
            SpbCertificate(r1=1.0, r2=1.0, m=-1)
        with pytest.raises(ValueError):
            SpbCertificate(r1=1.0, r2=1.0, m=1.5)
        assert SpbCertificate(r1=1.0, r2=1.0, m=2.0).m == 2


class TestClarkeNormBound:
    def test_lipschitz_case_flat_everywhere(self):
        cert = SpbCertificate(r1=0.0, r2=1.0, m=0)
        assert clarke_norm_bound(cert, 0.0) == 1.0
        assert clarke_norm_bound(cert, [3.0, 4.0]) == 1.0

    def test_linear_growth(self):
        cert = get_function("quad").certificate
        assert clarke_norm_bound(cert, [3.0, 4.0]) == pytest.approx(5.1, abs=1e-15)

    def test_cubic_growth(self):
        cert = get_function("quart").certificate
        expected = 4.0 * math.sqrt(2.0) ** 3 + 0.1
        assert clarke_norm_bound(cert, [1.0, 1.0]) == pytest.approx(expected, rel=1e-15)


class TestLipschitzEnvelope:
    def test_linear_growth_value(self):
        cert = SpbCertificate(r1=1.0, r2=0.1, m=1)
        got = lipschitz_envelope(cert, [1.0, 0.0], [0.0, 1.0])
        expected = (1.0 + math.sqrt(2.0) + 0.1) * math.sqrt(2.0)
        assert got == pytest.approx(expected, rel=1e-15)

    def test_lipschitz_case_reduces_to_r2_times_distance(self):
        cert = SpbCertificate(r1=0.0, r2=2.0, m=0)
        assert lipschitz_envelope(cert, [0.0], [3.0]) == pytest.approx(6.0)

    @pytest.mark.parametrize("fid", ["quad", "quart", "abs1d", "pw1d"])
    def test_bounds_actual_increments_both_argument_orders(self, fid):
        fn = get_function(fid)
        rng = make_rng(3)
        for _ in range(1000):
            x = rng.uniform(-5.0, 5.0, size=fn.dim)
            y = rng.uniform(-5.0, 5.0, size=fn.dim)
            diff = abs(evaluate(fn, x) - evaluate(fn, y))
            assert diff <= lipschitz_envelope(fn.certificate, x, y) + 1e-9
            assert diff <= lipschitz_envelope(fn.certificate, y, x) + 1e-9


class TestQuad:
    def test_value(self):
        fn = get_function("quad")
        assert evaluate(fn, [3.0, 4.0]) == 12.5

    def test_smoothed_value_adds_constant(self):
        fn = get_function("quad")
        assert fn.analytic_gs_value([1.0, 2.0], 0.5) == pytest.approx(2.5 + 0.5 * 0.25 * 2)

    def test_smoothed_gradient_is_identity(self):
        fn = get_function("quad")
        assert np.allclose(fn.analytic_gs_grad([1.0, -2.0], 0.3), [1.0, -2.0])

    def test_level_radius(self):
        fn = get_function("quad")
        assert fn.level_radius(2.0) == pytest.approx(2.0)
        assert fn.level_radius(-1.0) == 0.0

    def test_metadata(self):
        fn = get_function("quad")
        assert fn.convex and fn.inf_value == 0.0
        assert np.array_equal(fn.minimizer, np.zeros(2))

    def test_other_dimensions_available(self):
        fn = make_quad(dim=5)
        assert fn.dim == 5 and fn.id == "quad5"
        assert evaluate(fn, np.ones(5)) == 2.5


class TestQuart:
    def test_value(self):
        fn = get_function("quart")
        assert evaluate(fn, [1.0, 1.0]) == pytest.approx(4.0)

    def test_smoothed_value_against_monte_carlo(self):
        fn = get_function("quart")
        x = np.array([0.7, -0.4])
        sigma = 0.6
        rng = make_rng(11)
        u = rng.standard_normal((400_000, 2))
        vals = fn.eval_batch(x + sigma * u)
        mc = float(vals.mean())
        se = float(vals.std(ddof=1) / math.sqrt(vals.shape[0]))
        assert abs(fn.analytic_gs_value(x, sigma) - mc) <= 4.0 * se

    def test_smoothed_gradient_against_finite_differences(self):
        fn = get_function("quart")
        x = np.array([0.9, 0.2])
        sigma = 0.4
        step = 1e-6
        fd = np.zeros(2)
        for i in range(2):
            e = np.zeros(2)
            e[i] = step
            fd[i] = (fn.analytic_gs_value(x + e, sigma) - fn.analytic_gs_value(x - e, sigma)) / (
                2.0 * step
            )
        assert np.allclose(fn.analytic_gs_grad(x, sigma), fd, atol=1e-7)

    def test_level_radius(self):
        fn = get_function("quart")
        assert fn.level_radius(16.0) == pytest.approx(2.0)

    def test_other_dimensions_available(self):
        fn = make_quart(dim=3)
        assert fn.dim == 3 and evaluate(fn, [1.0, 1.0, 1.0]) == pytest.approx(9.0)


class TestAbs1d:
    def test_value_and_pieces(self):
        fn = get_function("abs1d")
        assert evaluate(fn, -2.0) == 2.0
        assert len(fn.pieces_1d) == 2
        assert fn.pieces_1d[0].deriv(np.array([-1.0]))[0] == -1.0
        assert fn.pieces_1d[1].deriv(np.array([1.0]))[0] == 1.0

    def test_smoothed_value_at_origin(self):
        fn = get_function("abs1d")
        sigma = 0.3
        assert fn.analytic_gs_value(0.0, sigma) == pytest.approx(sigma * math.sqrt(2.0 / math.pi))

    def test_smoothed_gradient_saturates(self):
        fn = get_function("abs1d")
        assert fn.analytic_gs_grad(5.0, 0.1)[0] == pytest.approx(1.0, abs=1e-12)
        assert fn.analytic_gs_grad(0.0, 0.1)[0] == 0.0

    def test_smoothed_value_dominates_and_approaches_original(self):
        fn = get_function("abs1d")
        for x in (-2.0, -0.3, 0.0, 0.7, 4.0):
            above = fn.analytic_gs_value(x, 0.5)
            closer = fn.analytic_gs_value(x, 0.01)
            assert above >= abs(x)
            assert abs(x) <= closer <= above + 1e-15


class TestPw1d:
    def test_kinks_solve_crossover_equation(self):
        for k in (PW1D_KINK_INNER, PW1D_KINK_OUTER):
            assert k * k == pytest.approx(k - 0.125, abs=1e-15)
        assert 0.0 < PW1D_KINK_INNER < PW1D_KINK_OUTER < 1.0

    def test_values(self):
        fn = get_function("pw1d")
        assert evaluate(fn, 0.0) == 0.0
        assert evaluate(fn, 0.5) == pytest.approx(0.375)
        assert evaluate(fn, -2.0) == pytest.approx(4.0)
        assert evaluate(fn, 0.1) == pytest.approx(0.01)

    def test_five_pieces_with_matching_derivatives(self):
        fn = get_function("pw1d")
        assert len(fn.pieces_1d) == 5
        lows = [p.lo for p in fn.pieces_1d]
        his = [p.hi for p in fn.pieces_1d]
        assert lows == [-math.inf, -PW1D_KINK_OUTER, -PW1D_KINK_INNER, PW1D_KINK_INNER, PW1D_KINK_OUTER]
        assert his == lows[1:] + [math.inf]
        # Derivative of each piece agrees with finite differences of eval.
        probe = [-2.0, -0.5, 0.0, 0.5, 2.0]
        for piece, t in zip(fn.pieces_1d, probe):
            fd = (evaluate(fn, t + 1e-7) - evaluate(fn, t - 1e-7)) / 2e-7
            assert piece.deriv(np.array([t]))[0] == pytest.approx(fd, abs=1e-6)

    def test_level_radius(self):
        fn = get_function("pw1d")
        assert fn.level_radius(0.04) == pytest.approx(0.165)  # min(0.2, 0.165)
        assert fn.level_radius(4.0) == pytest.approx(2.0)  # min(2.0, 4.125)


class TestNetworkMembers:
    def test_relu_net_value_at_origin(self):
        fn = get_function("relu_net")
        expected = float(np.maximum(_netdata.RELU_B1, 0.0) @ _netdata.RELU_W2 + _netdata.RELU_B2)
        assert evaluate(fn, np.zeros(3)) == pytest.approx(expected)

    def test_nnls_value_at_origin_is_sum_of_squared_targets(self):
        fn = get_function("nnls")
        assert evaluate(fn, np.zeros(6)) == pytest.approx(float(np.sum(_netdata.NNLS_Y**2)))

    def test_nnls_value_by_hand(self):
        fn = get_function("nnls")
        w = np.array([1.0, 0.0, 1.0, -1.0, 0.5, 2.0])  # (a1, b1, v1, a2, b2, v2)
        pred = 1.0 * np.maximum(1.0 * _netdata.NNLS_T + 0.0, 0.0) + 2.0 * np.maximum(
            -1.0 * _netdata.NNLS_T + 0.5, 0.0
        )
        expected = float(np.sum((pred - _netdata.NNLS_Y) ** 2))
        assert evaluate(fn, w) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("fid", ["relu_net", "nnls"])
    def test_gradient_matches_finite_differences(self, fid):
        fn = get_function(fid)
        rng = make_rng(5)
        for _ in range(25):
            x = rng.uniform(-2.0, 2.0, size=fn.dim)
            g = fn.analytic_grad(x)
            fd = finite_difference_gradient(fn, x)
            assert np.allclose(g, fd, atol=1e-4), f"{fid} at {x}"


class TestOracleConsistency:
    @pytest.mark.parametrize("fid", ALL_IDS)
    def test_eval_matches_eval_batch(self, fid):
        fn = get_function(fid)
        rng = make_rng(9)
        X = rng.uniform(-3.0, 3.0, size=(40, fn.dim))
        batch = fn.eval_batch(X)
        singles = np.array([fn.eval(row) for row in X])
        # Batched matmuls may use a different BLAS kernel than single rows,
        # so agreement is to rounding, not bitwise.
        assert np.allclose(batch, singles, rtol=1e-13, atol=1e-13)

    def test_evaluate_rejects_wrong_dimension(self):
        with pytest.raises(ValueError):
            evaluate(get_function("quad"), [1.0, 2.0, 3.0])


class TestValidateCertificate:
    @pytest.mark.parametrize("fid", ALL_IDS)
    def test_all_members_pass_at_scale(self, fid):
        fn = get_function(fid)
        res = validate_certificate(fn, samples=10_000, radius=5.0, seed=0)
        assert res["violations"] == 0
        assert res["samples"] == 10_000
        assert 0.0 < res["max_ratio"] <= 1.0 + 1e-12

    def test_understated_certificate_is_caught(self):
        fn = get_function("abs1d")
        weak = replace(fn, certificate=SpbCertificate(r1=0.0, r2=0.5, m=0))
        res = validate_certificate(weak, samples=200, seed=0)
        assert res["violations"] == 200
        assert res["max_ratio"] == pytest.approx(2.0)

    def test_member_without_gradient_data_rejected(self):
        fn = get_function("quad")
        stripped = replace(fn, analytic_grad=None)
        with pytest.raises(UnsupportedFunctionError):
            validate_certificate(stripped, samples=10)

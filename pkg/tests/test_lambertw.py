"""Tests for the negative real branch of the Lambert function.

The in-house solver is cross-checked against two independent references:
the defining equation ``w exp(w) = t`` (residual round-trip) and scipy's
complex-valued implementation of the same branch.
"""

import math

import numpy as np
import pytest
from scipy.special import lambertw as scipy_lambertw

from spbzo.lambertw import BRANCH_POINT, WEval, w_minus1, w_minus1_from_log
from spbzo.seeding import make_rng


class TestBranchValues:
    def test_branch_point(self):
        ev = w_minus1(-1.0 / math.e)
        assert abs(ev.value - (-1.0)) <= 1e-12
        assert ev.converged

    def test_known_interior_value(self):
        ev = w_minus1(-2.0 * math.exp(-2.0))
        assert abs(ev.value - (-2.0)) <= 1e-12
        assert ev.converged

    def test_against_scipy_branch(self):
        for t in (-0.3, -0.1, -0.01, -1e-4, -1e-8, -1e-30):
            mine = w_minus1(t).value
            ref = float(scipy_lambertw(t, k=-1).real)
            assert mine == pytest.approx(ref, rel=1e-12, abs=1e-12)

    def test_branch_point_constant(self):
        assert BRANCH_POINT == -1.0 / math.e


class TestRoundTrip:
    def test_residuals_small_on_random_grid(self):
        rng = make_rng(0)
        ws = rng.uniform(-50.0, -1.0, size=1000)
        for w in ws:
            t = w * math.exp(w)
            ev = w_minus1(t)
            assert ev.converged
            assert ev.residual <= 1e-12
            assert abs(ev.value - w) <= 1e-9 * max(1.0, abs(w))

    def test_log_form_round_trip_including_underflow_regime(self):
        # For ell <= -1, the solution of w + log(-w) = ell satisfies
        # w exp(w) = -exp(ell) even when exp(ell) underflows to zero.
        for ell in (-1.0, -2.0, -10.0, -100.0, -700.0, -5000.0):
            w = w_minus1_from_log(ell)
            assert w <= -1.0
            assert w + math.log(-w) == pytest.approx(ell, rel=1e-12)

    def test_value_and_log_forms_agree(self):
        for t in (-0.36, -0.2, -0.05, -1e-6):
            assert w_minus1(t).value == pytest.approx(
                w_minus1_from_log(math.log(-t)), rel=1e-12, abs=1e-12
            )


class TestDomainHandling:
    def test_nonnegative_arguments_rejected(self):
        with pytest.raises(ValueError):
            w_minus1(0.0)
        with pytest.raises(ValueError):
            w_minus1(0.5)

    def test_left_of_branch_point_maps_to_zero(self):
        ev = w_minus1(-1.0)
        assert ev.value == 0.0
        assert ev.converged

    def test_result_dataclass_fields(self):
        ev = w_minus1(-0.1)
        assert isinstance(ev, WEval)
        assert ev.input == -0.1
        assert ev.iterations >= 1
        assert ev.residual == abs(ev.value * math.exp(ev.value) - ev.input)


class TestBranchShape:
    def test_monotone_decreasing_toward_zero(self):
        ts = -np.logspace(math.log10(1.0 / math.e - 1e-6), -12, 200)
        values = [w_minus1(float(t)).value for t in ts]
        assert all(values[i] > values[i + 1] for i in range(len(values) - 1))
        assert values[0] < -0.9
        assert values[-1] < -20.0

    def test_lower_bound_by_shifted_log(self):
        # On 0 < h < 1/10 the branch satisfies W(-h) >= (e/(e-1)) ln(h).
        coeff = math.e / (math.e - 1.0)
        for h in np.linspace(1e-6, 0.1 - 1e-9, 100):
            assert w_minus1(-float(h)).value >= coeff * math.log(h)

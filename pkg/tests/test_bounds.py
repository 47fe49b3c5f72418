"""Tests for the closed-form bounds and the kappa regime classifier."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ell1reg.bounds import (
    BELOW_GRID,
    HIGH,
    MID,
    bound_corollary1,
    bound_corollary2,
    bound_corollary3,
    bound_fully_adaptive,
    bound_lemma_b2,
    bound_lemma_b3,
    bound_prop1,
    bound_remark1,
    bound_theorem1,
    bound_theorem3,
    bound_theorem4,
    classify_kappa,
    constants_alpha,
    kappa,
    kappa_threshold,
    solve_quadratic_regret,
    theorem1_cases,
)
from ell1reg.config import REMARK1_C1, REMARK1_C2, REMARK2_C, REMARK2_C_PRIME
from tests.strategies import finite_floats

# every evaluator as a function of (U, X, Y, T, d)
MONOTONE_BOUNDS = {
    "prop1": lambda U, X, Y, T, d: bound_prop1(U, T * (X * Y) ** 2, X * Y, d),
    "corollary2": lambda U, X, Y, T, d: bound_corollary2(U, X, Y, T, d),
    "corollary2-small-loss": lambda U, X, Y, T, d: bound_corollary2(U, X, Y, T, d, 0.5 * T * Y * Y),
    "remark1": bound_remark1,
    "theorem3": lambda U, X, Y, T, d: bound_theorem3(U, X, Y, 3.0, d, 0.1 * T),
    "corollary3": lambda U, X, Y, T, d: bound_corollary3(U, X, Y, d, 0.1 * T),
    "theorem4": lambda U, X, Y, T, d: bound_theorem4(U, X, Y, T, d, REMARK2_C, REMARK2_C_PRIME),
}

positive = finite_floats(0.01, 100.0)


class TestKappa:
    def test_threshold(self):
        assert kappa_threshold(1) == pytest.approx(0.6295, abs=1e-4)

    def test_labels(self):
        assert classify_kappa(0.5, 1).label == BELOW_GRID
        assert classify_kappa(0.8, 1).label == MID
        assert classify_kappa(1.0, 1).label == MID
        assert classify_kappa(kappa_threshold(1), 1).label == MID
        assert classify_kappa(1.5, 1).label == HIGH

    def test_from_parameters(self):
        regime = kappa(1.0, 1.0, 1.0, 4, 1)
        assert regime.kappa == pytest.approx(1.0)
        with pytest.raises(ValueError):
            kappa(0.0, 1.0, 1.0, 4, 1)


class TestMinimaxBound:
    def test_high_case_value(self):
        assert theorem1_cases(2.0, 1.0, 1.0, 1, 1)[2] == pytest.approx(32 * math.log(3) + 1)
        # U sits on the upper threshold, where the smaller adjacent case applies
        assert bound_theorem1(2.0, 1.0, 1.0, 1, 1) == pytest.approx(36.155, abs=1e-3)

    def test_corollary_edge(self):
        assert bound_corollary1(1.0, 1, 1.0) == pytest.approx(32 * (math.log(3) + 1))
        assert bound_corollary1(1.0, 1, 1.0) == pytest.approx(67.16, abs=1e-2)

    @pytest.mark.parametrize("value", [0.1, 0.2, 0.5, 0.9])
    def test_matches_corollary_below_high_regime(self, value):
        d, T, X, Y = 3, 100, 1.0, 1.0
        U = 2 * d * Y * value / (math.sqrt(T) * X)
        assert bound_theorem1(U, X, Y, T, d) == pytest.approx(bound_corollary1(value, d, Y))

    def test_cases_selected_by_radius(self):
        low, mid, high = theorem1_cases(0.01, 1.0, 1.0, 100, 10)
        assert bound_theorem1(0.01, 1.0, 1.0, 100, 10) == low
        assert bound_theorem1(1.0, 1.0, 1.0, 100, 10) == theorem1_cases(1.0, 1.0, 1.0, 100, 10)[1]
        assert bound_theorem1(50.0, 1.0, 1.0, 100, 10) == theorem1_cases(50.0, 1.0, 1.0, 100, 10)[2]

    def test_invalid_kappa(self):
        with pytest.raises(ValueError):
            bound_corollary1(0.0, 1, 1.0)


class TestConstants:
    def test_square_loss_constants(self):
        k = constants_alpha(2.0)
        assert k.a == pytest.approx(8.0)
        assert k.b == pytest.approx(2 * (1 + math.sqrt(2)))
        assert abs(k.a_prime - 134) <= 1
        assert k.a_third == pytest.approx(4 * (1 + 2 ** -0.5) ** 2)
        assert abs(k.a_third - 12) <= 0.5

    def test_alpha_below_two(self):
        with pytest.raises(ValueError):
            constants_alpha(1.9)

    def test_corollary3_rounds_up_theorem3(self):
        # the printed constants dominate the exact ones at alpha = 2
        for d, loss in [(1, 0.0), (5, 10.0), (50, 300.0)]:
            assert bound_theorem3(1.0, 1.0, 1.0, 2.0, d, loss) <= bound_corollary3(1.0, 1.0, 1.0, d, loss) + 1.0


class TestOtherBounds:
    def test_small_loss_form_is_tighter(self):
        assert bound_corollary2(1.0, 1.0, 1.0, 100, 5, 100.0) == pytest.approx(bound_corollary2(1.0, 1.0, 1.0, 100, 5))
        assert bound_corollary2(1.0, 1.0, 1.0, 100, 5, 10.0) < bound_corollary2(1.0, 1.0, 1.0, 100, 5)

    def test_lemma_b3(self):
        assert bound_lemma_b3(1, 0.125) == 0.0
        assert bound_lemma_b3(8, 0.125) == pytest.approx(8 * math.log(8))

    def test_fully_adaptive_requires_k_above_one(self):
        with pytest.raises(ValueError):
            bound_fully_adaptive(1.0, 1.0, 1.0, 100, 2, 1.0)
        assert bound_fully_adaptive(1.0, 1.0, 1.0, 100, 1, 2.0) > 0

    def test_negative_comparator_loss(self):
        with pytest.raises(ValueError):
            bound_corollary3(1.0, 1.0, 1.0, 2, -1.0)


class TestProperties:
    @pytest.mark.parametrize("name", sorted(MONOTONE_BOUNDS))
    @given(U=positive, X=positive, Y=positive, T=st.integers(1, 10_000), d=st.integers(1, 100), factor=finite_floats(1.0, 4.0))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_each_parameter(self, name, U, X, Y, T, d, factor):
        bound = MONOTONE_BOUNDS[name]
        base = bound(U, X, Y, T, d)
        slack = 1e-9 * abs(base)
        assert bound(U * factor, X, Y, T, d) >= base - slack
        assert bound(U, X * factor, Y, T, d) >= base - slack
        assert bound(U, X, Y * factor, T, d) >= base - slack
        assert bound(U, X, Y, math.ceil(T * factor), d) >= base - slack

    @given(a=finite_floats(0.0, 1e4), b=finite_floats(0.0, 1e3))
    def test_quadratic_solution_dominates_fixpoint(self, a, b):
        fixpoint = ((b + math.sqrt(b * b + 4 * a)) / 2) ** 2
        assert fixpoint <= solve_quadratic_regret(a, b) * (1 + 1e-9) + 1e-9


class TestFixedTuningBound:
    @pytest.mark.parametrize("U,T,d", [(0.01, 100, 10), (1.0, 100, 10), (50.0, 100, 10), (1.0, 5, 200)])
    def test_best_of_two_forms(self, U, T, d):
        low, _, high = theorem1_cases(U, 1.0, 1.0, T, d)
        assert bound_lemma_b2(U, 1.0, 1.0, T, d) == pytest.approx(min(low, high))


class TestWorkedValues:
    def test_gradient_statistics_bound(self):
        assert bound_prop1(1.0, 4.0, 2.0, 1) == pytest.approx(41.75, abs=0.01)
        assert bound_prop1(1.0, 0.0, 0.0, 1) == 0.0

    def test_gradient_statistics_bound_is_linear_in_radius(self):
        assert bound_prop1(2.0, 4.0, 2.0, 3) == pytest.approx(2 * bound_prop1(1.0, 4.0, 2.0, 3))

    def test_square_loss_bound_without_comparator(self):
        expected = 8 * math.sqrt(100 * math.log(2)) + (137 * math.log(2) + 24) * 2
        assert bound_corollary2(1.0, 1.0, 1.0, 100, 1) == pytest.approx(expected)
        assert bound_corollary2(1.0, 1.0, 1.0, 100, 1) == pytest.approx(304.5, abs=0.05)

    def test_square_loss_bound_at_zero_comparator_loss(self):
        assert bound_corollary2(1.0, 1.0, 1.0, 100, 1, 0.0) == pytest.approx((137 * math.log(2) + 24) * 2)

    def test_leg_square_loss_constants(self):
        assert REMARK1_C1 == pytest.approx(19.3137, abs=1e-4)
        assert REMARK1_C2 == pytest.approx(11.657, abs=1e-3)

    def test_leg_square_loss_bound(self):
        assert bound_remark1(1.0, 1.0, 1.0, 100, 1) == pytest.approx(279.6, abs=0.1)

    @pytest.mark.parametrize("Y", [1e-2, 1e-4, 1e-8])
    def test_leg_square_loss_bound_vanishes_with_observations(self, Y):
        assert bound_remark1(3.0, 2.0, Y, 1000, 5) <= bound_remark1(3.0, 2.0, 1.0, 1000, 5) * Y

    def test_scaling_bound(self):
        expected = 2 * REMARK2_C * math.sqrt(1000 * math.log(2)) + 8 * math.log(5) + REMARK2_C + REMARK2_C_PRIME
        assert bound_theorem4(1.0, 1.0, 1.0, 1000, 1, REMARK2_C, REMARK2_C_PRIME) == pytest.approx(expected)
        assert bound_theorem4(1.0, 1.0, 1.0, 1000, 1, REMARK2_C, REMARK2_C_PRIME) == pytest.approx(9351.1, abs=0.1)

    @pytest.mark.parametrize("Y", [0.5, 1.0, 3.0])
    def test_scaling_bound_is_additive_in_sub_algorithm_constant(self, Y):
        without = bound_theorem4(1.0, 2.0, Y, 500, 3, REMARK2_C, 0.0)
        assert bound_theorem4(1.0, 2.0, Y, 500, 3, REMARK2_C, REMARK2_C_PRIME) == pytest.approx(without + REMARK2_C_PRIME * Y * Y)

    def test_scaling_bound_short_horizon_has_no_grid_term(self):
        assert bound_theorem4(1.0, 1.0, 1.0, 50, 1, REMARK2_C, 0.0) == pytest.approx(
            2 * REMARK2_C * math.sqrt(50 * math.log(2)) + REMARK2_C
        )

    def test_quadratic_solver(self):
        assert solve_quadratic_regret(4.0, 2.0) == 12.0
        assert solve_quadratic_regret(0.0, 1.0) == 1.0
        assert solve_quadratic_regret(7.5, 0.0) == 7.5
        with pytest.raises(ValueError):
            solve_quadratic_regret(-1.0, 1.0)

    def test_large_kappa_is_high(self):
        assert classify_kappa(10.0, 1).label == HIGH
        regime = kappa(1.0, 1.0, 1.0, 400, 1)
        assert regime.kappa == pytest.approx(10.0)
        assert regime.label == HIGH

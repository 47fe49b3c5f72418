"""Tests for the Lipschitzified alpha-loss and the dyadic threshold."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ell1reg.core import Round, clip, square_loss_gradient
from ell1reg.lipschitz import (
    LipLoss,
    lip_eval,
    lip_gradient,
    lip_lipschitz_bound,
    lip_values,
    lipschitzified_losses,
    threshold_exponent,
    update_threshold,
)
from tests.strategies import alphas, finite_floats, make_stream


def scalar_loss(y, B, alpha, v):
    """LipLoss on the one-dimensional input x = 1, so u.x = v"""
    return LipLoss(y, np.array([1.0]), B, alpha), np.array([v])


class TestThreshold:
    def test_examples(self):
        assert update_threshold(0.0, 1.5, 2.0) == pytest.approx(2.0)
        assert update_threshold(0.0, 1.0, 2.0) == 1.0
        assert update_threshold(0.0, 0.0, 2.0) == 0.0

    def test_exact_powers_of_two_do_not_round_up(self):
        assert threshold_exponent(4.0, 2.0) == 4
        assert threshold_exponent(0.5, 2.0) == -2

    def test_never_decreases(self):
        assert update_threshold(4.0, 1.0, 2.0) == 4.0

    def test_negative_history_rejected(self):
        with pytest.raises(ValueError):
            update_threshold(0.0, -1.0, 2.0)

    @given(y_max=finite_floats(1e-6, 1e6), alpha=alphas)
    def test_bracket(self, y_max, alpha):
        B = update_threshold(0.0, y_max, alpha)
        assert y_max <= B * (1 + 1e-12)
        assert B <= 2 ** (1 / alpha) * y_max * (1 + 1e-12)

    @pytest.mark.parametrize("alpha", [2.0, 3.0, 2.5])
    @pytest.mark.parametrize("y_max", [1e-170, 1e200, 5e-300, 2.0 ** -600])
    def test_extreme_magnitudes_stay_bracketed(self, y_max, alpha):
        B = update_threshold(0.0, y_max, alpha)
        assert y_max <= B <= 2 ** (1 / alpha) * y_max * (1 + 1e-12)

    def test_tiny_power_of_two_is_exact(self):
        assert update_threshold(0.0, 2.0 ** -600, 2.0) == 2.0 ** -600
        assert threshold_exponent(2.0 ** 300, 2.0) == 600


class TestEvaluation:
    def test_interior_is_alpha_loss(self):
        assert lip_eval(*scalar_loss(0.0, 1.0, 2.0, 0.5)) == pytest.approx(0.25)

    def test_linear_continuation(self):
        assert lip_eval(*scalar_loss(0.0, 1.0, 2.0, 2.0)) == pytest.approx(3.0)

    def test_inactive_is_zero(self):
        loss, u = scalar_loss(2.0, 1.0, 2.0, 0.3)
        assert not loss.active
        assert lip_eval(loss, u) == 0.0
        assert np.all(lip_gradient(loss, u) == 0.0)

    def test_interior_gradient_matches_square_loss(self):
        x, u = np.array([0.3, -0.2]), np.array([0.5, 0.5])
        loss = LipLoss(0.4, x, 1.0, 2.0)
        assert np.allclose(lip_gradient(loss, u), square_loss_gradient(u, Round(x, 0.4)))

    def test_gradient_constant_on_linear_branch(self):
        a = lip_gradient(*scalar_loss(0.2, 1.0, 3.0, 2.0))
        b = lip_gradient(*scalar_loss(0.2, 1.0, 3.0, 3.0))
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("alpha", [2.0, 3.0, 4.0])
    @pytest.mark.parametrize("sign", [1.0, -1.0])
    def test_smooth_at_junction(self, alpha, sign):
        y, B = 0.3, 1.0
        inside = lip_values(y, B, True, alpha, sign * B * (1 - 1e-12))
        outside = lip_values(y, B, True, alpha, sign * B * (1 + 1e-12))
        assert abs(float(inside) - float(outside)) <= 1e-9
        left = lip_gradient(*scalar_loss(y, B, alpha, sign * B * (1 - 1e-12)))
        right = lip_gradient(*scalar_loss(y, B, alpha, sign * B * (1 + 1e-12)))
        assert np.allclose(left, right, atol=1e-9)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(4)
        h = 1e-5
        for i in range(200):
            d = int(rng.integers(1, 5))
            alpha = float(rng.choice([2.0, 3.0, 4.0]))
            B = float(rng.uniform(0.1, 2.0))
            x = rng.uniform(0.2, 1.0, d) * rng.choice([-1.0, 1.0], d)
            u = rng.uniform(-2, 2, d)
            if i % 2 == 0:
                # one side of a junction, 1e-3 away
                target = B + (1e-3 if i % 4 == 0 else -1e-3)
                u[0] += (target - u @ x) / x[0]
            loss = LipLoss(float(rng.uniform(-B, B)), x, B, alpha)
            numeric = np.array([(lip_eval(loss, u + h * e) - lip_eval(loss, u - h * e)) / (2 * h) for e in np.eye(d)])
            exact = lip_gradient(loss, u)
            assert np.max(np.abs(numeric - exact)) <= 1e-5 * max(1.0, np.max(np.abs(exact)))


class TestProperties:
    @given(
        y=finite_floats(-1.0, 1.0),
        B=finite_floats(1.0, 3.0),
        v=finite_floats(-10.0, 10.0),
        alpha=alphas,
    )
    @settings(max_examples=300)
    def test_sandwich(self, y, B, v, alpha):
        value = lip_eval(*scalar_loss(y, B, alpha, v))
        upper = abs(y - v) ** alpha
        slack = 1e-12 * max(1.0, upper)
        assert abs(y - clip(v, B)) ** alpha <= value + slack
        assert value <= upper + slack

    @given(
        y=finite_floats(-1.0, 1.0),
        v1=finite_floats(-5.0, 5.0),
        v2=finite_floats(-5.0, 5.0),
        lam=finite_floats(0.0, 1.0),
        alpha=alphas,
    )
    def test_convex_in_prediction(self, y, v1, v2, lam, alpha):
        f = lambda v: float(lip_values(y, 1.0, True, alpha, v))
        mixed = f(lam * v1 + (1 - lam) * v2)
        assert mixed <= lam * f(v1) + (1 - lam) * f(v2) + 1e-12 * max(1.0, f(v1), f(v2))

    @given(seed=st.integers(0, 1000), alpha=alphas)
    @settings(max_examples=25, deadline=None)
    def test_global_gradient_bound(self, seed, alpha):
        rounds = make_stream(d=3, T=30, seed=seed)
        rng = np.random.default_rng(seed)
        y_max = 0.0
        for loss, r in zip(lipschitzified_losses(rounds, alpha), rounds):
            y_max = max(y_max, abs(r.y))
            grad = lip_gradient(loss, rng.uniform(-3, 3, 3))
            bound = lip_lipschitz_bound(y_max, float(np.max(np.abs(r.x))), alpha)
            assert np.max(np.abs(grad)) <= bound * (1 + 1e-12)

    def test_thresholds_use_past_observations_only(self):
        rounds = make_stream(d=2, T=10, seed=9)
        losses = lipschitzified_losses(rounds, 2.0)
        assert losses[0].B == 0.0
        assert losses[1].B == update_threshold(0.0, abs(rounds[0].y), 2.0)

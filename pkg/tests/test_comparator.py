"""Tests for the conditional-gradient comparator oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ell1reg.comparator import ComparatorResult, linearized_gap, min_alpha_loss_l1, min_lip_loss_l1, min_square_loss_l1
from ell1reg.core import LossSpec, Round
from ell1reg.errors import DimensionError
from ell1reg.lipschitz import lipschitzified_losses
from tests.strategies import make_stream


def dense_grid_minimum(rounds, U, alpha=2.0, resolution=1000):
    """Brute-force minimum over the d=2 ball on the lattice of step U/resolution"""
    k = np.arange(-resolution, resolution + 1)
    a, b = np.meshgrid(k, k, indexing="ij")
    keep = np.abs(a) + np.abs(b) <= resolution
    points = np.column_stack([a[keep], b[keep]]) * (U / resolution)
    losses = np.zeros(points.shape[0])
    for r in rounds:
        losses += np.abs(r.y - points @ r.x) ** alpha
    return float(losses.min())


class TestExamples:
    def test_vertex_attains_zero(self):
        result = min_square_loss_l1([Round(np.array([1.0, 0.0]), 1.0)], 1.0)
        assert np.allclose(result.u_star, [1.0, 0.0])
        assert result.loss == pytest.approx(0.0, abs=1e-12)

    def test_radius_limits_fit(self):
        result = min_square_loss_l1([Round(np.array([1.0, 0.0]), 1.0)], 0.5)
        assert result.loss == pytest.approx(0.25, abs=1e-9)

    def test_alpha_three_single_round(self):
        result = min_alpha_loss_l1([Round(np.array([1.0]), 2.0)], 1.0, LossSpec(3.0))
        assert result.loss == pytest.approx(1.0, abs=1e-9)

    def test_matches_dense_grid_square(self):
        rounds = make_stream(d=2, T=3, seed=11)
        result = min_square_loss_l1(rounds, 1.0)
        assert abs(result.loss - dense_grid_minimum(rounds, 1.0)) <= 1e-4

    def test_matches_dense_grid_alpha_four(self):
        rounds = make_stream(d=2, T=5, seed=12)
        result = min_alpha_loss_l1(rounds, 1.0, LossSpec(4.0))
        assert abs(result.loss - dense_grid_minimum(rounds, 1.0, alpha=4.0)) <= 1e-4


class TestErrors:
    def test_nonpositive_tolerance(self):
        with pytest.raises(ValueError):
            min_square_loss_l1(make_stream(d=2, T=3), 1.0, tol=0.0)

    def test_empty_stream(self):
        with pytest.raises(ValueError):
            min_square_loss_l1([], 1.0)

    def test_mixed_dimensions(self):
        with pytest.raises(DimensionError):
            min_square_loss_l1([Round(np.ones(2), 0.0), Round(np.ones(3), 0.0)], 1.0)


class TestCertificate:
    @given(seed=st.integers(0, 10_000), U=st.sampled_from([0.1, 1.0, 5.0]), d=st.integers(1, 6))
    @settings(max_examples=30, deadline=None)
    def test_feasible_and_certified(self, seed, U, d):
        rounds = make_stream(d=d, T=20, seed=seed)
        result = min_square_loss_l1(rounds, U)
        tol = 1e-9 * max(1.0, sum(r.y ** 2 for r in rounds))
        assert np.abs(result.u_star).sum() <= U + 1e-12
        assert 0.0 <= result.gap <= tol
        assert result.loss <= sum(r.y ** 2 for r in rounds) + 1e-9

    def test_gap_of_zero_gradient(self):
        assert linearized_gap(np.zeros(3), np.zeros(3), 1.0) == 0.0

    def test_lower_bound_subtracts_gap(self):
        rounds = make_stream(d=3, T=25, seed=4)
        result = min_square_loss_l1(rounds, 1.0)
        assert result.lower_bound == max(0.0, result.loss - result.gap)
        assert ComparatorResult(np.zeros(2), 5.0, 1.5).lower_bound == 3.5
        assert ComparatorResult(np.zeros(2), 0.5, 2.0).lower_bound == 0.0

    def test_alpha_two_agrees_with_square(self):
        for seed in range(10):
            rounds = make_stream(d=3, T=15, seed=seed)
            square = min_square_loss_l1(rounds, 1.0)
            alpha = min_alpha_loss_l1(rounds, 1.0, LossSpec(2.0))
            assert abs(square.loss - alpha.loss) <= 1e-8

    def test_monotone_in_radius(self):
        rounds = make_stream(d=4, T=30, seed=3)
        losses = [min_square_loss_l1(rounds, U).loss for U in (0.1, 0.5, 1.0, 2.0)]
        for smaller, larger in zip(losses, losses[1:]):
            # each loss is within its gap of the true minimum
            assert larger <= smaller + 1e-7


class TestLipschitzifiedOracle:
    def test_dominated_by_alpha_loss_oracle(self):
        rounds = make_stream(d=3, T=50, seed=5)
        lip = min_lip_loss_l1(lipschitzified_losses(rounds, 3.0), 1.0)
        plain = min_alpha_loss_l1(rounds, 1.0, LossSpec(3.0))
        assert lip.loss - lip.gap <= plain.loss

    def test_mixed_exponents_rejected(self):
        rounds = make_stream(d=2, T=3)
        losses = lipschitzified_losses(rounds, 2.0)[:2] + lipschitzified_losses(rounds, 3.0)[2:]
        with pytest.raises(ValueError):
            min_lip_loss_l1(losses, 1.0)

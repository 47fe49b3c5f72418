"""Tests for the radius grids, the Scaling aggregate and the fully adaptive variant."""

import math

import numpy as np
import pytest

from ell1reg.bounds import bound_theorem4, scaling_grid_size
from ell1reg.comparator import min_square_loss_l1
from ell1reg.config import REMARK2_C, REMARK2_C_PRIME
from ell1reg.core import Forecaster, Round, run_protocol
from ell1reg.errors import ProtocolError
from ell1reg.scaling import (
    REASSIGNMENT_STRATEGIES,
    FullyAdaptiveForecaster,
    ScalingForecaster,
    adaptive_grid_size,
    build_adaptive_grid,
    build_grid,
    fully_adaptive_forecaster,
    scaling_forecaster,
    leg_factory,
)
from tests.strategies import make_stream


class Failing(Forecaster):
    name = "failing"

    def _predict(self, x):
        raise ProtocolError("boom")

    def _feed(self, x, y):
        pass


class TestGrids:
    def test_dyadic_radii(self):
        grid = build_grid(1.0, 1.0, 500, 2)
        assert len(grid) == scaling_grid_size(500, REMARK2_C) + 1
        assert grid.radii[0] == pytest.approx(1.0 / math.sqrt(500 * math.log(4)))
        assert all(b == 2 * a for a, b in zip(grid.radii, grid.radii[1:]))

    def test_single_radius_when_horizon_short(self):
        assert len(build_grid(1.0, 1.0, 1, 1)) == 1

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            build_grid(0.0, 1.0, 10, 2)
        with pytest.raises(ValueError):
            build_adaptive_grid(10, k=1.0)

    def test_adaptive_grid_widens(self):
        small, large = build_adaptive_grid(4, 2.0, 3), build_adaptive_grid(400, 2.0, 3)
        assert len(build_adaptive_grid(1, 2.0, 3)) == 1
        assert len(large) > len(small)
        assert large.radii[0] < small.radii[0]
        assert large.radii[-1] > small.radii[-1]

    def test_worked_grid(self):
        grid = build_grid(1.0, 1.0, 1000, 1)
        assert len(grid) == 5
        assert grid.radii[0] == pytest.approx(1.0 / math.sqrt(1000 * math.log(2)))
        assert grid.radii[0] == pytest.approx(0.03799, abs=1e-5)

    def test_worked_adaptive_grid(self):
        assert adaptive_grid_size(100, 2.0) == 28
        assert len(build_adaptive_grid(100, 2.0, 1)) == 29

    @pytest.mark.parametrize("ratio", [0.5, 1.0, 2.0])
    def test_adaptive_grid_spans_fixed_grid(self, ratio):
        t, k = 100, 2.0
        assert t >= max(ratio ** (1 / k), ratio ** (-1 / k))
        fixed, adaptive = build_grid(ratio, 1.0, t, 1), build_adaptive_grid(t, k, 1)
        assert adaptive.radii[0] <= fixed.radii[0]
        assert fixed.radii[-1] <= adaptive.radii[-1]


class TestScaling:
    def test_error_names_radius(self):
        forecaster = ScalingForecaster(build_grid(1.0, 1.0, 500, 2), lambda U: Failing(2), 1.0)
        with pytest.raises(ProtocolError, match="sub-forecaster U="):
            forecaster.step(np.ones(2))

    @pytest.mark.parametrize("U", [0.1, 1.0, 4.0])
    def test_regret_within_bound(self, U):
        d, T = 2, 500
        rounds = make_stream(d=d, T=T, seed=21)
        forecaster = ScalingForecaster(build_grid(1.0, 1.0, T, d), leg_factory(d), 1.0)
        trace = run_protocol(forecaster, rounds)
        oracle = min_square_loss_l1(rounds, U)
        regret = trace.total_loss - oracle.loss + oracle.gap
        assert regret <= bound_theorem4(U, 1.0, 1.0, T, d, REMARK2_C, REMARK2_C_PRIME)

    def test_predictions_clipped(self, short_stream):
        forecaster = ScalingForecaster(build_grid(1.0, 1.0, 40, 3), leg_factory(3), 1.0)
        trace = run_protocol(forecaster, short_stream)
        assert all(abs(p) <= 1.0 for p in trace.predictions)
        assert forecaster.weights.sum() == pytest.approx(1.0)


class TestFullyAdaptive:
    def test_zero_stream_predicts_zero(self):
        trace = run_protocol(FullyAdaptiveForecaster(), [Round(np.zeros(2), 0.0) for _ in range(20)])
        assert all(p == 0.0 for p in trace.predictions)
        assert trace.total_loss == 0.0

    def test_radii_only_grow(self):
        forecaster = FullyAdaptiveForecaster(d=2)
        seen = set()
        for r in make_stream(d=2, T=100, seed=4):
            forecaster.step(r.x)
            forecaster.feed(r.y)
            current = set(forecaster.exponents)
            assert seen <= current
            seen = current
        assert len(forecaster.experts) == len(forecaster.exponents) == forecaster.ewa.K

    def test_clipping_range_tracks_observations(self):
        forecaster = FullyAdaptiveForecaster()
        trace = run_protocol(forecaster, make_stream(d=2, T=60, seed=8, Y=0.7))
        y_max = forecaster.y_max
        assert y_max <= forecaster.B <= math.sqrt(2) * y_max + 1e-12
        assert all(abs(p) <= forecaster.B for p in trace.predictions)

    @pytest.mark.parametrize("reassignment", sorted(REASSIGNMENT_STRATEGIES))
    def test_reassignment_strategies_run(self, reassignment, short_stream):
        trace = run_protocol(FullyAdaptiveForecaster(reassignment=reassignment), short_stream)
        assert trace.complete

    def test_reassignment_starts(self):
        cumulative = np.array([3.0, 1.0, 2.0])
        assert REASSIGNMENT_STRATEGIES["min-loss"](cumulative) == 1.0
        assert REASSIGNMENT_STRATEGIES["max-loss"](cumulative) == 3.0

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            FullyAdaptiveForecaster(k=1.0)
        with pytest.raises(ValueError):
            FullyAdaptiveForecaster(reassignment="oldest")


class TestFactories:
    def test_scaling_forecaster(self):
        forecaster = scaling_forecaster(build_grid(1.0, 1.0, 100, 2), leg_factory(2), 1.0)
        assert isinstance(forecaster, ScalingForecaster)
        assert len(forecaster.experts) == len(forecaster.grid)

    def test_fully_adaptive_forecaster(self):
        forecaster = fully_adaptive_forecaster(k=3.0, reassignment="max-loss")
        assert (forecaster.k, forecaster.reassignment) == (3.0, "max-loss")
        assert forecaster.experts == []

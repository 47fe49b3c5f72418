"""
maurey.py

Minimax forecaster for the middle regime: clipped EWA (eta = 1/(8Y^2)) over the
finite grid of points (k_1 U/m, ..., k_d U/m) with sum |k_j| <= m, the grid
enumerator with its exact and combinatorial cardinalities, and the rule that
picks the discretization level m.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import comb

from ell1reg.bounds import grid_cardinality_bound
from ell1reg.config import GRID_CAP
from ell1reg.core import Forecaster, Round, stack_rounds
from ell1reg.errors import DimensionError, GridTooLargeError, RegimeError
from ell1reg.ewa import EwaState, ewa_feed, ewa_predict, exp_concave_eta

logger = logging.getLogger("ell1reg")

# relative slack on the regime edges so that exact boundary inputs are accepted
_EDGE_SLACK = 1e-12


@dataclass(frozen=True)
class MaureyGrid:
    U: float
    m: int
    d: int
    points: np.ndarray

    def __len__(self) -> int:
        return self.points.shape[0]


def middle_regime(X: float, Y: float, T: int, d: int):
    """Radii (lower, upper) delimiting the regime in which the grid forecaster is tuned"""
    lower = (Y / X) * math.sqrt(math.log(1 + 2 * d) / (T * math.log(2)))
    upper = 2 * d * Y / (math.sqrt(T) * X)
    return lower, upper


def select_m(U: float, X: float, Y: float, T: int, d: int) -> int:
    """m = floor(alpha), alpha = (UX/Y) sqrt(T ln2 / ln(1 + 2dY/(sqrt(T) UX)))"""
    if min(U, X, Y) <= 0 or T < 1 or d < 1:
        raise RegimeError(f"Parameters must be positive: U={U}, X={X}, Y={Y}, T={T}, d={d}")

    lower, upper = middle_regime(X, Y, T, d)
    if U < lower * (1 - _EDGE_SLACK):
        raise RegimeError(f"U={U:.6g} is below (Y/X) sqrt(ln(1+2d)/(T ln2)) = {lower:.6g}")
    if U > upper * (1 + _EDGE_SLACK):
        raise RegimeError(f"U={U:.6g} is above 2dY/(sqrt(T) X) = {upper:.6g}")

    ratio = 2 * d * Y / (math.sqrt(T) * U * X)
    alpha = (U * X / Y) * math.sqrt(T * math.log(2) / math.log1p(ratio))
    m = math.floor(alpha)
    if m < 1:
        raise RegimeError(f"Discretization level alpha={alpha:.6g} < 1")
    logger.debug(f"select_m: alpha={alpha:.6g}, m={m}")
    return m


def grid_size(d: int, m: int) -> int:
    """Exact number of integer vectors k in Z^d with sum |k_j| <= m"""
    return int(sum(2 ** i * comb(d, i, exact=True) * comb(m, i, exact=True) for i in range(min(d, m) + 1)))


def enumerate_grid(d: int, m: int, U: float, cap: int = GRID_CAP) -> MaureyGrid:
    """All points (k_1 U/m, ..., k_d U/m), sum |k_j| <= m, in lexicographic order of k"""
    if d < 1 or m < 1:
        raise DimensionError(f"Need d >= 1 and m >= 1, got d={d}, m={m}")
    if U <= 0:
        raise ValueError(f"Radius must be positive, got {U}")
    count = grid_size(d, m)
    if count > cap:
        raise GridTooLargeError(
            f"Grid for d={d}, m={m} has {count} points > cap {cap} "
            f"(combinatorial bound (e(2d+m)/m)^m = {grid_cardinality_bound(d, m):.4g})"
        )

    # extend lexicographically ordered prefixes one coordinate at a time
    prefixes = np.zeros((1, 0), dtype=np.int64)
    used = np.zeros(1, dtype=np.int64)
    for _ in range(d):
        remaining = m - used
        counts = 2 * remaining + 1
        parent = np.repeat(np.arange(prefixes.shape[0]), counts)
        starts = np.repeat(np.cumsum(counts) - counts, counts)
        k = np.arange(counts.sum()) - starts - remaining[parent]
        prefixes = np.column_stack([prefixes[parent], k])
        used = used[parent] + np.abs(k)

    points = prefixes * (U / m)
    points.setflags(write=False)
    logger.info(f"Maurey grid: d={d}, m={m}, U={U:.6g}, {count} points")
    return MaureyGrid(U=U, m=m, d=d, points=points)


def grid_square_losses(grid: MaureyGrid, rounds: Sequence[Round]) -> np.ndarray:
    """Unclipped cumulative square loss of every grid point"""
    inputs, y = stack_rounds(rounds)
    if inputs.shape[1] != grid.d:
        raise DimensionError(f"Stream dimension {inputs.shape[1]} differs from grid dimension {grid.d}")
    losses = np.zeros(len(grid))
    for x_t, y_t in zip(inputs, y):
        losses += (y_t - grid.points @ x_t) ** 2
    return losses


class MaureyForecaster(Forecaster):
    name = "maurey"

    def __init__(self, grid: MaureyGrid, Y: float):
        super().__init__(grid.d)
        self.grid = grid
        self.ewa = EwaState(K=len(grid), eta=exp_concave_eta(Y), Y_clip=Y)
        self._expert_predictions = None

    def _predict(self, x):
        self._expert_predictions = self.grid.points @ x
        return ewa_predict(self.ewa, self._expert_predictions)

    def _feed(self, x, y):
        ewa_feed(self.ewa, self._expert_predictions, y)
        self._expert_predictions = None


def maurey_forecaster(U: float, X: float, Y: float, T: int, d: int, cap: int = GRID_CAP) -> MaureyForecaster:
    m = select_m(U, X, Y, T, d)
    return MaureyForecaster(enumerate_grid(d, m, U, cap), Y)

"""
scaling.py

Adaptation to an unknown radius U: clipped EWA (eta = 1/(8Y^2)) over copies of a
sub-forecaster run on a dyadic grid of l1-balls, plus the fully automatic
variant whose grid grows with t and whose clipping range follows the observed
|y_t| instead of a known Y.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ell1reg.bounds import positive_ceil, scaling_grid_size
from ell1reg.config import DEFAULT_K, REMARK2_C
from ell1reg.core import Forecaster
from ell1reg.errors import Ell1Error
from ell1reg.ewa import EwaForecaster, EwaState, ewa_extend, ewa_feed, ewa_predict, exp_concave_eta
from ell1reg.leg import leg_forecaster
from ell1reg.lipschitz import threshold_exponent, threshold_from_exponent

logger = logging.getLogger("ell1reg")

SubFactory = Callable[[float], Forecaster]


@dataclass(frozen=True)
class UGrid:
    """Dyadic radii U_0 < U_1 = 2 U_0 < ... and the parameters they were built from"""

    radii: Tuple[float, ...]
    origin: Dict[str, float] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.radii)


def build_grid(X: float, Y: float, T: int, d: int, c: float = REMARK2_C) -> UGrid:
    """U_r = (Y/X) 2^r / sqrt(T ln(2d)), r = 0..R, R = ceil(log2(2T/c))_+"""
    if min(X, Y, c) <= 0 or T < 1 or d < 1:
        raise ValueError(f"Parameters must be positive: X={X}, Y={Y}, T={T}, d={d}, c={c}")
    R = scaling_grid_size(T, c)
    base = (Y / X) / math.sqrt(T * math.log(2 * d))
    radii = tuple(math.ldexp(base, r) for r in range(R + 1))
    return UGrid(radii=radii, origin={"X": X, "Y": Y, "T": T, "d": d, "c": c})


def adaptive_grid_size(t: int, k: float, c: float = REMARK2_C) -> int:
    """R'(t) = ceil(log2(2t/c))_+ + ceil(log2 t^(2k))"""
    return scaling_grid_size(t, c) + positive_ceil(2.0 * k * math.log2(t))


def build_adaptive_grid(t: int, k: float = DEFAULT_K, d: int = 1, c: float = REMARK2_C) -> UGrid:
    """U'_r = (1/t^k) 2^r / sqrt(t ln(2d)), r = 0..R'(t)"""
    if not k > 1:
        raise ValueError(f"k must exceed 1, got {k}")
    if t < 1 or d < 1:
        raise ValueError(f"Need t >= 1 and d >= 1, got t={t}, d={d}")
    R_prime = adaptive_grid_size(t, k, c)
    base = t ** (-k) / math.sqrt(t * math.log(2 * d))
    radii = tuple(math.ldexp(base, r) for r in range(R_prime + 1))
    return UGrid(radii=radii, origin={"t": t, "k": k, "d": d, "c": c})


def _with_radius(err: Ell1Error, U: float) -> Ell1Error:
    return type(err)(f"sub-forecaster U={U:.6g}: {err}")


class ScalingForecaster(EwaForecaster):
    name = "scaling"

    def __init__(self, grid: UGrid, sub_factory: SubFactory, Y: float):
        super().__init__([sub_factory(U) for U in grid.radii], Y_clip=Y, eta=exp_concave_eta(Y))
        self.grid = grid
        logger.debug(f"scaling: {len(grid)} radii from {grid.radii[0]:.6g} to {grid.radii[-1]:.6g}, Y={Y}")

    def _expert_step(self, index, x):
        try:
            return super()._expert_step(index, x)
        except Ell1Error as err:
            raise _with_radius(err, self.grid.radii[index]) from err

    def _expert_feed(self, index, y):
        try:
            super()._expert_feed(index, y)
        except Ell1Error as err:
            raise _with_radius(err, self.grid.radii[index]) from err


def scaling_forecaster(grid: UGrid, sub_factory: SubFactory, Y: float) -> ScalingForecaster:
    return ScalingForecaster(grid, sub_factory, Y)


def leg_factory(d: int, alpha: float = 2.0) -> SubFactory:
    return lambda U: leg_forecaster(U, d, alpha)


# Initial cumulative EWA loss given to experts added when the grid grows
REASSIGNMENT_STRATEGIES: Dict[str, Callable[[np.ndarray], float]] = {
    "min-loss": lambda cumulative: float(cumulative.min()),
    "max-loss": lambda cumulative: float(cumulative.max()),
}


class FullyAdaptiveForecaster(Forecaster):
    """
    Scaling over the dyadic radii 2^j covering [U'_0(t), U'_{R'(t)}(t)]. The
    exponent range only widens, so radii present at t1 are present at every
    t2 >= t1. Sub-forecasters added mid-stream start cold; clipping uses the
    dyadic threshold B_t and eta = 1/(8 B_t^2).
    """

    name = "fully-adaptive"

    def __init__(
        self,
        k: float = DEFAULT_K,
        c: float = REMARK2_C,
        sub_factory: Optional[Callable[[float, int], Forecaster]] = None,
        reassignment: str = "min-loss",
        d: Optional[int] = None,
    ):
        if not k > 1:
            raise ValueError(f"k must exceed 1, got {k}")
        if reassignment not in REASSIGNMENT_STRATEGIES:
            raise ValueError(f"Unknown reassignment {reassignment!r}; choose from {sorted(REASSIGNMENT_STRATEGIES)}")
        super().__init__(d)
        self.k = k
        self.c = c
        self.sub_factory = sub_factory or (lambda U, dim: leg_forecaster(U, dim))
        self.reassignment = reassignment
        self.experts: List[Forecaster] = []
        self.exponents: List[int] = []
        self.ewa: Optional[EwaState] = None
        self.y_max = 0.0
        self.B_exponent: Optional[int] = None
        self._expert_predictions = None

    @property
    def radii(self) -> List[float]:
        return sorted(math.ldexp(1.0, j) for j in self.exponents)

    @property
    def B(self) -> float:
        return threshold_from_exponent(self.B_exponent, 2.0)

    def _target_exponents(self, t: int) -> Tuple[int, int]:
        grid = build_adaptive_grid(t, self.k, self.d, self.c)
        return math.floor(math.log2(grid.radii[0])), math.ceil(math.log2(grid.radii[-1]))

    def _grow(self, t: int) -> None:
        low, high = self._target_exponents(t)
        if self.exponents:
            low = min(low, min(self.exponents))
            high = max(high, max(self.exponents))
        present = set(self.exponents)
        new = [j for j in range(low, high + 1) if j not in present]
        if not new:
            return

        for j in new:
            self.experts.append(self.sub_factory(math.ldexp(1.0, j), self.d))
            self.exponents.append(j)
        if self.ewa is None:
            self.ewa = EwaState(K=len(new), eta=exp_concave_eta(self.B), Y_clip=self.B, warn_excess=False)
        else:
            start = REASSIGNMENT_STRATEGIES[self.reassignment](self.ewa.cumulative)
            ewa_extend(self.ewa, len(new), start)
        logger.info(f"{self.name} t={t}: grid grew by {len(new)} to {len(self.experts)} radii, exponents [{low}, {high}]")

    def _predict(self, x):
        self._grow(self.t + 1)
        self._expert_predictions = np.array([expert.step(x) for expert in self.experts])
        return ewa_predict(self.ewa, self._expert_predictions)

    def _feed(self, x, y):
        ewa_feed(self.ewa, self._expert_predictions, y)
        for expert in self.experts:
            expert.feed(y)
        self._expert_predictions = None

        self.y_max = max(self.y_max, abs(y))
        k = threshold_exponent(self.y_max, 2.0)
        if k is not None and (self.B_exponent is None or k > self.B_exponent):
            self.B_exponent = k
            # cumulative losses are kept; the guarantee is heuristic across this change
            self.ewa.Y_clip = self.B
            self.ewa.eta = exp_concave_eta(self.B)
            logger.info(f"{self.name} t={self.t}: clipping range raised to B={self.B:.6g}, eta={self.ewa.eta:.6g}")


def fully_adaptive_forecaster(k: float = DEFAULT_K, c: float = REMARK2_C, reassignment: str = "min-loss") -> FullyAdaptiveForecaster:
    return FullyAdaptiveForecaster(k=k, c=c, reassignment=reassignment)

"""
leg.py

Lipschitzifying Exponentiated Gradient: adaptive EG+- run on the Lipschitzified
alpha-losses, predicting the clipped value [u_t.x_t]_{B_t} with the threshold
B_t computed from y_1..y_{t-1} only.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ell1reg.adaptive_eg import EgState, eg_point, eg_update
from ell1reg.core import Forecaster, clip
from ell1reg.lipschitz import LipLoss, lip_gradient, threshold_exponent, threshold_from_exponent

logger = logging.getLogger("ell1reg")


@dataclass
class LegState:
    """EG state plus the threshold, kept as its dyadic exponent (B^alpha = 2^k)"""

    eg: EgState
    alpha: float = 2.0
    y_max: float = 0.0
    B_exponent: Optional[int] = None

    @property
    def B(self) -> float:
        return threshold_from_exponent(self.B_exponent, self.alpha)

    def observe(self, y: float) -> bool:
        """Ratchet y_max and the threshold; True when B grew"""
        self.y_max = max(self.y_max, abs(y))
        k = threshold_exponent(self.y_max, self.alpha)
        if k is not None and (self.B_exponent is None or k > self.B_exponent):
            self.B_exponent = k
            return True
        return False


class LegForecaster(Forecaster):
    name = "leg"

    def __init__(self, U: float, d: int, alpha: float = 2.0):
        super().__init__(d)
        if not alpha >= 2:
            raise ValueError(f"alpha must be >= 2, got {alpha}")
        self.U = U
        self.state = LegState(eg=EgState.initial(U, d), alpha=alpha)
        logger.debug(f"leg: U={U}, d={d}, alpha={alpha}")

    @property
    def B(self) -> float:
        return self.state.B

    @property
    def current_point(self) -> np.ndarray:
        return eg_point(self.state.eg)

    def _predict(self, x):
        return clip(float(eg_point(self.state.eg) @ x), self.state.B)

    def _feed(self, x, y):
        # inactive rounds still update the EG state, with a zero gradient
        loss = LipLoss(y, x, self.state.B, self.state.alpha)
        eg_update(self.state.eg, lip_gradient(loss, eg_point(self.state.eg)))
        if self.state.observe(y):
            logger.debug(f"leg U={self.U:.6g} t={self.t}: threshold raised to B={self.state.B:.6g}")


def leg_forecaster(U: float, d: int, alpha: float = 2.0) -> LegForecaster:
    return LegForecaster(U, d, alpha)

"""
lipschitz.py

Lipschitzified alpha-loss: coincides with |y - u.x|^alpha while |u.x| <= B and
continues linearly outside, which bounds its gradient uniformly in u. Also holds
the dyadic threshold ratchet B_t driven by the past observations.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ell1reg.core import Round
from ell1reg.errors import DimensionError


def threshold_from_exponent(k: Optional[int], alpha: float) -> float:
    """2^(k/alpha), assembled with ldexp so it neither underflows nor overflows early"""
    if k is None:
        return 0.0
    whole = math.floor(k / alpha)
    return math.ldexp(2.0 ** (k / alpha - whole), whole)


def threshold_exponent(y_history_max: float, alpha: float) -> Optional[int]:
    """Smallest integer k with 2^(k/alpha) >= y_max, i.e. ceil(log2(y_max^alpha)); None when y_max = 0.

    Starts from the binary exponent of y_max itself, never from y_max^alpha, so
    tiny and huge observations stay in range and exact powers of two never round up.
    """
    if y_history_max <= 0:
        return None
    mantissa, exponent = math.frexp(y_history_max)
    # y = (2 mantissa) 2^(exponent - 1) with 1 <= 2 mantissa < 2
    k = math.ceil(alpha * (exponent - 1) + alpha * math.log2(2.0 * mantissa))
    while threshold_from_exponent(k, alpha) < y_history_max:
        k += 1
    while threshold_from_exponent(k - 1, alpha) >= y_history_max:
        k -= 1
    return k


def update_threshold(B_prev: float, y_history_max: float, alpha: float) -> float:
    """B = (2^ceil(log2(y_max^alpha)))^(1/alpha), so that y_max <= B <= 2^(1/alpha) y_max"""
    if y_history_max < 0:
        raise ValueError(f"Running maximum must be nonnegative, got {y_history_max}")
    B = threshold_from_exponent(threshold_exponent(y_history_max, alpha), alpha)
    return max(B_prev, B)


@dataclass(frozen=True)
class LipLoss:
    """One round's Lipschitzified alpha-loss; inactive (identically zero) when |y| > B"""

    y: float
    x: np.ndarray
    B: float
    alpha: float = 2.0
    active: bool = field(init=False)

    def __post_init__(self):
        if self.B < 0:
            raise ValueError(f"Threshold must be nonnegative, got {self.B}")
        if self.alpha < 2:
            raise ValueError(f"alpha must be >= 2, got {self.alpha}")
        object.__setattr__(self, "x", np.atleast_1d(np.asarray(self.x, dtype=float)))
        object.__setattr__(self, "active", abs(self.y) <= self.B)


def lip_values(y, B, active, alpha: float, v) -> np.ndarray:
    """Vectorized loss values at predictions v = u.x_t"""
    y, B, v = np.asarray(y, float), np.asarray(B, float), np.asarray(v, float)
    upper = np.abs(y - B)
    lower = np.abs(y + B)
    values = np.where(
        v > B,
        upper ** alpha + alpha * upper ** (alpha - 1.0) * (v - B),
        np.where(
            v < -B,
            lower ** alpha - alpha * lower ** (alpha - 1.0) * (v + B),
            np.abs(y - v) ** alpha,
        ),
    )
    return np.where(active, values, 0.0)


def lip_derivatives(y, B, active, alpha: float, v) -> np.ndarray:
    """Vectorized derivative in v: -alpha sgn(y - [v]_B) |y - [v]_B|^(alpha-1)"""
    y, B, v = np.asarray(y, float), np.asarray(B, float), np.asarray(v, float)
    residual = y - np.clip(v, -B, B)
    derivatives = -alpha * np.sign(residual) * np.abs(residual) ** (alpha - 1.0)
    return np.where(active, derivatives, 0.0)


def _prediction(loss: LipLoss, u) -> float:
    u = np.asarray(u, dtype=float)
    if u.shape != loss.x.shape:
        raise DimensionError(f"Point has shape {u.shape}, input has shape {loss.x.shape}")
    return float(u @ loss.x)


def lip_eval(loss: LipLoss, u) -> float:
    v = _prediction(loss, u)
    return float(lip_values(loss.y, loss.B, loss.active, loss.alpha, v))


def lip_gradient(loss: LipLoss, u) -> np.ndarray:
    v = _prediction(loss, u)
    return float(lip_derivatives(loss.y, loss.B, loss.active, loss.alpha, v)) * loss.x


def lip_lipschitz_bound(y_max: float, x_inf: float, alpha: float) -> float:
    """Uniform bound on ||grad||_inf once B_t <= 2^(1/alpha) max|y_s|"""
    return alpha * (1.0 + 2.0 ** (1.0 / alpha)) ** (alpha - 1.0) * y_max ** (alpha - 1.0) * x_inf


def lipschitzified_losses(rounds: Sequence[Round], alpha: float) -> List[LipLoss]:
    """Rebuild the losses a threshold-ratcheting forecaster faces; B_t uses y_1..y_{t-1} only"""
    losses = []
    B, y_max = 0.0, 0.0
    for r in rounds:
        losses.append(LipLoss(r.y, r.x, B, alpha))
        y_max = max(y_max, abs(r.y))
        B = update_threshold(B, y_max, alpha)
    return losses

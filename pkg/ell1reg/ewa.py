"""
ewa.py

Exponentially weighted average forecaster with clipping: experts' predictions
are clipped to [-Y, Y] both when aggregated and when scored, and weights are
the max-subtracted softmax of -eta times the cumulative clipped square losses.
With eta <= 1/(8Y^2) and |y_t| <= Y the regret to the best expert is at most
ln(K)/eta.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import softmax

from ell1reg.core import Forecaster
from ell1reg.errors import DimensionError, NonFiniteError

logger = logging.getLogger("ell1reg")


def exp_concave_eta(Y: float) -> float:
    """Largest learning rate 1/(8Y^2) covered by the exp-concavity argument"""
    return math.inf if Y == 0 else 1.0 / (8.0 * Y * Y)


@dataclass
class EwaState:
    K: int
    eta: float
    Y_clip: float
    cumulative: Optional[np.ndarray] = None
    warn_excess: bool = True
    warned: bool = field(default=False, repr=False)

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"Need at least one expert, got K={self.K}")
        if not self.eta > 0:
            raise ValueError(f"Learning rate must be positive, got {self.eta}")
        if self.Y_clip < 0:
            raise ValueError(f"Clipping radius must be nonnegative, got {self.Y_clip}")
        if self.cumulative is None:
            self.cumulative = np.zeros(self.K)

    @property
    def weights(self) -> np.ndarray:
        if math.isinf(self.eta):
            # limit of the softmax: uniform over the current leaders
            leaders = self.cumulative == self.cumulative.min()
            return leaders / leaders.sum()
        return softmax(-self.eta * self.cumulative)


def _clipped(state: EwaState, expert_predictions) -> np.ndarray:
    predictions = np.asarray(expert_predictions, dtype=float)
    if predictions.shape != (state.K,):
        raise DimensionError(f"Expected {state.K} expert predictions, got shape {predictions.shape}")
    if not np.all(np.isfinite(predictions)):
        raise NonFiniteError("Expert predictions must be finite")
    return np.clip(predictions, -state.Y_clip, state.Y_clip)


def ewa_predict(state: EwaState, expert_predictions) -> float:
    """sum_k p_k [pred_k]_Y"""
    prediction = float(state.weights @ _clipped(state, expert_predictions))
    # rounding can leave the convex combination a few ulps outside the interval
    return min(state.Y_clip, max(-state.Y_clip, prediction))


def ewa_feed(state: EwaState, expert_predictions, y: float) -> EwaState:
    """Add each expert's clipped square loss on y; updates in place"""
    if not math.isfinite(y):
        raise NonFiniteError("Observation must be finite")
    if state.warn_excess and abs(y) > state.Y_clip and not state.warned:
        logger.warning(f"EWA: |y|={abs(y):.6g} exceeds clipping radius {state.Y_clip:.6g}; exp-concavity guarantee void")
        state.warned = True
    state.cumulative += (y - _clipped(state, expert_predictions)) ** 2
    return state


def ewa_extend(state: EwaState, count: int, initial_loss: Optional[float] = None) -> EwaState:
    """Append `count` experts, starting them at the current best cumulative loss by default"""
    if count <= 0:
        return state
    start = float(state.cumulative.min()) if initial_loss is None else initial_loss
    state.cumulative = np.concatenate([state.cumulative, np.full(count, start)])
    state.K += count
    return state


class EwaForecaster(Forecaster):
    """
    Clipped EWA over a list of expert forecasters; each round every expert is
    stepped, the clipped aggregate is returned, and every expert is fed y.
    """

    name = "ewa"

    def __init__(self, experts: Sequence[Forecaster], Y_clip: float, eta: Optional[float] = None, d: Optional[int] = None):
        super().__init__(d)
        self.experts = list(experts)
        self.ewa = EwaState(K=len(self.experts), eta=eta or exp_concave_eta(Y_clip), Y_clip=Y_clip)
        self._expert_predictions = None

    @property
    def weights(self) -> np.ndarray:
        return self.ewa.weights

    def _expert_step(self, index: int, x) -> float:
        return self.experts[index].step(x)

    def _expert_feed(self, index: int, y: float) -> None:
        self.experts[index].feed(y)

    def _predict(self, x):
        self._expert_predictions = np.array([self._expert_step(i, x) for i in range(len(self.experts))])
        return ewa_predict(self.ewa, self._expert_predictions)

    def _feed(self, x, y):
        ewa_feed(self.ewa, self._expert_predictions, y)
        for i in range(len(self.experts)):
            self._expert_feed(i, y)
        self._expert_predictions = None

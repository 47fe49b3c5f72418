"""
adaptive_eg.py

Adaptive EG+- on the l1-ball B1(U): exponential weights over the 2d signed
vertices +-U e_j with the self-confident learning rate
eta_{t+1} = min{1/E_t, C sqrt(ln(2d)/V_t)}, driven by the observed range E_t and
cumulative variance V_t of the loss vectors. Works with any convex loss given
its (sub)gradient; the square-loss forecaster is the default instantiation.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional

import numpy as np
from scipy.special import softmax

from ell1reg.config import C_ETA
from ell1reg.core import Forecaster, Round, square_loss_gradient
from ell1reg.errors import DimensionError, NonFiniteError

logger = logging.getLogger("ell1reg")


@dataclass
class VertexWeights:
    """Probability vector over the vertices, ordered (1,+), (1,-), (2,+), (2,-), ..."""

    p: np.ndarray

    @classmethod
    def uniform(cls, d: int) -> "VertexWeights":
        return cls(np.full(2 * d, 1.0 / (2 * d)))

    @property
    def plus(self) -> np.ndarray:
        return self.p[0::2]

    @property
    def minus(self) -> np.ndarray:
        return self.p[1::2]


@dataclass(frozen=True)
class TuningState:
    """Dyadic range estimate E_hat = 2^k (0 before any nonzero range), variance V, next eta"""

    E_exponent: Optional[int] = None
    max_range: float = 0.0
    V: float = 0.0
    eta: float = math.inf
    C: float = C_ETA

    @property
    def E_hat(self) -> float:
        return 0.0 if self.E_exponent is None else math.ldexp(1.0, self.E_exponent)


@dataclass
class EgState:
    U: float
    weights: VertexWeights
    tuning: TuningState = field(default_factory=TuningState)
    cumulative: Optional[np.ndarray] = None
    fixed_eta: Optional[float] = None

    def __post_init__(self):
        if self.U <= 0:
            raise ValueError(f"Radius must be positive, got {self.U}")
        if self.cumulative is None:
            self.cumulative = np.zeros_like(self.weights.p)

    @classmethod
    def initial(cls, U: float, d: int, fixed_eta: Optional[float] = None) -> "EgState":
        if d < 1:
            raise DimensionError(f"Dimension must be >= 1, got {d}")
        if fixed_eta is not None and not fixed_eta > 0:
            raise ValueError(f"Fixed learning rate must be positive, got {fixed_eta}")
        return cls(U=U, weights=VertexWeights.uniform(d), fixed_eta=fixed_eta)

    @property
    def d(self) -> int:
        return self.weights.p.size // 2

    @property
    def eta(self) -> float:
        return self.fixed_eta if self.fixed_eta is not None else self.tuning.eta


def _dyadic_exponent(value: float) -> int:
    """Smallest k with 2^k >= value > 0"""
    mantissa, exponent = math.frexp(value)
    return exponent - 1 if mantissa == 0.5 else exponent


def eg_point(state: EgState) -> np.ndarray:
    """u_t = U sum_j (p+_j - p-_j) e_j"""
    return state.U * (state.weights.plus - state.weights.minus)


def loss_vector(grad, U: float) -> np.ndarray:
    """z_{j,+} = U grad_j, z_{j,-} = -U grad_j, interleaved like the weights"""
    grad = np.asarray(grad, dtype=float)
    z = np.empty(2 * grad.size)
    z[0::2] = U * grad
    z[1::2] = -U * grad
    return z


def update_tuning(tuning: TuningState, z, weights: VertexWeights) -> TuningState:
    """Fold one loss vector into (E_hat, V) and derive eta for the next round"""
    z = np.asarray(z, dtype=float)
    p = weights.p
    mean = float(p @ z)
    V = tuning.V + float(p @ (z - mean) ** 2)

    max_range = max(tuning.max_range, float(z.max() - z.min()))
    E_exponent = tuning.E_exponent
    if max_range > 0:
        E_exponent = _dyadic_exponent(max_range)

    # degenerate branches count as +inf
    range_branch = math.inf if E_exponent is None else math.ldexp(1.0, -E_exponent)
    variance_branch = math.inf if V <= 0 else tuning.C * math.sqrt(math.log(z.size) / V)
    eta = min(range_branch, variance_branch)

    return replace(tuning, E_exponent=E_exponent, max_range=max_range, V=V, eta=eta)


def eg_update(state: EgState, grad) -> EgState:
    """Incorporate the gradient of round t (taken at eg_point(state)); updates in place"""
    grad = np.asarray(grad, dtype=float)
    if grad.shape != (state.d,):
        raise DimensionError(f"Gradient has shape {grad.shape}, expected ({state.d},)")
    if not np.all(np.isfinite(grad)):
        raise NonFiniteError("Gradient must be finite")

    z = loss_vector(grad, state.U)
    state.tuning = update_tuning(state.tuning, z, state.weights)
    state.cumulative += z

    eta = state.eta
    if math.isinf(eta):
        # only reachable while every loss vector so far was zero
        state.weights = VertexWeights.uniform(state.d)
    else:
        state.weights = VertexWeights(softmax(-eta * state.cumulative))
    return state


GradientFn = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


def _square_gradient(u: np.ndarray, x: np.ndarray, y: float) -> np.ndarray:
    return square_loss_gradient(u, Round(x, y))


class AdaptiveEGForecaster(Forecaster):
    """
    Adaptive EG+- as an online forecaster predicting u_t.x_t. `gradient_fn(u, x, y)`
    supplies the (sub)gradient of the round's loss at u; square loss by default.
    Passing `eta` freezes the learning rate (non-adaptive EG+-).
    """

    name = "adaptive-eg"

    def __init__(self, U: float, d: int, gradient_fn: Optional[GradientFn] = None, eta: Optional[float] = None):
        super().__init__(d)
        self.state = EgState.initial(U, d, fixed_eta=eta)
        self.gradient_fn = gradient_fn or _square_gradient
        self.grad_sq_sum = 0.0
        self.grad_max = 0.0
        self.eta_history: List[float] = []
        logger.debug(f"{self.name}: U={U}, d={d}, fixed eta={eta}")

    @property
    def current_point(self) -> np.ndarray:
        return eg_point(self.state)

    def _predict(self, x):
        return float(eg_point(self.state) @ x)

    def _feed(self, x, y):
        grad = self.gradient_fn(eg_point(self.state), x, y)
        grad_inf = float(np.max(np.abs(grad)))
        self.grad_sq_sum += grad_inf ** 2
        self.grad_max = max(self.grad_max, grad_inf)
        eg_update(self.state, grad)
        self.eta_history.append(self.state.eta)
        tuning = self.state.tuning
        logger.debug(f"{self.name} t={self.t}: E_hat={tuning.E_hat:.6g} V={tuning.V:.6g} eta={self.state.eta:.6g}")


def adaptive_eg_square_forecaster(U: float, d: int) -> AdaptiveEGForecaster:
    return AdaptiveEGForecaster(U, d)


def fixed_eta_eg_square_forecaster(U: float, d: int, eta: float) -> AdaptiveEGForecaster:
    forecaster = AdaptiveEGForecaster(U, d, eta=eta)
    forecaster.name = "fixed-eta-eg"
    return forecaster

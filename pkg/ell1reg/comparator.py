"""
comparator.py

Offline oracle for inf over B1(U) of a cumulative per-round convex loss of the
predictions u.x_t. Conditional gradient over the 2d signed vertices +-U e_j, with
pairwise (away) steps and a root-finding line search; every result carries the
linearized duality gap g.u + U ||g||_inf as an optimality certificate.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from ell1reg.config import COMPARATOR_MAX_ITER, COMPARATOR_REL_TOL
from ell1reg.core import SQUARE_LOSS, LossSpec, Round, stack_rounds
from ell1reg.errors import ConvergenceError, DimensionError
from ell1reg.lipschitz import LipLoss, lip_derivatives, lip_values

logger = logging.getLogger("ell1reg")


@dataclass(frozen=True)
class ComparatorResult:
    u_star: np.ndarray
    loss: float
    gap: float
    iterations: int = 0

    @property
    def lower_bound(self) -> float:
        """Certified lower bound on the true minimum: loss - gap, floored at zero"""
        return max(0.0, self.loss - self.gap)


def linearized_gap(grad, u, U: float) -> float:
    """max over vertices v of grad.(u - v) = grad.u + U ||grad||_inf"""
    grad = np.asarray(grad, dtype=float)
    return float(grad @ np.asarray(u, dtype=float) + U * np.max(np.abs(grad)))


def _vertex_scores(grad: np.ndarray, U: float) -> np.ndarray:
    # vertex order (1,+), (1,-), (2,+), ... so argmin breaks ties on lowest index, + first
    scores = np.empty(2 * grad.size)
    scores[0::2] = U * grad
    scores[1::2] = -U * grad
    return scores


def _vertex_direction(a: int, U: float, d: int) -> np.ndarray:
    direction = np.zeros(d)
    direction[a // 2] = U if a % 2 == 0 else -U
    return direction


def _line_search(derivative: Callable, v: np.ndarray, w: np.ndarray, step_max: float) -> float:
    """Minimize a convex scalar function on [0, step_max] from its derivative"""

    def slope(step):
        return float(derivative(v + step * w) @ w)

    if slope(step_max) <= 0.0:
        return step_max
    return brentq(slope, 0.0, step_max, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def conditional_gradient(
    inputs: np.ndarray,
    value: Callable,
    derivative: Callable,
    U: float,
    tol: Optional[float] = None,
    max_iter: int = COMPARATOR_MAX_ITER,
) -> ComparatorResult:
    """
    Minimize sum_t f_t(u.x_t) over B1(U), given vectorized per-round values and
    derivatives of the predictions. Stops once the certified gap is <= tol.
    """
    if U <= 0:
        raise ValueError(f"Radius must be positive, got {U}")
    T, d = inputs.shape
    if tol is None:
        tol = COMPARATOR_REL_TOL * max(1.0, float(np.sum(value(np.zeros(T)))))
    if tol <= 0:
        raise ValueError(f"Tolerance must be positive, got {tol}")

    weights = np.full(2 * d, 1.0 / (2 * d))
    u = np.zeros(d)
    v = np.zeros(T)
    gap = np.inf
    iteration = 0

    for iteration in range(max_iter):
        grad = inputs.T @ derivative(v)
        scores = _vertex_scores(grad, U)
        toward = int(np.argmin(scores))
        gap = float(grad @ u - scores[toward])
        if gap <= tol:
            logger.debug(f"Comparator converged: {iteration} iterations, gap {gap:.3e}")
            return ComparatorResult(u, float(np.sum(value(v))), max(gap, 0.0), iteration)

        away = int(np.argmax(np.where(weights > 0.0, scores, -np.inf)))
        direction = _vertex_direction(toward, U, d) - _vertex_direction(away, U, d)
        w = inputs @ direction

        if toward != away and float(derivative(v) @ w) < 0.0:
            step_max = weights[away]
            step = _line_search(derivative, v, w, step_max)
            weights[toward] += step
            weights[away] = 0.0 if step == step_max else weights[away] - step
        else:
            # plain Frank-Wolfe step toward the best vertex
            w = inputs @ (_vertex_direction(toward, U, d) - u)
            if float(derivative(v) @ w) >= 0.0:
                break
            step = _line_search(derivative, v, w, 1.0)
            weights *= 1.0 - step
            weights[toward] += step

        weights = np.maximum(weights, 0.0)
        weights /= weights.sum()
        u = U * (weights[0::2] - weights[1::2])
        v = inputs @ u

    raise ConvergenceError(
        f"Comparator stopped after {iteration + 1} iterations with gap {gap:.3e} > tol {tol:.3e}"
    )


def min_alpha_loss_l1(
    rounds: Sequence[Round], U: float, spec: LossSpec = SQUARE_LOSS, tol: Optional[float] = None
) -> ComparatorResult:
    """inf over B1(U) of sum_t |y_t - u.x_t|^alpha"""
    inputs, y = stack_rounds(rounds)
    alpha = spec.alpha

    def value(v):
        return np.abs(y - v) ** alpha

    def derivative(v):
        residual = y - v
        return -alpha * np.sign(residual) * np.abs(residual) ** (alpha - 1.0)

    return conditional_gradient(inputs, value, derivative, U, tol)


def min_square_loss_l1(rounds: Sequence[Round], U: float, tol: Optional[float] = None) -> ComparatorResult:
    """inf over B1(U) of sum_t (y_t - u.x_t)^2"""
    return min_alpha_loss_l1(rounds, U, SQUARE_LOSS, tol)


def min_lip_loss_l1(losses: Sequence[LipLoss], U: float, tol: Optional[float] = None) -> ComparatorResult:
    """inf over B1(U) of the cumulative Lipschitzified loss (convex and C1 in u)"""
    if len(losses) == 0:
        raise ValueError("Loss sequence is empty")
    alphas = {loss.alpha for loss in losses}
    if len(alphas) != 1:
        raise ValueError(f"Losses mix exponents {sorted(alphas)}")
    d = losses[0].x.size
    if any(loss.x.size != d for loss in losses):
        raise DimensionError("Losses mix input dimensions")

    alpha = alphas.pop()
    inputs = np.vstack([loss.x for loss in losses])
    y = np.array([loss.y for loss in losses])
    B = np.array([loss.B for loss in losses])
    active = np.array([loss.active for loss in losses])

    return conditional_gradient(
        inputs,
        lambda v: lip_values(y, B, active, alpha, v),
        lambda v: lip_derivatives(y, B, active, alpha, v),
        U,
        tol,
    )

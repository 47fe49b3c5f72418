"""
core.py

Shared domain types, clipping, alpha-losses and their gradients, the forecaster
protocol (step, then feed) and the regret accounting used by every other module.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ell1reg.errors import DimensionError, NonFiniteError, ProtocolError

logger = logging.getLogger("ell1reg")


@dataclass(frozen=True)
class Round:
    """One (x_t, y_t) pair of the stream"""

    x: np.ndarray
    y: float

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        if x.ndim != 1 or x.size == 0:
            raise DimensionError(f"Round input must be a nonempty vector, got shape {x.shape}")
        if not np.all(np.isfinite(x)) or not math.isfinite(self.y):
            raise NonFiniteError("Round entries must be finite")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", float(self.y))

    @property
    def d(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class StreamBounds:
    X: float
    Y: float
    T: int


@dataclass(frozen=True)
class LossSpec:
    """Exponent of the alpha-loss |y - p|^alpha"""

    alpha: float = 2.0

    def __post_init__(self):
        if not self.alpha >= 2.0:
            raise ValueError(f"alpha must be >= 2, got {self.alpha}")


SQUARE_LOSS = LossSpec(2.0)


@dataclass
class RegretTrace:
    """Per-step record of a run; comparator loss and bound are filled post hoc."""

    horizon: int
    y: list = field(default_factory=list)
    predictions: list = field(default_factory=list)
    losses: list = field(default_factory=list)
    point_norms: list = field(default_factory=list)
    comparator_loss: Optional[float] = None
    bound: Optional[float] = None

    def append(self, y, prediction, loss, point_norm=None):
        if len(self.losses) >= self.horizon:
            raise ProtocolError(f"Trace already holds its {self.horizon} steps")
        self.y.append(float(y))
        self.predictions.append(float(prediction))
        self.losses.append(float(loss))
        self.point_norms.append(math.nan if point_norm is None else float(point_norm))

    @property
    def complete(self) -> bool:
        return len(self.losses) == self.horizon

    @property
    def cumulative_loss(self) -> np.ndarray:
        return np.cumsum(np.asarray(self.losses, dtype=float))

    @property
    def total_loss(self) -> float:
        return float(math.fsum(self.losses))

    @property
    def regret(self) -> np.ndarray:
        """Cumulative loss minus the (whole-stream) comparator loss, per step"""
        comparator = self.comparator_loss if self.comparator_loss is not None else math.nan
        return self.cumulative_loss - comparator


def clip(v: float, B: float) -> float:
    """[v]_B = min{B, max{-B, v}}"""
    if B < 0:
        raise ValueError(f"Clipping radius must be nonnegative, got {B}")
    return min(B, max(-B, v))


def alpha_loss(y: float, p: float, spec: LossSpec = SQUARE_LOSS) -> float:
    """|y - p|^alpha; saturates to inf instead of raising when the power leaves float range"""
    with np.errstate(over="ignore"):
        return float(np.power(abs(y - p), spec.alpha))


def square_loss_gradient(u, round_: Round) -> np.ndarray:
    """Gradient in u of (y - u.x)^2, i.e. -2(y - u.x) x"""
    u = np.asarray(u, dtype=float)
    if u.shape != round_.x.shape:
        raise DimensionError(f"Point has shape {u.shape}, input has shape {round_.x.shape}")
    return -2.0 * (round_.y - float(u @ round_.x)) * round_.x


def stack_rounds(rounds: Sequence[Round]):
    """Return (inputs matrix T x d, observations vector) for a stream"""
    if len(rounds) == 0:
        raise ValueError("Stream is empty")
    d = rounds[0].d
    if any(r.d != d for r in rounds):
        raise DimensionError("Stream mixes input dimensions")
    X = np.vstack([r.x for r in rounds])
    y = np.array([r.y for r in rounds], dtype=float)
    return X, y


def stream_bounds(rounds: Sequence[Round]) -> StreamBounds:
    """Realized X = max ||x_t||_inf, Y = max |y_t| and T"""
    X, y = stack_rounds(rounds)
    return StreamBounds(X=float(np.max(np.abs(X))), Y=float(np.max(np.abs(y))), T=len(rounds))


class Forecaster(ABC):
    """
    Online forecaster: `step(x_t)` returns the prediction, `feed(y_t)` reveals the
    observation. Calls must strictly alternate, starting with `step`.

    The input dimension is fixed either at construction or by the first round.
    """

    name = "forecaster"

    def __init__(self, d: Optional[int] = None):
        if d is not None and d < 1:
            raise DimensionError(f"Dimension must be >= 1, got {d}")
        self.d = d
        self.t = 0
        self._pending_x = None

    def step(self, x) -> float:
        if self._pending_x is not None:
            raise ProtocolError(f"{self.name}: step called twice without feed at round {self.t + 1}")
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.d is None:
            if x.ndim != 1 or x.size == 0:
                raise DimensionError(f"{self.name}: input must be a nonempty vector")
            self.d = x.size
            self._on_dimension(self.d)
        if x.shape != (self.d,):
            raise DimensionError(f"{self.name}: expected dimension {self.d}, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise NonFiniteError(f"{self.name}: non-finite input at round {self.t + 1}")
        prediction = float(self._predict(x))
        self._pending_x = x
        return prediction

    def feed(self, y: float) -> None:
        if self._pending_x is None:
            raise ProtocolError(f"{self.name}: feed called before step at round {self.t + 1}")
        if not math.isfinite(y):
            raise NonFiniteError(f"{self.name}: non-finite observation at round {self.t + 1}")
        x, self._pending_x = self._pending_x, None
        self.t += 1
        self._feed(x, float(y))

    @property
    def current_point(self) -> Optional[np.ndarray]:
        """Internal comparator point u_t, or None for forecasters without one"""
        return None

    def _on_dimension(self, d: int) -> None:
        """Hook for forecasters whose dimension is learned from the first round"""

    @abstractmethod
    def _predict(self, x: np.ndarray) -> float:
        ...

    @abstractmethod
    def _feed(self, x: np.ndarray, y: float) -> None:
        ...


class NullForecaster(Forecaster):
    """Predicts 0 forever"""

    name = "null"

    def _predict(self, x):
        return 0.0

    def _feed(self, x, y):
        pass


def run_protocol(forecaster: Forecaster, rounds: Sequence[Round], loss: LossSpec = SQUARE_LOSS) -> RegretTrace:
    """Drive the online protocol over a stream and record the trace"""
    trace = RegretTrace(horizon=len(rounds))
    for r in rounds:
        prediction = forecaster.step(r.x)
        point = forecaster.current_point
        forecaster.feed(r.y)
        trace.append(
            r.y,
            prediction,
            alpha_loss(r.y, prediction, loss),
            None if point is None else float(np.abs(point).sum()),
        )
    logger.debug(f"{forecaster.name}: {len(rounds)} rounds, cumulative loss {trace.total_loss:.6g}")
    return trace


def compute_regret(trace: RegretTrace, comparator_loss: float) -> float:
    """Sum of losses minus the comparator loss"""
    if not trace.complete:
        raise ProtocolError(f"Trace has {len(trace.losses)} of {trace.horizon} steps")
    if comparator_loss < 0:
        raise ValueError(f"Comparator loss must be nonnegative, got {comparator_loss}")
    return trace.total_loss - comparator_loss

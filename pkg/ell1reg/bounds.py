"""
bounds.py

Closed-form regret bounds for the forecasters in this package, the kappa regime
classifier and the quadratic-inequality solver used to turn small-loss bounds
into explicit ones. Everything here is a pure function of its arguments.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from ell1reg.config import C_ETA, REMARK1_C1, REMARK1_C2  # noqa: F401  re-exported constants

# Relative distance below which a parameter counts as sitting on a case boundary
BOUNDARY_TOL = 1e-9

BELOW_GRID = "below-grid"
MID = "mid"
HIGH = "high"


@dataclass(frozen=True)
class Regime:
    kappa: float
    label: str


def _log2d(d: int) -> float:
    return math.log(2 * d)


def _near(a: float, b: float) -> bool:
    return abs(a - b) <= BOUNDARY_TOL * max(abs(a), abs(b))


def positive_ceil(x: float) -> int:
    """Smallest natural number k >= x"""
    return max(0, math.ceil(x))


def kappa_threshold(d: int) -> float:
    """sqrt(ln(1+2d)) / (2d sqrt(ln 2)), the lower edge of the middle regime in kappa"""
    return math.sqrt(math.log(1 + 2 * d)) / (2 * d * math.sqrt(math.log(2)))


def classify_kappa(value: float, d: int) -> Regime:
    # boundaries belong to the middle regime
    if value < kappa_threshold(d) and not _near(value, kappa_threshold(d)):
        label = BELOW_GRID
    elif value <= 1.0 or _near(value, 1.0):
        label = MID
    else:
        label = HIGH
    return Regime(kappa=value, label=label)


def kappa(U: float, X: float, Y: float, T: int, d: int) -> Regime:
    """kappa = sqrt(T) U X / (2 d Y), labelled with its regime"""
    if min(U, X, Y) <= 0 or T < 1 or d < 1:
        raise ValueError(f"Parameters must be positive: U={U}, X={X}, Y={Y}, T={T}, d={d}")
    return classify_kappa(math.sqrt(T) * U * X / (2 * d * Y), d)


def theorem1_cases(U: float, X: float, Y: float, T: int, d: int) -> Tuple[float, float, float]:
    """The three expressions of the minimax upper bound, evaluated regardless of regime"""
    UXY = U * X * Y
    low = 3.0 * UXY * math.sqrt(2.0 * T * _log2d(d))
    mid = 26.0 * UXY * math.sqrt(T * math.log1p(2 * d * Y / (math.sqrt(T) * U * X)))
    high = 32.0 * d * Y * Y * math.log1p(math.sqrt(T) * U * X / (d * Y)) + d * Y * Y
    return low, mid, high


def bound_theorem1(U: float, X: float, Y: float, T: int, d: int) -> float:
    """Minimax upper bound, picking the case from U against the two radius thresholds.

    On a threshold (within BOUNDARY_TOL) both adjacent cases hold and the smaller
    value is returned.
    """
    low, mid, high = theorem1_cases(U, X, Y, T, d)
    lower = (Y / X) * math.sqrt(math.log(1 + 2 * d) / (T * math.log(2)))
    upper = 2 * d * Y / (math.sqrt(T) * X)

    if _near(U, lower):
        return min(low, mid)
    if _near(U, upper):
        return min(mid, high)
    if U < lower:
        return low
    if U <= upper:
        return mid
    return high


def bound_corollary1(value: float, d: int, Y: float) -> float:
    """The minimax bound written in kappa.

    kappa = 1 is evaluated on the high branch, which is the right-continuous
    closure the regime sweep reports; `classify_kappa` still labels it mid.
    """
    if value <= 0:
        raise ValueError(f"kappa must be positive, got {value}")
    dY2 = d * Y * Y
    if value >= 1.0 or _near(value, 1.0):
        return 32.0 * dY2 * (math.log1p(2.0 * value) + 1.0)
    if value < kappa_threshold(d):
        return 6.0 * dY2 * value * math.sqrt(2.0 * _log2d(d))
    return 52.0 * dY2 * value * math.sqrt(math.log1p(1.0 / value))


def bound_prop1(U: float, grad_sq_sum: float, grad_max: float, d: int) -> float:
    """Adaptive EG+- regret for any convex losses, from the observed gradient statistics"""
    if grad_sq_sum < 0 or grad_max < 0:
        raise ValueError("Gradient statistics must be nonnegative")
    log2d = _log2d(d)
    return 4.0 * U * math.sqrt(grad_sq_sum * log2d) + U * (8.0 * log2d + 12.0) * grad_max


def bound_corollary2(U: float, X: float, Y: float, T: int, d: int, comparator_loss: Optional[float] = None) -> float:
    """Adaptive EG+- under the square loss: small-loss form when the comparator loss is known"""
    log2d = _log2d(d)
    tail = (137.0 * log2d + 24.0) * (U * X * Y + U * U * X * X)
    if comparator_loss is None:
        return 8.0 * U * X * Y * math.sqrt(T * log2d) + tail
    if comparator_loss < 0:
        raise ValueError(f"Comparator loss must be nonnegative, got {comparator_loss}")
    return 8.0 * U * X * math.sqrt(comparator_loss * log2d) + tail


@dataclass(frozen=True)
class AlphaConstants:
    a: float
    b: float
    a_prime: float
    a_second: float
    a_third: float


def constants_alpha(alpha: float) -> AlphaConstants:
    if not alpha >= 2:
        raise ValueError(f"alpha must be >= 2, got {alpha}")
    a = 4.0 * alpha * (1.0 + 2.0 ** (1.0 / alpha)) ** (alpha / 2.0 - 1.0)
    b = alpha * (1.0 + 2.0 ** (1.0 / alpha)) ** (alpha - 1.0)
    root = math.sqrt(b * (4.0 + 6.0 / math.log(2)))
    a_prime = a * (root + 2.0 * (1.0 + 2.0 ** (-1.0 / alpha)) ** (alpha / 2.0) / math.sqrt(math.log(2))) + 8.0 * b
    a_second = a * (root + a)
    a_third = 4.0 * (1.0 + 2.0 ** (-1.0 / alpha)) ** alpha
    return AlphaConstants(a, b, a_prime, a_second, a_third)


def bound_theorem3(U: float, X: float, Y: float, alpha: float, d: int, lip_comparator_loss: float) -> float:
    """Right-hand side for the cumulative alpha-loss of LEG (comparator term included)"""
    if lip_comparator_loss < 0:
        raise ValueError(f"Comparator loss must be nonnegative, got {lip_comparator_loss}")
    k = constants_alpha(alpha)
    log2d = _log2d(d)
    return (
        lip_comparator_loss
        + k.a * U * X * Y ** (alpha / 2.0 - 1.0) * math.sqrt(lip_comparator_loss * log2d)
        + (k.a_prime * log2d + 12.0 * k.b) * U * X * Y ** (alpha - 1.0)
        + k.a_second * log2d * U * U * X * X * Y ** (alpha - 2.0)
        + k.a_third * Y ** alpha
    )


def bound_corollary3(U: float, X: float, Y: float, d: int, lip_comparator_loss: float) -> float:
    """Square-loss LEG right-hand side with the rounded constants 134, 58 and 12"""
    if lip_comparator_loss < 0:
        raise ValueError(f"Comparator loss must be nonnegative, got {lip_comparator_loss}")
    log2d = _log2d(d)
    return (
        lip_comparator_loss
        + 8.0 * U * X * math.sqrt(lip_comparator_loss * log2d)
        + (134.0 * log2d + 58.0) * (U * X * Y + U * U * X * X)
        + 12.0 * Y * Y
    )


def bound_remark1(U: float, X: float, Y: float, T: int, d: int) -> float:
    """LEG square-loss regret without the small-loss refinement"""
    log2d = _log2d(d)
    return REMARK1_C1 * U * X * Y * (math.sqrt(T * log2d) + 8.0 * log2d) + REMARK1_C2 * Y * Y


def scaling_grid_size(T: int, c: float) -> int:
    """R = ceil(log2(2T/c))_+"""
    return positive_ceil(math.log2(2.0 * T / c))


def bound_theorem4(U: float, X: float, Y: float, T: int, d: int, c: float, c_prime: float) -> float:
    """Scaling regret against B1(U), for sub-algorithms with regret c U X Y sqrt(T ln 2d) + c' Y^2"""
    R = scaling_grid_size(T, c)
    return (
        2.0 * c * U * X * Y * math.sqrt(T * _log2d(d))
        + 8.0 * Y * Y * math.log(R + 1)
        + (c + c_prime) * Y * Y
    )


def bound_fully_adaptive(U: float, X: float, Y: float, T: int, d: int, k: float) -> float:
    """Order-of-magnitude envelope of the fully automatic variant (unit multiplier).

    Uses ln(2d) in place of ln(d) so the leading term does not vanish at d = 1.
    """
    if not k > 1:
        raise ValueError(f"k must exceed 1, got {k}")
    ratio = math.sqrt(T) * X / Y
    return (
        U * X * Y * math.sqrt(T * _log2d(d))
        + Y * Y * k * math.log(T)
        + Y * Y * max(ratio ** (1.0 / k), ratio ** (-1.0 / k))
    )


def bound_lemma_b2(U: float, X: float, Y: float, T: int, d: int) -> float:
    """Best of the fixed-tuning EG+- bound and the sparsity-oriented log bound"""
    first = 3.0 * U * X * Y * math.sqrt(2.0 * T * _log2d(d))
    second = 32.0 * d * Y * Y * math.log1p(math.sqrt(T) * U * X / (d * Y)) + d * Y * Y
    return min(first, second)


def bound_lemma_b3(K: int, eta: float) -> float:
    """Clipped EWA regret to the best of K experts: ln(K) / eta"""
    if K < 1 or not eta > 0:
        raise ValueError(f"Need K >= 1 and eta > 0, got K={K}, eta={eta}")
    return math.log(K) / eta


def bound_lemma_c1(T: int, U: float, X: float, m: int) -> float:
    """Approximation error of the m-level grid: T U^2 X^2 / m"""
    return T * U * U * X * X / m


def grid_cardinality_bound(d: int, m: int) -> float:
    """(e(2d+m)/m)^m"""
    return (math.e * (2 * d + m) / m) ** m


def solve_quadratic_regret(a: float, b: float) -> float:
    """Any x >= 0 with x <= a + b sqrt(x) satisfies x <= a + b sqrt(a) + b^2"""
    if a < 0 or b < 0:
        raise ValueError(f"Coefficients must be nonnegative, got a={a}, b={b}")
    return a + b * math.sqrt(a) + b * b

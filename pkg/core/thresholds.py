"""
Pure threshold rules tau(c): accept the first observation with value >= c.

W_c(t) = [1 - exp(-t P(X >= c))] E(X | X >= c). This module also holds the
h_t / gamma(t) / beta(t) machinery behind the minimax threshold
c* = b beta(t) / (beta(t) + 1 - e^{-t}).
"""
from dataclasses import dataclass
from typing import Tuple
import logging
import math

import numpy as np

from config import BETA_SERIES_CUTOFF, ENDPOINT_GRID_POINTS, ENDPOINT_GRID_RANGE
from .distributions import FiniteDist, make_finite_dist, solve_c_alpha
from .poisson_stopping import TIE_TOLERANCE, expected_max

logger = logging.getLogger(__name__)


class UnreachableThresholdError(ValueError):
    """The threshold lies above the support, so the rule never stops."""


@dataclass(frozen=True)
class BetaBundle:
    """gamma(t), beta(t) and the maximizer of h_t for one horizon."""

    t: float
    gamma_t: float
    beta_t: float
    argmax_x: float


def _check_t(t: float):
    if not t > 0:
        raise ValueError(f"Horizon must be positive, got {t}")


def gamma_t(t: float) -> float:
    """gamma(t) = t / (1 - e^{-t})."""
    _check_t(t)
    return t / -math.expm1(-t)


def beta_t(t: float) -> float:
    """beta(t) = 1 - (1 + log gamma(t)) / gamma(t), the maximum of h_t on [0, 1]."""
    _check_t(t)
    if t < BETA_SERIES_CUTOFF:
        # gamma - 1 - log gamma = t^2/8 - t^4/576 + O(t^6)
        t2 = t * t
        return (t2 / 8.0 - t2 * t2 / 576.0) / gamma_t(t)
    g = gamma_t(t)
    return 1.0 - (1.0 + math.log(g)) / g


def beta_bundle(t: float) -> BetaBundle:
    g = gamma_t(t)
    return BetaBundle(t=t, gamma_t=g, beta_t=beta_t(t), argmax_x=math.log(g) / t)


def h_t(t: float, x: float) -> float:
    """h_t(x) = 1 - e^{-tx} - (1 - e^{-t}) x on [0, 1]."""
    _check_t(t)
    if not 0 <= x <= 1:
        raise ValueError(f"h_t is defined on [0, 1], got x={x}")
    return -math.expm1(-t * x) + math.expm1(-t) * x


def threshold_value(d: FiniteDist, c: float, t: float) -> float:
    """
    W_c(t), the expected return of tau(c) by deadline t.

    Raises:
        UnreachableThresholdError: If P(X >= c) = 0
    """
    _check_t(t)
    if c < 0:
        raise ValueError(f"Threshold must be nonnegative, got {c}")
    r = d.tail_prob(c)
    if r <= 0:
        raise UnreachableThresholdError(f"Threshold {c} exceeds the largest atom {d.max_atom}")
    return -math.expm1(-t * r) * d.cond_tail_mean(c)


def best_threshold(d: FiniteDist, t: float) -> Tuple[float, float]:
    """
    sup_c W_c(t), attained at an atom since W_c is constant between atoms.

    Returns:
        Tuple of (smallest maximizing atom, its value); values within
        TIE_TOLERANCE (relative) of the maximum count as ties
    """
    values = [threshold_value(d, c, t) for c in d.atoms]
    top = max(values)
    for c, value in zip(d.atoms, values):
        if value >= top * (1.0 - TIE_TOLERANCE):
            return c, value


def threshold_gap(d: FiniteDist, c: float, t: float) -> float:
    """D_c(t) = M(t) - W_c(t)."""
    return expected_max(d, t) - threshold_value(d, c, t)


def minimax_threshold(a: float, b: float, t: float) -> float:
    """c* = b beta(t) / (beta(t) + 1 - e^{-t}); the guarantee is [b - max(a, c*)] beta(t)."""
    _check_interval(a, b)
    beta = beta_t(t)
    return b * beta / (beta - math.expm1(-t))


def minimax_guarantee(a: float, b: float, t: float) -> float:
    """[b - max(a, c*)] beta(t): the bound on M(t) - W_{c*}(t) over [a, b]-valued laws."""
    return (b - max(a, minimax_threshold(a, b, t))) * beta_t(t)


def difference_bound(a: float, b: float, t: float) -> float:
    """min{(b - a) beta(t), b beta(t)(1 - e^{-t}) / (beta(t) + 1 - e^{-t})}."""
    _check_interval(a, b)
    beta = beta_t(t)
    q = -math.expm1(-t)
    return min((b - a) * beta, b * beta * q / (beta + q))


def _check_interval(a: float, b: float):
    if a < 0:
        raise ValueError(f"Lower end must be nonnegative, got {a}")
    if not b > a:
        raise ValueError(f"Need b > a, got a={a}, b={b}")


def alpha_star(t: float) -> float:
    """alpha* = (1 - e^{-t}) / (t + e^{-t} - 1)."""
    _check_t(t)
    q = -math.expm1(-t)
    return q / (t - q)


def universal_threshold(d: FiniteDist, t: float) -> Tuple[float, float]:
    """
    The threshold c solving E(X - c)^+ = alpha*(t) c, and its value W_c(t).

    This single rule already satisfies M(t) / W_c(t) < 2 - (1 - e^{-t})/t.
    """
    c = solve_c_alpha(d, alpha_star(t))
    # the root can sit a rounding error above the top atom only if it equals it
    c = min(c, d.max_atom)
    return c, threshold_value(d, c, t)


def minimax_adversary(a: float, b: float, t: float, c: float, delta: float = 1e-9) -> FiniteDist:
    """
    An [a, b]-valued law making D_c(t) nearly as large as [b - max(a, c*)] beta(t).

    (i) c <= a: X in {a, b} with P(X = b) = log(gamma(t))/t;
    (ii) a < c < c*: X in {c, b} with the same P(X = b);
    (iii) c >= c*, c > a: X = c - delta.
    """
    _check_interval(a, b)
    _check_t(t)
    c_star = minimax_threshold(a, b, t)
    p_top = math.log(gamma_t(t)) / t
    if c <= a:
        return make_finite_dist([a, b], [1.0 - p_top, p_top], observation=False)
    if c < c_star:
        return make_finite_dist([c, b], [1.0 - p_top, p_top], observation=False)
    if not 0 < delta < c - a:
        raise ValueError(f"delta must be in (0, {c - a}), got {delta}")
    return make_finite_dist([c - delta], [1.0], observation=False)


def endpoint_min_check(gamma: float, grid: int = ENDPOINT_GRID_POINTS) -> bool:
    """
    Sample f(x) = (1 - e^{-x})(1 + gamma/x) on a log-spaced grid and report
    whether it is free of interior local minima (beyond 1e-12 noise).
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if grid < 1000:
        raise ValueError(f"grid must have at least 1000 points, got {grid}")
    lo, hi = ENDPOINT_GRID_RANGE
    x = np.geomspace(lo, hi, grid)
    f = -np.expm1(-x) * (1.0 + gamma / x)
    noise = 1e-12 * np.maximum(1.0, np.abs(f[1:-1]))
    dips = (f[:-2] - f[1:-1] > noise) & (f[2:] - f[1:-1] > noise)
    if np.any(dips):
        where = x[1:-1][dips]
        logger.warning(f"Interior local minimum of f for gamma={gamma} near x={where[0]:.6g}")
        return False
    return True

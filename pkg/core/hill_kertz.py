"""
Hill-Kertz constants a_n = 1 + alpha_n and b_n = beta_n, and the limit alpha_0.

alpha_n solves eta_{n-1,n}(alpha) = 1 and beta_n solves
(n - 1)[eta_{n,n}(beta) - eta_{n-1,n}(beta)] = 1, where eta is the n-fold
iterate of phi_n(w, x) = (n/(n-1)) w^{(n-1)/n} + x/(n-1) started from
phi_n(0, x). Both roots are found by bisection on (0, 1).
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Tuple
import logging
import math

from numba import njit

from config import BISECTION_TOLERANCE, BISECTION_MAX_ITER, QUADRATURE_TOLERANCE
from utils.numerics import adaptive_simpson, bisect

logger = logging.getLogger(__name__)

RATIO = 'ratio'
DIFFERENCE = 'difference'


@dataclass(frozen=True)
class HKConstants:
    """Hill-Kertz constants for n observations."""

    n: int
    alpha_n: float
    beta_n: float
    tol: float

    @property
    def a_n(self) -> float:
        return 1.0 + self.alpha_n

    @property
    def b_n(self) -> float:
        return self.beta_n


@njit(cache=True)
def _eta_last_two(n, alpha):
    """(eta_{n-1,n}(alpha), eta_{n,n}(alpha)) by forward iteration."""
    expo = (n - 1.0) / n
    lead = n / (n - 1.0)
    inc = alpha / (n - 1.0)
    w = inc
    prev = w
    for _ in range(n):
        prev = w
        if w > 0.0:
            w = lead * math.exp(expo * math.log(w)) + inc
        else:
            w = inc
    return prev, w


@njit(cache=True)
def _eta(j, n, alpha):
    expo = (n - 1.0) / n
    lead = n / (n - 1.0)
    inc = alpha / (n - 1.0)
    w = inc
    for _ in range(j):
        if w > 0.0:
            w = lead * math.exp(expo * math.log(w)) + inc
        else:
            w = inc
    return w


def _check_n(n: int):
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")


def phi(n: int, w: float, x: float) -> float:
    """phi_n(w, x) = (n/(n-1)) w^{(n-1)/n} + x/(n-1)."""
    _check_n(n)
    if w < 0 or x < 0:
        raise ValueError(f"phi needs w, x >= 0, got w={w}, x={x}")
    if w == 0:
        return x / (n - 1)
    return (n / (n - 1)) * math.exp(((n - 1) / n) * math.log(w)) + x / (n - 1)


def eta(j: int, n: int, alpha: float) -> float:
    """
    eta_{j,n}(alpha), evaluated iteratively.

    Args:
        j: Number of phi applications after the base case (j >= 0)
        n: Number of observations (n >= 2)
        alpha: Nonnegative argument

    Returns:
        The iterate eta_{j,n}(alpha)
    """
    _check_n(n)
    if int(j) != j or j < 0:
        raise ValueError(f"j must be a nonnegative integer, got {j}")
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    return float(_eta(int(j), int(n), float(alpha)))


@lru_cache(maxsize=None)
def solve_alpha_n(n: int, tol: float = BISECTION_TOLERANCE) -> float:
    """The unique alpha_n in (0, 1) with eta_{n-1,n}(alpha_n) = 1."""
    _check_n(n)
    n = int(n)
    root, width = bisect(lambda a: _eta_last_two(n, a)[0] - 1.0, 0.0, 1.0, tol, BISECTION_MAX_ITER)
    logger.info(f"alpha_{n} = {root:.12f} (bracket {width:.1e})")
    return root


@lru_cache(maxsize=None)
def solve_beta_n(n: int, tol: float = BISECTION_TOLERANCE) -> float:
    """The unique beta_n in (0, 1) with (n - 1)[eta_{n,n} - eta_{n-1,n}](beta_n) = 1."""
    _check_n(n)
    n = int(n)

    def gap(b: float) -> float:
        before, last = _eta_last_two(n, b)
        return (n - 1) * (last - before) - 1.0

    root, width = bisect(gap, 0.0, 1.0, tol, BISECTION_MAX_ITER)
    logger.info(f"beta_{n} = {root:.12f} (bracket {width:.1e})")
    return root


def hk_constants(n: int, tol: float = BISECTION_TOLERANCE) -> HKConstants:
    return HKConstants(n=int(n), alpha_n=solve_alpha_n(int(n), tol), beta_n=solve_beta_n(int(n), tol), tol=tol)


def constants_table(ns: Iterable[int], tol: float = BISECTION_TOLERANCE) -> List[HKConstants]:
    """Hill-Kertz constants for each n, in the given order."""
    return [hk_constants(n, tol) for n in ns]


def _alpha_zero_integrand(alpha: float):
    def integrand(y: float) -> float:
        if y == 0.0:
            return 1.0 / alpha
        return 1.0 / (y - y * math.log(y) + alpha)
    return integrand


def alpha_zero_integral(alpha: float, tol: float = QUADRATURE_TOLERANCE) -> float:
    """Integral over [0, 1] of 1 / (y - y log y + alpha)."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    value, _ = adaptive_simpson(_alpha_zero_integrand(alpha), 0.0, 1.0, tol)
    return value


@lru_cache(maxsize=None)
def alpha_zero(tol: float = BISECTION_TOLERANCE) -> float:
    """alpha_0, the limit of alpha_n: the alpha at which alpha_zero_integral equals 1."""
    # the integral is decreasing in alpha; it exceeds 1 at 1e-3 and is below 1 at 1
    root, width = bisect(lambda a: 1.0 - alpha_zero_integral(a), 1e-3, 1.0, tol, BISECTION_MAX_ITER)
    logger.info(f"alpha_0 = {root:.12f} (bracket {width:.1e})")
    return root


def extremal_zero_atom(n: int, kind: str = RATIO) -> float:
    """
    Atom at zero of the discrete extremal law for n observations.

    (eta_{0,n}(alpha_n))^{1/n} = (alpha_n/(n-1))^{1/n} for the ratio
    constant, the same with beta_n for the difference constant.
    """
    _check_n(n)
    if kind == RATIO:
        root = solve_alpha_n(int(n))
    elif kind == DIFFERENCE:
        root = solve_beta_n(int(n))
    else:
        raise ValueError(f"Unknown constant kind '{kind}'; expected '{RATIO}' or '{DIFFERENCE}'")
    return (root / (n - 1)) ** (1.0 / n)


def constants_rows(ns: Iterable[int], tol: float = BISECTION_TOLERANCE) -> Tuple[List[HKConstants], float]:
    """Table rows plus alpha_0, as emitted by the constants command."""
    rows = constants_table(ns, tol)
    return rows, alpha_zero()

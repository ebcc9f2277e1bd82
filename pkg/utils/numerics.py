"""
Root finding and quadrature shared by the numerical engines.
"""
from typing import Callable, Tuple
import logging
import math

from config import (
    BISECTION_TOLERANCE,
    BISECTION_MAX_ITER,
    QUADRATURE_TOLERANCE,
    QUADRATURE_MAX_DEPTH,
)

logger = logging.getLogger(__name__)


class ConvergenceError(RuntimeError):
    """Raised when an iterative method exhausts its budget."""


def bisect(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = BISECTION_TOLERANCE,
    max_iter: int = BISECTION_MAX_ITER,
) -> Tuple[float, float]:
    """
    Find a root of func on [lo, hi] by interval halving.

    Only a sign change is required; func need not be differentiable.

    Args:
        func: Continuous function with func(lo), func(hi) of opposite sign
        lo: Left end of the bracket
        hi: Right end of the bracket
        tol: Target bracket width
        max_iter: Maximum number of halvings

    Returns:
        Tuple of (root estimate, achieved bracket width)

    Raises:
        ValueError: If the bracket is invalid or has no sign change
        ConvergenceError: If the bracket is still wider than tol after max_iter steps
    """
    if not lo < hi:
        raise ValueError(f"Invalid bracket [{lo}, {hi}]")
    if tol <= 0:
        raise ValueError(f"Tolerance must be positive, got {tol}")

    f_lo = func(lo)
    f_hi = func(hi)
    if f_lo == 0:
        return lo, 0.0
    if f_hi == 0:
        return hi, 0.0
    if (f_lo < 0) == (f_hi < 0):
        raise ValueError(f"No sign change on [{lo}, {hi}]: f={f_lo}, {f_hi}")

    for _ in range(max_iter):
        width = hi - lo
        mid = 0.5 * (lo + hi)
        if width <= tol or mid <= lo or mid >= hi:
            # mid collapsing onto an endpoint means float resolution is reached
            return mid, width

        f_mid = func(mid)
        if f_mid == 0:
            return mid, 0.0
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid

    if hi - lo <= tol:
        return 0.5 * (lo + hi), hi - lo
    raise ConvergenceError(
        f"Bisection did not reach width {tol} in {max_iter} steps (width {hi - lo})"
    )


def adaptive_simpson(
    func: Callable[[float], float],
    a: float,
    b: float,
    tol: float = QUADRATURE_TOLERANCE,
    max_depth: int = QUADRATURE_MAX_DEPTH,
) -> Tuple[float, float]:
    """
    Adaptive Simpson integration with interval halving.

    Args:
        func: Integrand, finite on [a, b]
        a: Lower limit
        b: Upper limit
        tol: Absolute error target
        max_depth: Maximum subdivision depth

    Returns:
        Tuple of (integral, error estimate)

    Raises:
        ConvergenceError: If the integrand is non-finite or a panel at max_depth
            still misses the overall tolerance
    """
    if a == b:
        return 0.0, 0.0
    if a > b:
        value, error = adaptive_simpson(func, b, a, tol, max_depth)
        return -value, error

    def evaluate(x: float) -> float:
        fx = func(x)
        if not math.isfinite(fx):
            raise ConvergenceError(f"Integrand not finite at x={x}: {fx}")
        return fx

    def simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 3.0 * (fa + 4.0 * fm + fb)

    def refine(lo, hi, f_lo, f_mid, f_hi, whole, depth, panel_tol):
        mid = 0.5 * (lo + hi)
        h = 0.5 * (hi - lo)
        f_lm = evaluate(0.5 * (lo + mid))
        f_rm = evaluate(0.5 * (mid + hi))
        left = simpson(f_lo, f_lm, f_mid, 0.5 * h)
        right = simpson(f_mid, f_rm, f_hi, 0.5 * h)
        error = (left + right - whole) / 15.0

        if abs(error) <= panel_tol:
            return left + right + error, abs(error)
        if depth >= max_depth:
            if abs(error) > tol:
                raise ConvergenceError(
                    f"Quadrature panel [{lo}, {hi}] still has error {error:.3e} at depth {depth}"
                )
            return left + right + error, abs(error)

        left_value, left_error = refine(lo, mid, f_lo, f_lm, f_mid, left, depth + 1, 0.5 * panel_tol)
        right_value, right_error = refine(mid, hi, f_mid, f_rm, f_hi, right, depth + 1, 0.5 * panel_tol)
        return left_value + right_value, left_error + right_error

    f_a = evaluate(a)
    f_b = evaluate(b)
    f_m = evaluate(0.5 * (a + b))
    whole = simpson(f_a, f_m, f_b, 0.5 * (b - a))
    value, error = refine(a, b, f_a, f_m, f_b, whole, 0, tol)
    logger.debug(f"adaptive_simpson on [{a}, {b}]: {value} (error {error:.2e})")
    return value, error

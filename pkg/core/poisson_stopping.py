"""
Exact values under the unit-rate Poisson arrival model.

For a finite-support law the optimal stopping value V(t) is piecewise
exponential: on [t_{k-1}*, t_k*] it equals
E_k - (E_k - a_{k-1}) exp(-r_k (t - t_{k-1}*)), where t_k* is the remaining
time below which atom a_k is accepted. The prophet value M(t) is the
expected maximum of the observations arriving by time t.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Tuple, Union
import logging
import math

import numpy as np
from scipy.integrate import solve_ivp

from config import ODE_ABS_TOLERANCE
from .distributions import FiniteDist, TailStats, tail_stats

logger = logging.getLogger(__name__)

# Relative slack when comparing an offer with V(remaining); ties are accepted.
TIE_TOLERANCE = 1e-12

ExcessFunction = Callable[[float], float]


@dataclass(frozen=True)
class Segment:
    """Parameters of V on one interval [t_{k-1}*, t_k*]."""

    etail: float  # E_k
    start_value: float  # a_{k-1}
    rate: float  # r_k


@dataclass(frozen=True)
class ValueProfile:
    """
    Critical times and per-segment parameters giving V(t) for all t >= 0.

    tstar holds t_0* = 0, t_1*, ..., t_{n-1}* followed by the +inf sentinel
    t_n*; segments[k - 1] describes V on [t_{k-1}*, t_k*].
    """

    dist: FiniteDist
    tstar: Tuple[float, ...]
    segments: Tuple[Segment, ...]

    def __post_init__(self):
        if len(self.tstar) != len(self.segments) + 1:
            raise ValueError("tstar must have one more entry than segments")
        if any(b < a for a, b in zip(self.tstar, self.tstar[1:])):
            raise ValueError(f"Critical times must be nondecreasing: {self.tstar}")

    @property
    def n(self) -> int:
        return len(self.segments)

    @property
    def critical_times(self) -> Tuple[float, ...]:
        """t_1*, ..., t_{n-1}* (empty for a point mass)."""
        return self.tstar[1:-1]

    @cached_property
    def _tstar_array(self) -> np.ndarray:
        return np.asarray(self.tstar[:-1], dtype=float)

    @cached_property
    def _segment_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (
            np.array([s.etail for s in self.segments]),
            np.array([s.start_value for s in self.segments]),
            np.array([s.rate for s in self.segments]),
        )

    def segment_value(self, k: int, t: float) -> float:
        """V_k(t) for segment k (1-based), valid for t >= t_{k-1}*."""
        seg = self.segments[k - 1]
        elapsed = t - self.tstar[k - 1]
        return seg.start_value - (seg.etail - seg.start_value) * math.expm1(-seg.rate * elapsed)

    def segment_index(self, t: float) -> int:
        """The k with t_{k-1}* <= t <= t_k* (the later segment at a boundary)."""
        k = int(np.searchsorted(self._tstar_array, t, side='right'))
        return min(max(k, 1), self.n)


def critical_times(stats: TailStats, dist: FiniteDist = None) -> ValueProfile:
    """
    Build the ValueProfile from tail statistics.

    t_k* = t_{k-1}* + (1/r_k) log(mu_{k-1}/mu_k) for k = 1..n-1, with t_0* = 0.

    Args:
        stats: Tail statistics of the law
        dist: The law itself, kept on the profile (rebuilt from stats.levels if omitted)

    Returns:
        The ValueProfile
    """
    n = stats.n
    levels = stats.levels
    if dist is None:
        from .distributions import make_finite_dist
        probs = [stats.r[k] - (stats.r[k + 1] if k + 1 < n else 0.0) for k in range(n)]
        dist = make_finite_dist(levels[1:], probs, observation=False)

    tstar = [0.0]
    for k in range(1, n):
        mu_prev, mu_k, r_k = stats.mu[k - 1], stats.mu[k], stats.r[k - 1]
        if mu_k <= 0:
            raise ValueError(f"mu_{k} = {mu_k} must be positive below the top atom")
        # log(mu_{k-1}/mu_k) with mu_{k-1} - mu_k = r_k (a_k - a_{k-1})
        step = math.log1p((mu_prev - mu_k) / mu_k) / r_k
        tstar.append(tstar[-1] + step)
    tstar.append(math.inf)

    segments = tuple(
        Segment(etail=stats.etail[k - 1], start_value=levels[k - 1], rate=stats.r[k - 1])
        for k in range(1, n + 1)
    )
    return ValueProfile(dist=dist, tstar=tuple(tstar), segments=segments)


def value_profile(d: FiniteDist) -> ValueProfile:
    """Critical-time profile of a law."""
    return critical_times(tail_stats(d), d)


def _check_horizon(t: float):
    if t < 0 or math.isnan(t):
        raise ValueError(f"Horizon must be nonnegative, got {t}")


def optimal_value(profile: ValueProfile, t: float) -> float:
    """V(t): the optimal expected accepted value with time t remaining."""
    _check_horizon(t)
    if t == 0:
        return 0.0
    return profile.segment_value(profile.segment_index(t), t)


def value_curve(profile: ValueProfile, ts) -> np.ndarray:
    """Vectorized optimal_value over an array of horizons."""
    ts = np.asarray(ts, dtype=float)
    if np.any(ts < 0):
        raise ValueError("Horizons must be nonnegative")
    k = np.searchsorted(profile._tstar_array, ts, side='right')
    idx = np.clip(k, 1, profile.n) - 1
    etail, start, rate = profile._segment_arrays
    elapsed = ts - profile._tstar_array[idx]
    values = start[idx] - (etail[idx] - start[idx]) * np.expm1(-rate[idx] * elapsed)
    return np.where(ts == 0, 0.0, values)


def expected_max(d: FiniteDist, t: float) -> float:
    """M(t) = sum_i (a_i - a_{i-1})(1 - exp(-r_i t)), a_0 = 0."""
    _check_horizon(t)
    stats = d.stats
    levels = stats.levels
    return math.fsum(
        -(levels[i + 1] - levels[i]) * math.expm1(-stats.r[i] * t) for i in range(d.n)
    )


def expected_excess_max(d: FiniteDist, s: float, c: float) -> float:
    """
    E(X_s^* - c)^+ where X_s^* is the maximum of the arrivals by time s.

    Sum over atoms a_i > c of (a_i - max(a_{i-1}, c)) (1 - exp(-s r_i)).
    """
    _check_horizon(s)
    if c < 0:
        raise ValueError(f"Threshold must be nonnegative, got {c}")
    stats = d.stats
    levels = stats.levels
    return math.fsum(
        -(levels[i + 1] - max(levels[i], c)) * math.expm1(-stats.r[i] * s)
        for i in range(d.n)
        if levels[i + 1] > c
    )


def prophet_cdf(d: FiniteDist, t: float, z: float) -> float:
    """P(X_t^* <= z) = exp(-t P(X > z)) for z >= 0."""
    _check_horizon(t)
    if z < 0:
        return 0.0
    above = math.fsum(p for a, p in zip(d.atoms, d.probs) if a > z)
    return math.exp(-t * above)


def _value_ode_segments(d: FiniteDist, t: float) -> float:
    # On [a_k, a_{k+1}) the mean excess is A - B v, so v' = A - B v is solved
    # exactly; the solution crosses a_{k+1} after (1/B) log((E - v)/(E - a_{k+1})).
    stats = d.stats
    levels = stats.levels
    v = 0.0
    elapsed = 0.0
    while True:
        k = int(np.searchsorted(levels, v, side='right')) - 1
        if k >= d.n:
            return v
        rate = stats.r[k]
        target = levels[k] + stats.mu[k] / rate  # equilibrium A/B = E_{k+1}
        remaining = t - elapsed
        upper = levels[k + 1]
        if k + 1 < d.n and target > upper:
            hit = math.log((target - v) / (target - upper)) / rate
            if hit < remaining:
                v = upper
                elapsed += hit
                continue
        return target - (target - v) * math.exp(-rate * remaining)


def value_ode(
    excess: Union[FiniteDist, ExcessFunction],
    t: float,
    abs_tol: float = ODE_ABS_TOLERANCE,
) -> float:
    """
    V(t) by integrating V' = E(X - V)^+, V(0) = 0.

    A FiniteDist is integrated segment by segment in closed form (the mean
    excess is linear between atoms). Any other callable is integrated with
    an adaptive Runge-Kutta 4(5) scheme to abs_tol.

    Args:
        excess: A FiniteDist, or a nonincreasing convex mean-excess function of the threshold
        t: Horizon
        abs_tol: Absolute tolerance for the general integrator

    Returns:
        V(t)
    """
    _check_horizon(t)
    if t == 0:
        return 0.0
    if isinstance(excess, FiniteDist):
        return _value_ode_segments(excess, t)

    def rhs(_, v):
        value = excess(max(float(v[0]), 0.0))
        if not math.isfinite(value):
            raise ValueError(f"Mean-excess callback returned {value} at v={v[0]}")
        return [value]

    solution = solve_ivp(rhs, (0.0, t), [0.0], method='RK45', atol=abs_tol, rtol=abs_tol)
    if not solution.success:
        raise ValueError(f"ODE integration failed: {solution.message}")
    logger.debug(f"value_ode: {solution.nfev} evaluations to reach t={t}")
    return float(solution.y[0, -1])


def optimal_accept(profile: ValueProfile, value: float, remaining: float) -> bool:
    """Whether the optimal rule accepts an offer of this value with time remaining (ties accept)."""
    _check_horizon(remaining)
    return value >= optimal_value(profile, remaining) * (1.0 - TIE_TOLERANCE)


def accept_times(profile: ValueProfile) -> Tuple[float, ...]:
    """Per atom, the largest remaining time at which it is accepted (+inf for the top atom)."""
    return profile.tstar[1:]

"""
Bound curves, sharpness families and the inequality sweep.

Long range: M(t) <= (1 + alpha_0) V(t), and for [0, 1]-valued X
M(t) - V(t) <= b_n + (1 - e^{-t})[1 - n(1 - e^{-t/n})/t] for every n >= 2.
Short range: M(t)/V(t) < f(t) = 2 - (1 - e^{-t})/t, with the two- and
three-point families of g(t) showing how close f is to sharp, and the
difference analogues f-hat / g-hat.
"""
from dataclasses import dataclass, field, asdict
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import json
import logging
import math

import numpy as np

from config import (
    BOUND_SLACK,
    HK_LIMIT_N,
    SWEEP_ATOM_RANGE,
    SWEEP_HORIZONS,
    SWEEP_INSTANCES,
    SWEEP_MAX_ATOMS,
    SWEEP_MIN_ATOMS,
)
from utils.numerics import bisect
from .distributions import FiniteDist, make_finite_dist, mean_excess, random_finite_dist
from .hill_kertz import RATIO, alpha_zero, extremal_zero_atom, solve_alpha_n, solve_beta_n
from .poisson_stopping import expected_excess_max, expected_max, optimal_value, value_profile
from .thresholds import (
    best_threshold,
    difference_bound,
    minimax_adversary,
    minimax_guarantee,
    minimax_threshold,
    threshold_gap,
    UnreachableThresholdError,
)

logger = logging.getLogger(__name__)


class BoundViolationError(AssertionError):
    """A proven inequality failed on a generated instance."""

    def __init__(self, report: 'BoundReport'):
        self.report = report
        super().__init__(
            f"Bound '{report.violations[0]}' violated at t={report.t} for {report.instance}"
        )


@dataclass
class BoundReport:
    """Values and bound margins for one (law, horizon) pair."""

    instance: Dict
    t: float
    M: float
    V: float
    W_best: float
    bounds: Dict[str, float] = field(default_factory=dict)
    margins: Dict[str, float] = field(default_factory=dict)
    violations: List[str] = field(default_factory=list)

    @property
    def violated(self) -> bool:
        return bool(self.violations)

    def check(self, name: str, achieved: float, bound: float, strict: bool = False):
        """Record bound - achieved; strict bounds must also keep a positive margin."""
        margin = bound - achieved
        self.bounds[name] = bound
        self.margins[name] = margin
        if margin < -BOUND_SLACK or (strict and margin <= 0 and achieved > 0):
            self.violations.append(name)

    def to_json(self) -> Dict:
        payload = asdict(self)
        payload['violated'] = self.violated
        return payload


def _check_t(t: float):
    if not t > 0:
        raise ValueError(f"Horizon must be positive, got {t}")


# Long-range constants

def ratio_bound_long() -> float:
    """1 + alpha_0."""
    return 1.0 + alpha_zero()


def ratio_bound_precise(t: float, n: int) -> float:
    """a_n (t/n) / (1 - e^{-t/n}); M(t) < this times V(t) for every n >= 2."""
    _check_t(t)
    delta = t / n
    return (1.0 + solve_alpha_n(int(n))) * delta / -math.expm1(-delta)


def diff_bound_precise(t: float, n: int, upper: float = 1.0) -> float:
    """
    b_n + (1 - e^{-t})[1 - n(1 - e^{-t/n})/t], scaled by the upper end of an
    [a, b] support with a >= 0.
    """
    _check_t(t)
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    if not upper > 0:
        raise ValueError(f"Upper support end must be positive, got {upper}")
    correction = -math.expm1(-t) * (1.0 + n * math.expm1(-t / n) / t)
    return upper * (solve_beta_n(int(n)) + correction)


def sharpness_threshold(n: int, kind: str = RATIO) -> float:
    """
    log((n - 1)/alpha_n) (ratio) or log((n - 1)/beta_n) (difference): the
    horizon beyond which the discrete extremal construction embeds.
    """
    # -n log(zero atom) = log((n - 1)/root)
    return -n * math.log(extremal_zero_atom(n, kind))


# Short-range curves

def short_ratio_f(t: float) -> float:
    """f(t) = 2 - (1 - e^{-t})/t."""
    _check_t(t)
    return 2.0 + math.expm1(-t) / t


def short_ratio_g(t: float) -> float:
    """g(t) = (2 - e^{-t}) / (2 - log(1 + t)/t)."""
    _check_t(t)
    return (2.0 - math.exp(-t)) / (2.0 - math.log1p(t) / t)


def hat_f(t: float) -> float:
    """beta(t)(1 - e^{-t}) / (beta(t) + 1 - e^{-t})."""
    return difference_bound(0.0, 1.0, t)


def hat_g(t: float) -> float:
    """M(t) - V(t) for the law with P(X = 1) = 1/(e^t + 1), else (1 - e^{-t})/2."""
    _check_t(t)
    q = -math.expm1(-t)
    return 0.5 * ((1.0 + math.exp(-t)) * -math.expm1(-t / (math.exp(t) + 1.0)) - math.exp(-t) * q)


def crossover_time() -> float:
    """The t at which f(t) = 1 + alpha_0."""
    target = ratio_bound_long()
    root, _ = bisect(lambda t: short_ratio_f(t) - target, 1e-6, 50.0)
    return root


CURVES = {
    'f': short_ratio_f,
    'g': short_ratio_g,
    'fhat': hat_f,
    'ghat': hat_g,
    'long': lambda t: ratio_bound_long(),
    'min_f_long': lambda t: min(short_ratio_f(t), ratio_bound_long()),
}


def curve_values(names: Sequence[str], ts: Iterable[float]) -> List[Dict[str, float]]:
    """One row per t with the requested curves."""
    unknown = [n for n in names if n not in CURVES]
    if unknown:
        raise ValueError(f"Unknown curves {unknown}; choose from {sorted(CURVES)}")
    return [{'t': t, **{name: CURVES[name](t) for name in names}} for t in ts]


def short_range_rows(ts: Iterable[float]) -> List[Dict[str, float]]:
    """Rows (t, f, g, min(f, 1 + alpha_0))."""
    return curve_values(['f', 'g', 'min_f_long'], ts)


# Sharpness families

def sharp_two_point(t: float, p: float) -> Tuple[FiniteDist, float]:
    """
    The two-point law {eps, 1} with P(X = 1) = p for which both thresholds tie,
    and its exact ratio M / sup_c W_c = 1 + eps (e^{-tp} - e^{-t}) / (1 - e^{-tp}).
    """
    _check_t(t)
    if not 0 < p < 1:
        raise ValueError(f"p must be in (0, 1), got {p}")
    q = -math.expm1(-t)
    qp = -math.expm1(-t * p)
    eps = (qp - p * q) / ((1.0 - p) * q)
    ratio = 1.0 + eps * (math.exp(-t * p) - math.exp(-t)) / qp
    return make_finite_dist([eps, 1.0], [1.0 - p, p]), ratio


def beta_extremal_dist(t: float) -> FiniteDist:
    """P(X = 1) = 1/(e^t + 1), P(X = (1 - e^{-t})/2) otherwise; its t_1* equals t."""
    _check_t(t)
    top = 1.0 / (math.exp(t) + 1.0)
    return make_finite_dist([-0.5 * math.expm1(-t), 1.0], [1.0 - top, top])


def two_atom_family_dist(t: float, a: float, K: float) -> FiniteDist:
    """Atoms (1, K) with P(X = K) = a/(tK)."""
    _check_t(t)
    r2 = a / (t * K)
    if not (K > 1 and 0 < r2 < 1):
        raise ValueError(f"Need K > 1 and 0 < a/(tK) < 1, got K={K}, a/(tK)={r2}")
    return make_finite_dist([1.0, K], [1.0 - r2, r2])


def three_atom_family_dist(t: float, a: float, b: float, K: float) -> FiniteDist:
    """Atoms (1, K, K^2) with r_2 = a/t and r_3 = b/(tK)."""
    _check_t(t)
    r2 = a / t
    r3 = b / (t * K)
    if not (K > 1 and 0 < r3 < r2 < 1):
        raise ValueError(f"Need K > 1 and 0 < b/(tK) < a/t < 1, got r2={r2}, r3={r3}")
    return make_finite_dist([1.0, K, K * K], [1.0 - r2, r2 - r3, r3])


def family_ratio(d: FiniteDist, t: float) -> float:
    """M(t)/V(t) from the exact engine."""
    return expected_max(d, t) / optimal_value(value_profile(d), t)


def two_atom_family_limit(t: float, a: float) -> float:
    """(a + 1 - e^{-t}) / (a + 1 - (a/t) log(1 + t/a)); needs log(1 + t/a) < t."""
    _check_t(t)
    if not a > 0:
        raise ValueError(f"a must be positive, got {a}")
    if not math.log1p(t / a) < t:
        raise ValueError(f"Requires log(1 + t/a) < t, violated for t={t}, a={a}")
    return (a + 1.0 - math.exp(-t)) / (a + 1.0 - (a / t) * math.log1p(t / a))


def three_atom_family_limit(a: float, b: float, t: Optional[float] = None) -> float:
    """
    (1 + b - e^{-a}) / (1 + b - (b/a) log(1 + a/b)).

    Needs log(1 + a/b) < a, and a < t when a horizon is given; the limit
    is then the same for every such t.
    """
    if not (a > 0 and b > 0):
        raise ValueError(f"a and b must be positive, got a={a}, b={b}")
    if not math.log1p(a / b) < a:
        raise ValueError(f"Requires log(1 + a/b) < a, violated for a={a}, b={b}")
    if t is not None and not a < t:
        raise ValueError(f"Requires a < t, got a={a}, t={t}")
    return (1.0 + b - math.exp(-a)) / (1.0 + b - (b / a) * math.log1p(a / b))


def two_point_search(t: float, grid: int = 60) -> Tuple[FiniteDist, float]:
    """
    Largest M/V over two-valued laws {1, K}, on a log grid of K and P(X = K).

    An experiment only: the grid maximum carries no optimality claim.
    """
    _check_t(t)
    best_dist, best_ratio = None, 0.0
    for K in np.geomspace(1.01, 1e4, grid):
        for p in np.geomspace(1e-6, 0.99, grid):
            d = make_finite_dist([1.0, float(K)], [1.0 - float(p), float(p)])
            ratio = family_ratio(d, t)
            if ratio > best_ratio:
                best_dist, best_ratio = d, ratio
    logger.info(f"two_point_search(t={t}): best ratio {best_ratio:.6f} at {best_dist}")
    return best_dist, best_ratio


# Sweep

def _gap(d: FiniteDist, c: float, t: float) -> float:
    # an unreachable threshold never stops, so W_c = 0
    try:
        return threshold_gap(d, c, t)
    except UnreachableThresholdError:
        return expected_max(d, t)


def _prob_above(d: FiniteDist, c: float) -> float:
    return math.fsum(p for a, p in zip(d.atoms, d.probs) if a > c)


def evaluate_instance(d: FiniteDist, t: float, precise_n: int = HK_LIMIT_N) -> BoundReport:
    """Evaluate every proven inequality for one law and horizon."""
    profile = value_profile(d)
    M = expected_max(d, t)
    V = optimal_value(profile, t)
    _, W = best_threshold(d, t)
    report = BoundReport(instance=d.to_json(), t=t, M=M, V=V, W_best=W)

    a, b = d.min_atom, d.max_atom
    f = short_ratio_f(t)
    report.check('V<=M', V, M)
    report.check('W<=V', W, V)
    report.check('ratio_long', M, ratio_bound_long() * V)
    report.check('ratio_precise_n100', M, ratio_bound_precise(t, 100) * V)
    report.check('ratio_short', M / V, f, strict=True)
    report.check('threshold_ratio', M / W, f, strict=True)
    report.check('difference_precise', M - V, diff_bound_precise(t, precise_n, upper=b))

    if b > a:
        c_star = minimax_threshold(a, b, t)
        guarantee = minimax_guarantee(a, b, t)
        report.check('minimax_threshold', _gap(d, c_star, t), guarantee)
        report.check('difference_short', M - V, difference_bound(a, b, t))
        weakest_adversary = min(
            _gap(minimax_adversary(a, b, t, c, delta=1e-9 * (c - a) if c > a else 1e-9), c, t)
            for c in (0.0, 0.5 * c_star, c_star, 0.5 * (c_star + b))
        )
        # every threshold has an adversary that reaches the guarantee
        report.check('minimax_attained', guarantee, weakest_adversary + 1e-6 * b)

    for c in _excess_thresholds(d):
        rhs = t * mean_excess(d, c)
        lhs = expected_excess_max(d, t, c)
        report.check(f'excess_max_c={c:.6g}', lhs, rhs, strict=_prob_above(d, c) > 0)
    return report


def _excess_thresholds(d: FiniteDist) -> List[float]:
    atoms = list(d.atoms)
    mids = [0.5 * (x + y) for x, y in zip(atoms, atoms[1:])]
    return sorted(set([0.0] + atoms + mids))


def verify_sweep(
    count: int = SWEEP_INSTANCES,
    seed: int = 0,
    horizons: Sequence[float] = SWEEP_HORIZONS,
    unit_interval: bool = False,
    raise_on_violation: bool = True,
) -> List[BoundReport]:
    """
    Check every inequality on random laws.

    Laws have 2-8 atoms, log-uniform on [1e-3, 1e3] (or uniform on [0, 1]
    with unit_interval) and Dirichlet weights. Reports are ordered by
    instance index, then horizon.

    Raises:
        BoundViolationError: On the first violated inequality, when raise_on_violation
    """
    rng = np.random.default_rng(seed)
    low, high = SWEEP_ATOM_RANGE
    support = (0.0, 1.0) if unit_interval else None
    reports: List[BoundReport] = []
    for i in range(count):
        d = random_finite_dist(rng, SWEEP_MIN_ATOMS, SWEEP_MAX_ATOMS, low, high, support=support)
        if d.max_atom == 0:
            continue
        for t in horizons:
            report = evaluate_instance(d, t)
            reports.append(report)
            if report.violated:
                logger.error(f"Instance {i}: {report.violations} at t={t}: {json.dumps(report.instance)}")
                if raise_on_violation:
                    raise BoundViolationError(report)
    logger.info(f"verify_sweep: {count} instances x {len(horizons)} horizons checked")
    return reports

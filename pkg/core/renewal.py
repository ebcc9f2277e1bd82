"""
Discrete-time renewal arrivals.

Observations X_1, X_2, ... arrive at the renewal times S_k = T_1 + ... + T_k
of i.i.d. positive-integer gaps, and only arrivals with S_k <= n count.
V_n comes from backward induction over renewal indices,
gamma_j = E(X v c_j) with c_j = sum_k P(T = k, j + k <= n) gamma_{j+k};
M_n from the probability that no arrival in [1, n] reaches each atom.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple
import logging
import math

import numpy as np

from config import BOUND_SLACK, PROB_SUM_TOLERANCE
from .distributions import FiniteDist, make_finite_dist, mean_excess, mix_with_zero, random_finite_dist
from .hill_kertz import RATIO, extremal_zero_atom

logger = logging.getLogger(__name__)

# Largest number of (gap, value) branches the exhaustive oracle will walk.
BRUTE_FORCE_MAX_OUTCOMES = 10_000_000


@dataclass(frozen=True)
class RenewalDist:
    """Law of the inter-arrival gap T on the positive integers."""

    support: Tuple[int, ...]
    probs: Tuple[float, ...]

    def __post_init__(self):
        if not self.support or len(self.support) != len(self.probs):
            raise ValueError("Need equal, non-zero numbers of support points and probabilities")
        if any(int(k) != k or k < 1 for k in self.support):
            raise ValueError(f"Gaps must be positive integers, got {self.support}")
        if any(b <= a for a, b in zip(self.support, self.support[1:])):
            raise ValueError(f"Support must be strictly ascending, got {self.support}")
        if any(not p > 0 for p in self.probs):
            raise ValueError(f"Probabilities must be positive, got {self.probs}")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > PROB_SUM_TOLERANCE:
            raise ValueError(f"Probabilities sum to {total}; expected 1 within {PROB_SUM_TOLERANCE}")

    @classmethod
    def from_weights(cls, weights: Dict[int, float]) -> 'RenewalDist':
        """Build from {gap: weight}, dropping zero weights and normalizing."""
        items = sorted((int(k), float(w)) for k, w in weights.items() if w > 0)
        if not items:
            raise ValueError("Total weight must be positive")
        total = math.fsum(w for _, w in items)
        return cls(support=tuple(k for k, _ in items), probs=tuple(w / total for _, w in items))

    @classmethod
    def constant(cls, k: int = 1) -> 'RenewalDist':
        return cls(support=(int(k),), probs=(1.0,))

    @classmethod
    def geometric(cls, p: float, horizon: int) -> 'RenewalDist':
        """
        P(T = k) = (1 - p)^{k-1} p for k <= horizon; the remaining
        (1 - p)^horizon sits at horizon + 1, past any index the horizon reaches.
        """
        if not 0 < p <= 1:
            raise ValueError(f"p must be in (0, 1], got {p}")
        weights = {k: (1.0 - p) ** (k - 1) * p for k in range(1, horizon + 1)}
        weights[horizon + 1] = (1.0 - p) ** horizon
        return cls.from_weights(weights)

    @classmethod
    def two_point(cls, n: int, p: float) -> 'RenewalDist':
        """P(T = 1) = p, P(T = n) = 1 - p."""
        if n < 2:
            raise ValueError(f"n must be >= 2, got {n}")
        if not 0 < p < 1:
            raise ValueError(f"p must be in (0, 1), got {p}")
        return cls(support=(1, int(n)), probs=(p, 1.0 - p))

    def items(self) -> List[Tuple[int, float]]:
        return list(zip(self.support, self.probs))

    def to_spec(self) -> str:
        return ",".join(f"{k}:{p:.17g}" for k, p in self.items())


def parse_renewal_spec(text: str) -> RenewalDist:
    """Parse "k1:p1,k2:p2,..."."""
    weights: Dict[int, float] = {}
    for entry in text.split(','):
        entry = entry.strip()
        if not entry:
            continue
        k, sep, p = entry.partition(':')
        if not sep:
            raise ValueError(f"Malformed gap entry '{entry}'; expected 'gap:prob'")
        try:
            gap = float(k)
            prob = float(p)
        except ValueError as e:
            raise ValueError(f"Malformed number in gap entry '{entry}'") from e
        if gap != int(gap):
            raise ValueError(f"Gaps must be integers, got {k}")
        weights[int(gap)] = weights.get(int(gap), 0.0) + prob
    if not weights:
        raise ValueError(f"Empty gap spec '{text}'")
    support = tuple(sorted(weights))
    return RenewalDist(support=support, probs=tuple(weights[k] for k in support))


@dataclass(frozen=True)
class GammaTable:
    """gamma_j and continuation values c_j for renewal indices j = 1..n."""

    n: int
    gamma: Tuple[float, ...]
    continuation: Tuple[float, ...]

    def at(self, j: int) -> float:
        return self.gamma[j - 1]


def _check_n(n: int):
    if int(n) != n or n < 1:
        raise ValueError(f"Horizon must be a positive integer, got {n}")


def gamma_table(T: RenewalDist, d: FiniteDist, n: int) -> GammaTable:
    """Backward induction from j = n down to 1."""
    _check_n(n)
    gamma = [0.0] * (n + 1)
    cont = [0.0] * (n + 1)
    gaps = T.items()
    for j in range(n, 0, -1):
        c = math.fsum(p * gamma[j + k] for k, p in gaps if j + k <= n)
        cont[j] = c
        gamma[j] = c + mean_excess(d, c)
    return GammaTable(n=n, gamma=tuple(gamma[1:]), continuation=tuple(cont[1:]))


def renewal_optimal_value(T: RenewalDist, d: FiniteDist, n: int) -> float:
    """V_n = sum_k P(T = k, k <= n) gamma_k."""
    table = gamma_table(T, d, n)
    return math.fsum(p * table.at(k) for k, p in T.items() if k <= n)


def renewal_prophet_value(T: RenewalDist, d: FiniteDist, n: int) -> float:
    """
    M_n = sum_i (a_i - a_{i-1}) P(max >= a_i).

    P(no arrival in [1, n] reaches a) comes from
    q_j = F(a-) sum_k P(T = k) (q_{j+k} if j + k <= n else 1), assembled over
    the first gap, with F(a-) = P(X < a).
    """
    _check_n(n)
    probs = np.asarray(d.probs)
    below = np.concatenate([[0.0], np.cumsum(probs)[:-1]])  # P(X < a_i)
    gaps = T.items()
    q = np.ones((n + 1, d.n))
    for j in range(n, 0, -1):
        acc = np.zeros(d.n)
        for k, p in gaps:
            acc += p * (q[j + k] if j + k <= n else 1.0)
        q[j] = below * acc
    never = np.zeros(d.n)
    for k, p in gaps:
        never += p * (q[k] if k <= n else 1.0)
    levels = np.asarray(d.stats.levels)
    return math.fsum(np.diff(levels) * (1.0 - never))


def renewal_values(T: RenewalDist, d: FiniteDist, n: int) -> Tuple[float, float]:
    """(M_n, V_n)."""
    return renewal_prophet_value(T, d, n), renewal_optimal_value(T, d, n)


def iid_values(d: FiniteDist, n: int) -> Tuple[float, float]:
    """(M_n, V_n) for n i.i.d. observations: v_i = E(X v v_{i-1}), v_0 = 0."""
    _check_n(n)
    v = 0.0
    for _ in range(n):
        v = v + mean_excess(d, v)
    below = np.concatenate([[0.0], np.cumsum(np.asarray(d.probs))[:-1]])
    levels = np.asarray(d.stats.levels)
    m = math.fsum(np.diff(levels) * (1.0 - below ** n))
    return m, v


def binomial_process_values(p: float, d: FiniteDist, n: int) -> Tuple[float, float]:
    """
    (M_n, V_n) when each time 1..n is a renewal independently with
    probability p: the observations become i.i.d. with law p F + (1 - p) delta_0.
    """
    if not 0 < p <= 1:
        raise ValueError(f"p must be in (0, 1], got {p}")
    return iid_values(mix_with_zero(d, p), n)


def binomial_sharpness_p(n: int, kind: str = RATIO) -> float:
    """
    Smallest p for which the discrete extremal law embeds in the binomial
    process: its zero atom (alpha_n/(n-1))^{1/n} (or with beta_n) must be at
    least the 1 - p chance of no renewal.
    """
    return 1.0 - extremal_zero_atom(n, kind)


def _branch_count(T: RenewalDist, d: FiniteDist, n: int) -> int:
    # arrivals along any path <= n / min gap
    return (len(T.support) * d.n) ** (n // T.support[0])


def brute_force_values(T: RenewalDist, d: FiniteDist, n: int) -> Tuple[float, float]:
    """
    (M_n, V_n) by walking every (gap, value) outcome tree without memoization.

    The prophet averages the running maximum over complete histories; the
    gambler takes max(offer, expected continuation) at every node.

    Raises:
        ValueError: If the tree exceeds BRUTE_FORCE_MAX_OUTCOMES branches
    """
    _check_n(n)
    if _branch_count(T, d, n) > BRUTE_FORCE_MAX_OUTCOMES:
        raise ValueError(f"Outcome tree too large for n={n}")
    gaps = T.items()
    values = list(zip(d.atoms, d.probs))

    def prophet(j: int, best: float) -> float:
        total = 0.0
        for k, pk in gaps:
            if j + k > n:
                total += pk * best
                continue
            for x, px in values:
                total += pk * px * prophet(j + k, max(best, x))
        return total

    def continuation(j: int) -> float:
        total = 0.0
        for k, pk in gaps:
            if j + k > n:
                continue
            for x, px in values:
                total += pk * px * max(x, continuation(j + k))
        return total

    return prophet(0, 0.0), continuation(0)


# Counterexample family: T in {1, n}, X in {eps, 1}

@dataclass(frozen=True)
class CounterexampleMetrics:
    n: int
    p: float
    pi: float
    ratio: float
    difference: float


def _check_family(n: int, p: float, pi: float):
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    if not 0 < p < 1:
        raise ValueError(f"p must be in (0, 1), got {p}")
    if not 0 < pi < 1:
        raise ValueError(f"pi must be in (0, 1), got {pi}")


def counterexample_eps(p: float, pi: float) -> float:
    """eps = p pi / (1 - p(1 - pi)), the low value making p E X = eps."""
    return p * pi / (1.0 - p * (1.0 - pi))


def counterexample_instance(n: int, p: float, pi: float) -> Tuple[RenewalDist, FiniteDist]:
    """P(T = 1) = p = 1 - P(T = n); X = 1 with probability pi, else eps."""
    _check_family(n, p, pi)
    eps = counterexample_eps(p, pi)
    return RenewalDist.two_point(n, p), make_finite_dist([eps, 1.0], [1.0 - pi, pi])


def counterexample_metrics(n: int, p: float, pi: float) -> CounterexampleMetrics:
    """
    Closed forms: with s = p(1 - pi) and B = (1 - s^n)/(1 - s) - 1,
    R_n = 1 + p(1 - p) B and D_n = p(1 - p) pi B / (1 - s).
    """
    _check_family(n, p, pi)
    s = p * (1.0 - pi)
    bracket = -math.expm1(n * math.log(s)) / (1.0 - s) - 1.0
    ratio = 1.0 + p * (1.0 - p) * bracket
    difference = p * (1.0 - p) * pi * bracket / (1.0 - s)
    return CounterexampleMetrics(n=int(n), p=p, pi=pi, ratio=ratio, difference=difference)


def counterexample_limits(n: int, p: float, pi: float) -> Tuple[float, float]:
    """
    (lim_{n -> inf} D_n, lim_{pi -> 0} R_n) = (p^2(1-p)pi(1-pi)/(1-p(1-pi))^2, 1 + p^2 - p^{n+1}).
    """
    _check_family(n, p, pi)
    s = p * (1.0 - pi)
    return p * p * (1.0 - p) * pi * (1.0 - pi) / (1.0 - s) ** 2, 1.0 + p * p - p ** (n + 1)


def c_n(n: int) -> float:
    """1 + (2/(n+1))^{2/(n-1)} (n-1)/(n+1), the supremum of R_n over the family."""
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    return 1.0 + (2.0 / (n + 1)) ** (2.0 / (n - 1)) * (n - 1) / (n + 1)


def c_n_maximizer(n: int) -> float:
    """The p = (2/(n+1))^{1/(n-1)} maximizing 1 + p^2 - p^{n+1}."""
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    return (2.0 / (n + 1)) ** (1.0 / (n - 1))


def explore_counterexamples(
    ns: Iterable[int],
    ps: Sequence[float],
    pis: Sequence[float],
) -> List[CounterexampleMetrics]:
    """
    Evaluate the family over a grid, sorted by decreasing ratio.

    Exploratory: whether some renewal law exceeds ratio 2 or difference 1/4
    is not settled here.
    """
    rows = [counterexample_metrics(n, p, pi) for n in ns for p in ps for pi in pis]
    rows.sort(key=lambda r: r.ratio, reverse=True)
    if rows:
        top_diff = max(r.difference for r in rows)
        logger.info(f"explore: max ratio {rows[0].ratio:.6f}, max difference {top_diff:.6f} over {len(rows)} points")
    return rows


def random_renewal_dist(rng: np.random.Generator, max_gap: int = 5, max_points: int = 3) -> RenewalDist:
    count = int(rng.integers(1, max_points + 1))
    support = rng.choice(np.arange(1, max_gap + 1), size=count, replace=False)
    weights = rng.dirichlet(np.ones(count))
    return RenewalDist.from_weights({int(k): float(w) for k, w in zip(support, weights)})


def renewal_sweep(count: int = 1000, seed: int = 0, max_n: int = 12) -> List[Dict]:
    """
    V_n <= M_n <= 2 V_n on random gap laws, observation laws and horizons.

    Returns:
        One row per instance with M, V, the ratio and a violated flag
    """
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(count):
        T = random_renewal_dist(rng)
        d = random_finite_dist(rng)
        n = int(rng.integers(1, max_n + 1))
        m, v = renewal_values(T, d, n)
        violated = v > m + BOUND_SLACK * m or m > 2.0 * v + BOUND_SLACK * m
        if violated:
            logger.error(f"Renewal instance {i} violates V <= M <= 2V: T={T.to_spec()} X={d.to_spec()} n={n}")
        rows.append({'instance': i, 'n': n, 'T': T.to_spec(), 'dist': d.to_spec(),
                     'M': m, 'V': v, 'ratio': m / v, 'violated': violated})
    return rows

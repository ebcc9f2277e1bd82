"""
Finite-support nonnegative distributions and their elementary functionals.

Every engine in the package consumes a FiniteDist: the law of the observed
values X. The tail statistics r_k = P(X >= a_k), mu_k = E(X - a_k)^+ and
E_k = E(X | X >= a_k) are computed once per law by the backward recursion
mu_{k-1} = mu_k + r_k (a_k - a_{k-1}), with a_0 = 0.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union
import json
import logging
import math

import numpy as np

from config import MERGE_TOLERANCE, PROB_SUM_TOLERANCE

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteDist:
    """A nonnegative distribution on finitely many atoms a_1 < ... < a_n."""

    atoms: Tuple[float, ...]
    probs: Tuple[float, ...]

    def __post_init__(self):
        if len(self.atoms) == 0 or len(self.atoms) != len(self.probs):
            raise ValueError(
                f"atoms and probs must be non-empty and of equal length, got {len(self.atoms)} and {len(self.probs)}"
            )
        if self.atoms[0] < 0:
            raise ValueError(f"Atoms must be nonnegative, got {self.atoms[0]}")
        if any(b <= a for a, b in zip(self.atoms, self.atoms[1:])):
            raise ValueError(f"Atoms must be strictly ascending: {self.atoms}")
        if any(p <= 0 for p in self.probs):
            raise ValueError(f"Probabilities must be positive: {self.probs}")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"Probabilities sum to {total}, not 1")

    @property
    def n(self) -> int:
        """Number of atoms."""
        return len(self.atoms)

    @property
    def max_atom(self) -> float:
        return self.atoms[-1]

    @property
    def min_atom(self) -> float:
        return self.atoms[0]

    @cached_property
    def atom_array(self) -> np.ndarray:
        arr = np.asarray(self.atoms, dtype=float)
        arr.flags.writeable = False
        return arr

    @cached_property
    def prob_array(self) -> np.ndarray:
        arr = np.asarray(self.probs, dtype=float)
        arr.flags.writeable = False
        return arr

    @cached_property
    def cdf_array(self) -> np.ndarray:
        """P(X <= a_k) for k = 1..n, with the last entry pinned to 1."""
        cdf = np.cumsum(self.prob_array)
        cdf[-1] = 1.0
        cdf.flags.writeable = False
        return cdf

    @cached_property
    def stats(self) -> 'TailStats':
        return tail_stats(self)

    @property
    def mean(self) -> float:
        """E X."""
        return self.stats.mu[0]

    def tail_prob(self, c: float) -> float:
        """P(X >= c)."""
        return math.fsum(p for a, p in zip(self.atoms, self.probs) if a >= c)

    def cond_tail_mean(self, c: float) -> float:
        """E(X | X >= c); raises ValueError when P(X >= c) = 0."""
        r = self.tail_prob(c)
        if r <= 0:
            raise ValueError(f"P(X >= {c}) = 0, conditional mean undefined")
        return math.fsum(a * p for a, p in zip(self.atoms, self.probs) if a >= c) / r

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        """Draw values by inverse CDF from uniforms."""
        return self.values_from_uniforms(rng.random(size))

    def values_from_uniforms(self, u: np.ndarray) -> np.ndarray:
        """Map uniforms in [0, 1) to atoms through the inverse CDF."""
        idx = np.searchsorted(self.cdf_array, u, side='right')
        np.minimum(idx, self.n - 1, out=idx)
        return self.atom_array[idx]

    def to_json(self) -> Dict[str, List[float]]:
        return {'atoms': list(self.atoms), 'probs': list(self.probs)}

    def to_spec(self) -> str:
        """Inline "a1:p1,a2:p2,..." form with round-trip precision."""
        return ','.join(f"{a:.17g}:{p:.17g}" for a, p in zip(self.atoms, self.probs))

    def __str__(self) -> str:
        return f"FiniteDist({self.to_spec()})"


@dataclass(frozen=True)
class TailStats:
    """
    Tail quantities of a FiniteDist.

    levels holds a_0 = 0, a_1, ..., a_n; r and etail are indexed 1..n
    (stored 0-based); mu is indexed 0..n.
    """

    levels: Tuple[float, ...]
    r: Tuple[float, ...]
    mu: Tuple[float, ...]
    etail: Tuple[float, ...]

    def __post_init__(self):
        if self.r[0] != 1.0:
            raise ValueError(f"r_1 must equal 1, got {self.r[0]}")

    @property
    def n(self) -> int:
        return len(self.r)


def _normalize(weights: List[float]) -> List[float]:
    # Repeat until the sum is exactly 1 so that re-normalizing is a no-op.
    for _ in range(4):
        total = math.fsum(weights)
        if total == 1.0:
            break
        weights = [w / total for w in weights]
    return weights


def make_finite_dist(
    atoms: Sequence[float],
    weights: Sequence[float],
    observation: bool = True,
) -> FiniteDist:
    """
    Build a FiniteDist from atoms and nonnegative weights.

    Atoms are sorted, atoms closer than MERGE_TOLERANCE * (1 + max atom) are
    merged (keeping the smaller value), zero-weight atoms are dropped and the
    weights are normalized to probabilities.

    Args:
        atoms: Support points, each >= 0
        weights: Nonnegative weights with a positive sum
        observation: Reject the point mass at 0 (law of an observed value)

    Returns:
        The constructed FiniteDist

    Raises:
        ValueError: On empty or mismatched input, negative atoms or weights,
            zero total weight, or an all-zero observation law
    """
    atoms = [float(a) for a in atoms]
    weights = [float(w) for w in weights]
    if not atoms or len(atoms) != len(weights):
        raise ValueError(f"Need equal, non-zero numbers of atoms and weights, got {len(atoms)} and {len(weights)}")
    for a in atoms:
        if not math.isfinite(a) or a < 0:
            raise ValueError(f"Atoms must be finite and nonnegative, got {a}")
    for w in weights:
        if not math.isfinite(w) or w < 0:
            raise ValueError(f"Weights must be finite and nonnegative, got {w}")
    if math.fsum(weights) <= 0:
        raise ValueError("Total weight must be positive")

    pairs = sorted(zip(atoms, weights))
    merge_tol = MERGE_TOLERANCE * (1.0 + pairs[-1][0])
    merged_atoms: List[float] = []
    merged_weights: List[List[float]] = []
    for a, w in pairs:
        if merged_atoms and a - merged_atoms[-1] <= merge_tol:
            merged_weights[-1].append(w)
        else:
            merged_atoms.append(a)
            merged_weights.append([w])

    kept = [(a, math.fsum(ws)) for a, ws in zip(merged_atoms, merged_weights)]
    kept = [(a, w) for a, w in kept if w > 0]
    if observation and len(kept) == 1 and kept[0][0] == 0.0:
        raise ValueError("Observation law cannot be the point mass at 0")

    probs = _normalize([w for _, w in kept])
    return FiniteDist(atoms=tuple(a for a, _ in kept), probs=tuple(probs))


def from_probs(atoms: Sequence[float], probs: Sequence[float], observation: bool = True) -> FiniteDist:
    """Like make_finite_dist, but the inputs must already sum to 1 (within PROB_SUM_TOLERANCE)."""
    total = math.fsum(float(p) for p in probs)
    if abs(total - 1.0) > PROB_SUM_TOLERANCE:
        raise ValueError(f"Probabilities sum to {total}; expected 1 within {PROB_SUM_TOLERANCE}")
    return make_finite_dist(atoms, probs, observation=observation)


def point_mass(x: float) -> FiniteDist:
    return make_finite_dist([x], [1.0])


def two_point(low: float, high: float, p_high: float) -> FiniteDist:
    """Law with P(X = high) = p_high and P(X = low) = 1 - p_high."""
    if not 0 < p_high <= 1:
        raise ValueError(f"p_high must be in (0, 1], got {p_high}")
    return make_finite_dist([low, high], [1.0 - p_high, p_high])


def tail_stats(d: FiniteDist) -> TailStats:
    """
    Tail probabilities, mean excesses and conditional tail means.

    mu is built by the backward recursion mu_{k-1} = mu_k + r_k (a_k - a_{k-1})
    rather than by direct summation.
    """
    n = d.n
    levels = (0.0,) + d.atoms
    r = [0.0] * n
    running = 0.0
    for k in range(n - 1, -1, -1):
        running += d.probs[k]
        r[k] = running
    r[0] = 1.0

    mu = [0.0] * (n + 1)
    for k in range(n, 0, -1):
        mu[k - 1] = mu[k] + r[k - 1] * (levels[k] - levels[k - 1])

    etail = [levels[k + 1] + mu[k + 1] / r[k] for k in range(n)]
    return TailStats(levels=levels, r=tuple(r), mu=tuple(mu), etail=tuple(etail))


def mean_excess(d: FiniteDist, c: float) -> float:
    """
    E(X - c)^+ for c >= 0.

    Evaluated on the piecewise-linear segments of the tail statistics, so it
    equals mu_k exactly at c = a_k.
    """
    if c < 0:
        raise ValueError(f"Threshold must be nonnegative, got {c}")
    stats = d.stats
    levels = stats.levels
    if c >= levels[-1]:
        return 0.0
    # segment k: levels[k] <= c < levels[k+1]
    k = int(np.searchsorted(levels, c, side='right')) - 1
    return stats.mu[k] - stats.r[k] * (c - levels[k])


def mean_excess_array(d: FiniteDist, c: np.ndarray) -> np.ndarray:
    """Vectorized mean_excess over an array of thresholds (all >= 0)."""
    c = np.asarray(c, dtype=float)
    if np.any(c < 0):
        raise ValueError("Thresholds must be nonnegative")
    stats = d.stats
    levels = np.asarray(stats.levels)
    mu = np.asarray(stats.mu)
    r = np.append(np.asarray(stats.r), 0.0)
    k = np.searchsorted(levels, c, side='right') - 1
    k = np.minimum(k, d.n)
    anchor = levels[k]
    return np.where(c >= levels[-1], 0.0, mu[k] - r[k] * (c - anchor))


def solve_c_alpha(d: FiniteDist, alpha: float) -> float:
    """
    The unique c >= 0 with E(X - c)^+ = c * alpha.

    The left side is piecewise linear and decreasing, the right side linear
    and increasing, so the crossing is found by locating the segment where
    the difference changes sign and solving that linear equation.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    stats = d.stats
    levels = stats.levels
    for k in range(d.n):
        right = levels[k + 1]
        if stats.mu[k + 1] - alpha * right <= 0:
            # on [levels[k], right]: mu_k - r_{k+1} (c - a_k) = alpha c
            return (stats.mu[k] + stats.r[k] * levels[k]) / (alpha + stats.r[k])
    # mu_n = 0 makes the last segment always qualify
    raise AssertionError("unreachable: mean excess vanishes at the top atom")


def balayage(d: FiniteDist, c: float, dd: float) -> FiniteDist:
    """
    Sweep the mass of d on [c, dd] to the endpoints, preserving the mean.

    An atom x in [c, dd] sends weight (dd - x)/(dd - c) of its mass to c and
    the rest to dd; atoms outside the interval are untouched. Endpoints that
    land on existing atoms are merged.
    """
    if c < 0 or dd < 0:
        raise ValueError(f"Balayage endpoints must be nonnegative, got [{c}, {dd}]")
    if not c < dd:
        raise ValueError(f"Balayage needs c < d, got c={c}, d={dd}")

    atoms: List[float] = []
    weights: List[float] = []
    to_low: List[float] = []
    to_high: List[float] = []
    span = dd - c
    for a, p in zip(d.atoms, d.probs):
        if c <= a <= dd:
            to_low.append(p * (dd - a) / span)
            to_high.append(p * (a - c) / span)
        else:
            atoms.append(a)
            weights.append(p)
    low_mass = math.fsum(to_low)
    high_mass = math.fsum(to_high)
    if low_mass > 0:
        atoms.append(c)
        weights.append(low_mass)
    if high_mass > 0:
        atoms.append(dd)
        weights.append(high_mass)
    return make_finite_dist(atoms, weights, observation=False)


def mix_with_zero(d: FiniteDist, p: float) -> FiniteDist:
    """The mixture p F + (1 - p) delta_0."""
    if not 0 < p <= 1:
        raise ValueError(f"Mixing weight must be in (0, 1], got {p}")
    if p == 1:
        return d
    return make_finite_dist(
        (0.0,) + d.atoms,
        [1.0 - p] + [p * q for q in d.probs],
        observation=False,
    )


def random_finite_dist(
    rng: np.random.Generator,
    min_atoms: int = 2,
    max_atoms: int = 8,
    low: float = 1e-3,
    high: float = 1e3,
    support: Optional[Tuple[float, float]] = None,
) -> FiniteDist:
    """
    Random law for property sweeps.

    The atom count is uniform on [min_atoms, max_atoms], atoms are
    log-uniform on [low, high] (or uniform on the given support interval)
    and the weights are Dirichlet(1, ..., 1).
    """
    count = int(rng.integers(min_atoms, max_atoms + 1))
    if support is None:
        atoms = np.exp(rng.uniform(math.log(low), math.log(high), size=count))
    else:
        lo, hi = support
        atoms = rng.uniform(lo, hi, size=count)
    weights = rng.dirichlet(np.ones(count))
    return make_finite_dist(atoms.tolist(), weights.tolist(), observation=False)


def from_json(payload: Union[str, Dict]) -> FiniteDist:
    """Parse {"atoms": [...], "probs": [...]} (dict or JSON text)."""
    if isinstance(payload, str):
        payload = json.loads(payload)
    try:
        atoms = payload['atoms']
        probs = payload['probs']
    except (KeyError, TypeError) as e:
        raise ValueError(f"Distribution JSON needs 'atoms' and 'probs': {e}") from e
    return from_probs(atoms, probs)


def parse_dist_spec(text: str) -> FiniteDist:
    """
    Parse the inline "a1:p1,a2:p2,..." syntax.

    Raises:
        ValueError: On malformed entries or invalid probabilities
    """
    atoms: List[float] = []
    probs: List[float] = []
    for entry in text.split(','):
        entry = entry.strip()
        if not entry:
            continue
        parts = entry.split(':')
        if len(parts) != 2:
            raise ValueError(f"Malformed distribution entry '{entry}'; expected 'value:prob'")
        try:
            atoms.append(float(parts[0]))
            probs.append(float(parts[1]))
        except ValueError as e:
            raise ValueError(f"Malformed number in distribution entry '{entry}'") from e
    if not atoms:
        raise ValueError(f"Empty distribution spec '{text}'")
    return from_probs(atoms, probs)

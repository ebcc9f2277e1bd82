"""
Seeded Monte Carlo for the unit-rate Poisson arrival model.

Paths are simulated in fixed-size blocks. Block b draws from its own
substream Generator(PCG64DXSM(SeedSequence(seed, spawn_key=(b,)))), so an
estimate depends only on (seed, paths, block size) and never on how many
worker threads ran the blocks.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Tuple
import logging
import math

import numpy as np

from config import DEFAULT_SEED, MC_BLOCK_SIZE, MC_CI_Z, MC_SIGMA_BAND
from policies.base import AcceptancePolicy, PolicySpec
from .distributions import FiniteDist, mean_excess

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo run parameters."""
    t: float
    paths: int
    seed: int = DEFAULT_SEED
    antithetic: bool = False
    block_size: int = MC_BLOCK_SIZE
    workers: int = 1

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"Horizon must be positive, got {self.t}")
        if self.paths < 1:
            raise ValueError(f"paths must be >= 1, got {self.paths}")
        if self.block_size < 1:
            raise ValueError(f"block_size must be >= 1, got {self.block_size}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    def block_sizes(self) -> List[int]:
        full, rest = divmod(self.paths, self.block_size)
        return [self.block_size] * full + ([rest] if rest else [])


@dataclass(frozen=True)
class SimResult:
    """A sample mean with its standard error and 95% interval."""
    estimate: float
    stderr: float
    ci95: Tuple[float, float]
    paths: int

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> 'SimResult':
        samples = np.asarray(samples, dtype=float)
        if samples.size == 0:
            raise ValueError("Need at least one sample")
        return cls._build(float(samples.mean()), _stderr(samples), samples.size)

    @classmethod
    def from_antithetic(cls, blocks: List[np.ndarray]) -> 'SimResult':
        """
        Per-path rewards of antithetic blocks, each laid out as simulate_block
        does. The standard error comes from the pair averages, since a row and
        its mirror are not independent.
        """
        blocks = [np.asarray(b, dtype=float) for b in blocks]
        samples = np.concatenate(blocks) if blocks else np.empty(0)
        if samples.size == 0:
            raise ValueError("Need at least one sample")
        units = np.concatenate([antithetic_units(b) for b in blocks])
        return cls._build(float(samples.mean()), _stderr(units), samples.size)

    @classmethod
    def _build(cls, estimate: float, stderr: float, paths: int) -> 'SimResult':
        half = MC_CI_Z * stderr
        return cls(estimate=estimate, stderr=stderr, ci95=(estimate - half, estimate + half), paths=paths)

    def agrees_with(self, value: float, k: float = MC_SIGMA_BAND) -> bool:
        """Whether value lies within k standard errors (plus float noise) of the estimate."""
        return abs(self.estimate - value) <= k * self.stderr + 1e-12 * max(1.0, abs(value))

    def to_json(self) -> Dict:
        return {
            'estimate': self.estimate,
            'stderr': self.stderr,
            'ci95': list(self.ci95),
            'paths': self.paths,
        }


def _stderr(x: np.ndarray) -> float:
    return float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0


def antithetic_units(rewards: np.ndarray) -> np.ndarray:
    """
    Average each base row of an antithetic block with its mirror.

    Rows h.. mirror rows 0.. with h = ceil(m/2); an odd block's last base row
    has no mirror and is kept as is.
    """
    m = rewards.size
    h = (m + 1) // 2
    return np.concatenate([0.5 * (rewards[:m - h] + rewards[h:]), rewards[m - h:h]])


@dataclass(frozen=True)
class ArrivalBlock:
    """
    Arrival times and values for a block of paths.

    Row i holds path i; entries with mask False arrived after the deadline.
    """
    t: float
    times: np.ndarray
    values: np.ndarray
    mask: np.ndarray

    @property
    def paths(self) -> int:
        return self.times.shape[0]

    @property
    def counts(self) -> np.ndarray:
        """N(t) per path."""
        return self.mask.sum(axis=1)

    @property
    def maxima(self) -> np.ndarray:
        """X_t^* per path (0 when nothing arrived)."""
        return np.where(self.mask, self.values, 0.0).max(axis=1, initial=0.0)


def substream(seed: int, block: int) -> np.random.Generator:
    """The generator for block `block` of a run seeded with `seed`."""
    return np.random.Generator(np.random.PCG64DXSM(np.random.SeedSequence(seed, spawn_key=(block,))))


def sample_stream(d: FiniteDist, t: float, rng: np.random.Generator) -> List[Tuple[float, float]]:
    """
    One path: (S_k, X_k) for every arrival with S_k <= t.

    Gaps are -log U for uniform U, values are drawn independently from d.
    """
    if not t > 0:
        raise ValueError(f"Horizon must be positive, got {t}")
    stream = []
    s = 0.0
    while True:
        s += -math.log1p(-rng.random())
        if s > t:
            return stream
        stream.append((s, float(d.values_from_uniforms(np.array([rng.random()]))[0])))


def _uniforms(rng: np.random.Generator, rows: int, cols: int, antithetic: bool) -> np.ndarray:
    if not antithetic:
        return rng.random((rows, cols))
    base = rng.random(((rows + 1) // 2, cols))
    return np.vstack([base, 1.0 - base])[:rows]


def _gaps(u: np.ndarray) -> np.ndarray:
    # u in [0, 1]: -log(1 - u) is finite except at u = 1, where the gap is infinite
    with np.errstate(divide='ignore'):
        return -np.log1p(-u)


def simulate_block(
    d: FiniteDist,
    t: float,
    paths: int,
    rng: np.random.Generator,
    antithetic: bool = False,
) -> ArrivalBlock:
    """
    Vectorized sample_stream for `paths` independent paths.

    Columns of exponential gaps are added until every path has passed the
    deadline. With antithetic, the second half of the rows mirror the first
    (U -> 1 - U for gaps and values).
    """
    if not t > 0:
        raise ValueError(f"Horizon must be positive, got {t}")
    width = int(math.ceil(t + 6.0 * math.sqrt(t) + 10.0))
    times = np.cumsum(_gaps(_uniforms(rng, paths, width, antithetic)), axis=1)
    while np.any(times[:, -1] <= t):
        extra = np.cumsum(_gaps(_uniforms(rng, paths, width, antithetic)), axis=1)
        times = np.hstack([times, times[:, -1:] + extra])
    values = d.values_from_uniforms(_uniforms(rng, paths, times.shape[1], antithetic))
    return ArrivalBlock(t=t, times=times, values=values, mask=times <= t)


def path_rewards(policy: AcceptancePolicy, block: ArrivalBlock) -> np.ndarray:
    """
    Reward per path: the first accepted value in time order, 0 if none is accepted.
    """
    remaining = block.t - block.times
    accepted = policy.accept_array(block.values, remaining) & block.mask
    first = accepted.argmax(axis=1)
    rows = np.arange(block.paths)
    return np.where(accepted[rows, first], block.values[rows, first], 0.0)


def prophet_rewards(block: ArrivalBlock) -> np.ndarray:
    return block.maxima


def _run_blocks(d: FiniteDist, cfg: SimConfig, reward: Callable[[ArrivalBlock], np.ndarray]) -> List[np.ndarray]:
    sizes = cfg.block_sizes()

    def run(b: int) -> np.ndarray:
        block = simulate_block(d, cfg.t, sizes[b], substream(cfg.seed, b), cfg.antithetic)
        return reward(block)

    if cfg.workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(b) for b in range(len(sizes))]
    logger.debug(f"Simulated {cfg.paths} paths in {len(sizes)} blocks (seed {cfg.seed})")
    return parts


def _summarize(parts: List[np.ndarray], cfg: SimConfig) -> SimResult:
    if cfg.antithetic:
        return SimResult.from_antithetic(parts)
    return SimResult.from_samples(np.concatenate(parts))


def estimate_prophet(d: FiniteDist, cfg: SimConfig) -> SimResult:
    """Monte Carlo M(t): the mean of per-path maxima, 0 for empty paths."""
    return _summarize(_run_blocks(d, cfg, prophet_rewards), cfg)


def estimate_policy(d: FiniteDist, policy: PolicySpec, cfg: SimConfig) -> SimResult:
    """
    Monte Carlo value of a policy: walk each path's arrivals in time order and
    take the first accepted value (0 if none).
    """
    if not math.isclose(policy.horizon, cfg.t, rel_tol=1e-12):
        raise ValueError(f"Policy horizon {policy.horizon} differs from simulated horizon {cfg.t}")
    return _summarize(_run_blocks(d, cfg, lambda block: path_rewards(policy.policy, block)), cfg)


def estimate_pair(d: FiniteDist, policy: PolicySpec, cfg: SimConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Per-path (prophet, policy) rewards on the same simulated paths."""
    both = np.concatenate(_run_blocks(
        d, cfg, lambda block: np.stack([prophet_rewards(block), path_rewards(policy.policy, block)], axis=1)
    ))
    return both[:, 0], both[:, 1]


@dataclass(frozen=True)
class ExcessCheck:
    """Monte Carlo E(X_s^* - c)^+ against the exact s E(X - c)^+."""
    lhs: SimResult
    rhs: float
    holds: bool


def check_excess_of_max(d: FiniteDist, s: float, c: float, cfg: SimConfig) -> ExcessCheck:
    """
    Check E(X_s^* - c)^+ <= s E(X - c)^+ by simulation.

    holds is lhs <= rhs + 4 stderr; cfg's horizon is replaced by s.
    """
    if c < 0:
        raise ValueError(f"Threshold must be nonnegative, got {c}")
    run_cfg = replace(cfg, t=s)
    parts = _run_blocks(d, run_cfg, lambda block: np.maximum(block.maxima - c, 0.0))
    lhs = _summarize(parts, run_cfg)
    rhs = s * mean_excess(d, c)
    holds = lhs.estimate <= rhs + MC_SIGMA_BAND * lhs.stderr + 1e-12
    if not holds:
        logger.warning(f"E(X_s^* - c)^+ estimate {lhs.estimate} exceeds {rhs} at s={s}, c={c}")
    return ExcessCheck(lhs=lhs, rhs=rhs, holds=holds)

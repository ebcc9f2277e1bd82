"""
The optimal rule: accept an offer worth at least V(time remaining).
"""
import numpy as np

from core.distributions import FiniteDist
from core.poisson_stopping import TIE_TOLERANCE, ValueProfile, optimal_accept, value_curve, value_profile
from .base import AcceptancePolicy, PolicyKind


class OptimalPolicy(AcceptancePolicy):
    """Accept when value >= V(remaining); ties accept."""

    kind = PolicyKind.OPTIMAL

    def __init__(self, profile: ValueProfile):
        self.profile = profile

    @classmethod
    def for_dist(cls, d: FiniteDist) -> 'OptimalPolicy':
        return cls(value_profile(d))

    @property
    def name(self) -> str:
        return "optimal"

    @property
    def description(self) -> str:
        times = ", ".join(f"{t:.6g}" for t in self.profile.critical_times) or "none"
        return f"Optimal rule with critical times {times}"

    def accept(self, value: float, remaining: float) -> bool:
        return optimal_accept(self.profile, value, remaining)

    def accept_array(self, values: np.ndarray, remaining: np.ndarray) -> np.ndarray:
        remaining = np.maximum(remaining, 0.0)
        return values >= value_curve(self.profile, remaining) * (1.0 - TIE_TOLERANCE)

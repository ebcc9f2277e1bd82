"""
Pure threshold rule tau(c).
"""
import numpy as np

from .base import AcceptancePolicy, PolicyKind


class ThresholdPolicy(AcceptancePolicy):
    """Accept the first offer with value >= c, regardless of time."""

    kind = PolicyKind.THRESHOLD

    def __init__(self, c: float):
        if not c >= 0:
            raise ValueError(f"Threshold must be nonnegative, got {c}")
        self.c = float(c)

    @property
    def name(self) -> str:
        return f"threshold:{self.c:.17g}"

    @property
    def description(self) -> str:
        return f"Accept the first value >= {self.c:g}"

    def accept(self, value: float, remaining: float) -> bool:
        return value >= self.c

    def accept_array(self, values: np.ndarray, remaining: np.ndarray) -> np.ndarray:
        return values >= self.c

"""
Abstract base class for acceptance policies.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum

import numpy as np


class PolicyKind(Enum):
    """Kinds of stopping rules."""
    OPTIMAL = "optimal"
    THRESHOLD = "threshold"
    CUSTOM = "custom"


class AcceptancePolicy(ABC):
    """A stopping rule that sees each offer once, with the time left until the deadline."""

    kind: PolicyKind

    @property
    @abstractmethod
    def name(self) -> str:
        """Short label, re-parseable by parse_policy where possible."""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        pass

    @abstractmethod
    def accept(self, value: float, remaining: float) -> bool:
        """
        Decide on one offer.

        Args:
            value: The offered value
            remaining: Time left until the deadline when the offer arrives

        Returns:
            True to stop and take the offer
        """
        pass

    def accept_array(self, values: np.ndarray, remaining: np.ndarray) -> np.ndarray:
        """
        Elementwise accept over equally shaped arrays.
        Override this with a vectorized rule when one exists.
        """
        decide = np.vectorize(self.accept, otypes=[bool])
        return decide(values, remaining)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PolicySpec:
    """A policy paired with the deadline it is run against."""
    policy: AcceptancePolicy
    horizon: float

    def __post_init__(self):
        if not self.horizon > 0:
            raise ValueError(f"Horizon must be positive, got {self.horizon}")

    @property
    def kind(self) -> PolicyKind:
        return self.policy.kind

"""
Policy wrapping a user-supplied acceptance function.
"""
from typing import Callable

from .base import AcceptancePolicy, PolicyKind

AcceptFunction = Callable[[float, float], bool]


class CustomPolicy(AcceptancePolicy):
    """Delegates to accept_fn(value, remaining)."""

    kind = PolicyKind.CUSTOM

    def __init__(self, accept_fn: AcceptFunction, label: str = "custom"):
        if not callable(accept_fn):
            raise ValueError("accept_fn must be callable")
        self.accept_fn = accept_fn
        self.label = label

    @property
    def name(self) -> str:
        return self.label

    @property
    def description(self) -> str:
        return f"Custom rule '{self.label}'"

    def accept(self, value: float, remaining: float) -> bool:
        return bool(self.accept_fn(float(value), float(remaining)))

"""Stopping policies for the Poisson arrival model."""
from typing import Dict, Optional, Type

from core.distributions import FiniteDist
from .base import AcceptancePolicy, PolicyKind, PolicySpec
from .custom import CustomPolicy
from .optimal import OptimalPolicy
from .threshold import ThresholdPolicy

POLICY_CLASSES: Dict[PolicyKind, Type[AcceptancePolicy]] = {
    PolicyKind.OPTIMAL: OptimalPolicy,
    PolicyKind.THRESHOLD: ThresholdPolicy,
    PolicyKind.CUSTOM: CustomPolicy,
}


def create_policy(kind, *args, **kwargs) -> AcceptancePolicy:
    """Create a policy from its kind (enum or string) and constructor arguments."""
    try:
        kind = PolicyKind(kind)
    except ValueError:
        raise ValueError(f"Unknown policy type: {kind}") from None
    return POLICY_CLASSES[kind](*args, **kwargs)


def parse_policy(text: str, d: Optional[FiniteDist] = None) -> AcceptancePolicy:
    """
    Parse "optimal" or "threshold:<c>".

    Args:
        text: Policy text
        d: The law of X; required for the optimal rule

    Returns:
        The policy
    """
    text = text.strip()
    if text == PolicyKind.OPTIMAL.value:
        if d is None:
            raise ValueError("The optimal policy needs a distribution")
        return OptimalPolicy.for_dist(d)
    head, sep, tail = text.partition(':')
    if head == PolicyKind.THRESHOLD.value and sep:
        try:
            c = float(tail)
        except ValueError:
            raise ValueError(f"Malformed threshold in policy '{text}'") from None
        return ThresholdPolicy(c)
    raise ValueError(f"Unknown policy '{text}'; expected 'optimal' or 'threshold:<c>'")


__all__ = [
    'AcceptancePolicy', 'PolicyKind', 'PolicySpec', 'OptimalPolicy', 'ThresholdPolicy',
    'CustomPolicy', 'POLICY_CLASSES', 'create_policy', 'parse_policy',
]

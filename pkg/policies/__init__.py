"""READ/WRITE decoding policies."""

from .DecodingPolicy import READ, WRITE, DecodingPolicy, PolicyDecision, PolicyState
from .WaitKPolicy import WaitKPolicy, g_of
from .ThresholdPolicy import ThresholdPolicy

__all__ = [
    'READ',
    'WRITE',
    'DecodingPolicy',
    'PolicyDecision',
    'PolicyState',
    'WaitKPolicy',
    'g_of',
    'ThresholdPolicy',
    'create_policy',
]


def create_policy(name: str, value, k_min: int = 1, cap: int = 10) -> DecodingPolicy:
    """Build a policy from its config name and k/rho value; k_min and cap only apply to threshold."""
    if name == WaitKPolicy.name:
        return WaitKPolicy(int(value))
    if name == ThresholdPolicy.name:
        return ThresholdPolicy(float(value), k_min=k_min, cap=cap)
    raise ValueError(f"Unknown policy: {name!r}")

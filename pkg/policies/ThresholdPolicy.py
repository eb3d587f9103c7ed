"""
Confidence-threshold adaptive policy.

Writes while the model's most likely next token (given the committed prefix)
is at least rho likely, so one source token can trigger several writes.
"""

import logging

from trace_core import EOS

from .DecodingPolicy import READ, WRITE, DecodingPolicy, PolicyDecision, PolicyState

logger = logging.getLogger(__name__)


class ThresholdPolicy(DecodingPolicy):
    """Adaptive policy driven by model confidence."""

    name = "threshold"
    probes_model = True

    def __init__(self, rho: float, k_min: int = 1, cap: int = 10):
        """
        Initialize the threshold policy.

        Args:
            rho: Probability threshold for a WRITE
            k_min: Source tokens read before any write
            cap: Maximum consecutive writes between two reads
        """
        if rho < 0:
            raise ValueError(f"rho must be >= 0, got {rho}")
        if k_min < 1:
            raise ValueError(f"k_min must be >= 1, got {k_min}")
        if cap < 1:
            raise ValueError(f"cap must be >= 1, got {cap}")
        self.rho = float(rho)
        self.k_min = int(k_min)
        self.cap = int(cap)

    @property
    def setting(self) -> float:
        return self.rho

    def _decide(self, state: PolicyState) -> PolicyDecision:
        if state.source_read < self.k_min:
            return READ
        if state.writes_since_read >= self.cap:
            return READ
        if state.model is None:
            raise ValueError("ThresholdPolicy needs the model in its state")

        token, probability = state.model.next_distribution(
            state.source_prefix, state.committed_prefix
        ).top()
        if token == EOS:
            # EOS cannot be committed while source remains
            return READ
        return WRITE if probability >= self.rho else READ

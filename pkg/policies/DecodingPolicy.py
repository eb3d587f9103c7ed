"""
Decoding policy base class.

A policy turns the decoder's current position into READ or WRITE actions;
the resulting action stream realizes g(t), the number of source tokens
seen when target token t is written.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

from trace_core import Sentence

logger = logging.getLogger(__name__)


class PolicyDecision(str, Enum):
    READ = "READ"
    WRITE = "WRITE"


READ = PolicyDecision.READ
WRITE = PolicyDecision.WRITE


@dataclass(frozen=True)
class PolicyState:
    """What a policy may look at when deciding."""

    source_read: int
    committed_len: int
    source_len: int
    model: Optional[Any] = None
    source_prefix: Sentence = field(default=())
    committed_prefix: Sentence = field(default=())
    writes_since_read: int = 0


class DecodingPolicy:
    """
    Base class for READ/WRITE policies.

    Subclasses implement `_decide`; the guards shared by every policy live
    in `decide`. `probes_model` tells the decoder whether decisions need
    greedy probe tokens appended to the committed prefix.
    """

    name = "policy"
    probes_model = False

    def decide(self, state: PolicyState) -> PolicyDecision:
        """
        Decide the next action.

        Args:
            state: Current decoder position

        Returns:
            READ or WRITE
        """
        if state.source_read > state.source_len:
            raise ValueError(
                f"source_read {state.source_read} exceeds source_len {state.source_len}"
            )
        if state.source_read == 0:
            return READ
        if state.source_read == state.source_len:
            return WRITE
        return self._decide(state)

    def _decide(self, state: PolicyState) -> PolicyDecision:
        raise NotImplementedError

    @property
    def setting(self):
        """The value reported in the k_or_rho column."""
        raise NotImplementedError

    def describe(self) -> Dict[str, Any]:
        return {'policy': self.name, 'k_or_rho': self.setting}

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.setting})"

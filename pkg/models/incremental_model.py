"""Incremental translation-model interface and its error types."""

import logging
from abc import ABC, abstractmethod
from typing import FrozenSet

from trace_core import EOS, Sentence

from .distribution import Distribution

logger = logging.getLogger(__name__)


class ModelError(Exception):
    """Any failure while scoring with a model."""


class UnknownTokenError(ModelError):
    """A source token the model cannot translate."""

    def __init__(self, token: str):
        super().__init__(f"Unknown source token: {token!r}")
        self.token = token


class ProtocolError(ModelError):
    """Malformed exchange with an external model process."""


class ModelTimeoutError(ModelError):
    """External model did not answer in time."""


class IncrementalModel(ABC):
    """
    Scores the next target token given a source prefix and a target prefix.

    Implementations must be pure: equal arguments give equal distributions.
    A source prefix ending in EOS means the whole source has been revealed.
    """

    @property
    @abstractmethod
    def vocabulary(self) -> FrozenSet[str]:
        """Target tokens the model can emit (EOS excluded)."""

    @abstractmethod
    def next_distribution(self, source_prefix: Sentence, target_prefix: Sentence) -> Distribution:
        """p(y_t | source_prefix, target_prefix) with t = |target_prefix| + 1."""

    def close(self):
        """Release external resources, if any."""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()
        return False


def next_distribution(model: IncrementalModel, source_prefix: Sentence, target_prefix: Sentence) -> Distribution:
    """
    Score the next target token, checking the call contract.

    Args:
        model: Model to query
        source_prefix: Revealed source tokens (EOS-terminated once complete)
        target_prefix: Target tokens so far, without EOS

    Returns:
        Distribution over the model vocabulary and EOS
    """
    target_prefix = tuple(target_prefix)
    if EOS in target_prefix:
        raise ValueError("target_prefix must not contain EOS")
    return model.next_distribution(tuple(source_prefix), target_prefix)

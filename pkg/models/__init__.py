"""Incremental translation models."""

from .distribution import Distribution
from .incremental_model import (
    IncrementalModel,
    ModelError,
    ModelTimeoutError,
    ProtocolError,
    UnknownTokenError,
    next_distribution,
)
from .lookahead_transducer import EchoModel, LookaheadTransducerModel, build_lookahead_model
from .subprocess_model import SubprocessModel, subprocess_model
from .factory import build_model, load_model_file

__all__ = [
    'Distribution',
    'IncrementalModel',
    'ModelError',
    'ModelTimeoutError',
    'ProtocolError',
    'UnknownTokenError',
    'next_distribution',
    'EchoModel',
    'LookaheadTransducerModel',
    'build_lookahead_model',
    'SubprocessModel',
    'subprocess_model',
    'build_model',
    'load_model_file',
]

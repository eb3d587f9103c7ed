"""Shared fixtures; the repository root holds the importable packages and scripts."""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from models import EchoModel, LookaheadTransducerModel  # noqa: E402

FIXTURES = Path(__file__).resolve().parent / 'fixtures'


@pytest.fixture
def echo_model():
    return EchoModel(['a', 'b', 'c', 'd'])


@pytest.fixture
def table():
    return {'a': 'A', 'b': 'B', 'c': 'C', 'd': 'D', 'e': 'E'}


@pytest.fixture
def lookahead_model(table):
    """d=2, q=0.7: the stress-corpus model."""
    return LookaheadTransducerModel(table, lookahead=2, default_token='UNK', sharpness=0.7)


@pytest.fixture
def sharp_model(table):
    """d=2, q=1: fully deterministic."""
    return LookaheadTransducerModel(table, lookahead=2, default_token='UNK', sharpness=1.0)


@pytest.fixture
def fixtures_dir():
    return FIXTURES

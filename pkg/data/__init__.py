"""Corpus generation and validation."""

from .data_validator import CorpusError, CorpusValidator
from .synthetic_corpus import SyntheticCorpusGenerator, gen_synthetic_corpus

__all__ = ['CorpusError', 'CorpusValidator', 'SyntheticCorpusGenerator', 'gen_synthetic_corpus']

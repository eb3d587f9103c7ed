"""Opportunistic decoding engine and re-translation baselines."""

from .beam_search import (
    DEFAULT_MAX_LEN_RATIO,
    Beam,
    DecodeError,
    Hypothesis,
    beam_advance,
    beam_step,
    decode_to_eos,
    full_sentence_decode,
)
from .opportunistic_decoder import DecoderState, commit_step, decode_simultaneous
from .retranslation import decode_fullsentence, decode_retranslation

__all__ = [
    'DEFAULT_MAX_LEN_RATIO',
    'Beam',
    'DecodeError',
    'Hypothesis',
    'beam_advance',
    'beam_step',
    'decode_to_eos',
    'full_sentence_decode',
    'DecoderState',
    'commit_step',
    'decode_simultaneous',
    'decode_fullsentence',
    'decode_retranslation',
]

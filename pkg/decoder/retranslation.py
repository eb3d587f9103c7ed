"""
Baselines without opportunistic windows.

Re-translation decodes every source prefix from scratch and shows the whole
result as revisable until the source is complete. The full-sentence baseline
shows nothing until the last source token, then the complete translation.
"""

import logging
from typing import Sequence

from models import ModelError
from trace_core import CommitTrace, Snapshot

from .beam_search import DEFAULT_MAX_LEN_RATIO, Beam, DecodeError, decode_to_eos, full_sentence_decode

logger = logging.getLogger(__name__)


def _decode_at(step: int, fn):
    try:
        return fn()
    except DecodeError as e:
        raise DecodeError(e.message, source_step=step, target_step=e.target_step) from e
    except ModelError as e:
        raise DecodeError(str(e), source_step=step) from e


def decode_retranslation(
    model,
    source: Sequence[str],
    beam_size: int = 1,
    max_len_ratio: float = DEFAULT_MAX_LEN_RATIO
) -> CommitTrace:
    """
    Re-translate every source prefix.

    Prefixes s < |x| are decoded without the end-of-source marker, so the
    model knows more words are coming; nothing is committed before s = |x|.
    """
    source = tuple(source)
    if not source:
        raise ValueError("source must not be empty")
    n_source = len(source)
    max_len = int(max_len_ratio * n_source)

    snapshots = []
    for s in range(1, n_source):
        best = _decode_at(s, lambda: decode_to_eos(Beam.initial(), beam_size, model, source[:s], max_len))
        snapshots.append(Snapshot(source_step=s, displayed=best.tokens, committed_len=0))

    final = _decode_at(n_source, lambda: full_sentence_decode(model, source, beam_size, max_len_ratio))
    snapshots.append(Snapshot(source_step=n_source, displayed=final, committed_len=len(final)))
    return CommitTrace(source_len=n_source, snapshots=tuple(snapshots))


def decode_fullsentence(
    model,
    source: Sequence[str],
    beam_size: int = 1,
    max_len_ratio: float = DEFAULT_MAX_LEN_RATIO
) -> CommitTrace:
    """Wait for the whole source, then translate it in one go."""
    source = tuple(source)
    if not source:
        raise ValueError("source must not be empty")
    n_source = len(source)
    final = _decode_at(n_source, lambda: full_sentence_decode(model, source, beam_size, max_len_ratio))
    snapshots = [Snapshot(source_step=s, displayed=(), committed_len=0) for s in range(1, n_source)]
    snapshots.append(Snapshot(source_step=n_source, displayed=final, committed_len=len(final)))
    return CommitTrace(source_len=n_source, snapshots=tuple(snapshots))

"""Revision rate: padded Hamming change between consecutive snapshots."""

from typing import Tuple

from trace_core import PAD, CommitTrace, Sentence


def dist_padded(a: Sentence, b: Sentence) -> int:
    """Positions of `a` where `b` (truncated, PAD-extended to |a|) differs."""
    return sum(
        1 for i, token in enumerate(a)
        if token != (b[i] if i < len(b) else PAD)
    )


def revision_counts(trace: CommitTrace) -> Tuple[int, int]:
    """(total padded change, total displayed length) for pooling across sentences."""
    numerator = 0
    for s in range(1, trace.source_len):
        numerator += dist_padded(trace.displayed_at(s), trace.displayed_at(s + 1))
    denominator = sum(len(snap.displayed) for snap in trace.snapshots)
    return numerator, denominator


def revision_rate(trace: CommitTrace) -> float:
    numerator, denominator = revision_counts(trace)
    if denominator == 0:
        return 0.0
    return numerator / denominator

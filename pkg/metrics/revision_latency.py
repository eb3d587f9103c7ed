"""
Revision-aware latency.

LR(t) is the last source step at which displayed position t changed, LR̄ its
running maximum. RAL averages LR̄(t) - (t - 1) / r up to the cut-off, the same
way classical Average Lagging averages first-appearance delays.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from trace_core import CommitTrace


logger = logging.getLogger(__name__)


class MetricsError(ValueError):
    """Metric undefined for the given input."""


@dataclass(frozen=True)
class LastRevisionProfile:
    """Per-position revision steps of one trace."""

    lr: Tuple[int, ...]
    lr_bar: Tuple[int, ...]
    cutoff: int
    ratio: float


def _cutoff(delays: Sequence[int], source_len: int) -> int:
    """First t with delay(t) = |x|, else |y|."""
    for t, delay in enumerate(delays, start=1):
        if delay >= source_len:
            return t
    return len(delays)


def average_lagging(delays: Sequence[int], source_len: int, target_len: int) -> float:
    """
    Average lagging over a delay sequence.

    Args:
        delays: Source step at which each target position settled
        source_len: |x|
        target_len: |y|, used for the rate r = |y| / |x|

    Returns:
        (1/tau) * sum_{t<=tau} (delay(t) - (t - 1) / r)
    """
    if not delays:
        raise MetricsError("no target tokens to measure")
    if source_len < 1 or target_len < 1:
        raise MetricsError("source and target lengths must be positive")
    ratio = target_len / source_len
    tau = _cutoff(delays, source_len)
    lagged = np.asarray(delays[:tau], dtype=float) - np.arange(tau, dtype=float) / ratio
    return float(lagged.sum() / tau)


def last_revision(trace: CommitTrace) -> LastRevisionProfile:
    """Compute LR, LR̄, the cut-off and r for a trace."""
    final = trace.final_output
    if not final:
        raise MetricsError("final output is empty")

    lr = [0] * len(final)
    previous: Tuple[str, ...] = ()
    for snap in trace.snapshots:
        current = snap.displayed
        for t in range(min(len(current), len(final))):
            if t >= len(previous) or previous[t] != current[t]:
                lr[t] = snap.source_step
        previous = current

    lr_bar = np.maximum.accumulate(np.asarray(lr, dtype=int))
    return LastRevisionProfile(
        lr=tuple(lr),
        lr_bar=tuple(int(v) for v in lr_bar),
        cutoff=_cutoff(lr_bar.tolist(), trace.source_len),
        ratio=len(final) / trace.source_len
    )


def ral(trace: CommitTrace) -> float:
    """Revision-aware average lagging."""
    profile = last_revision(trace)
    return average_lagging(profile.lr_bar, trace.source_len, len(trace.final_output))


def first_appearance(trace: CommitTrace) -> Tuple[int, ...]:
    """Source step at which each final position first became visible."""
    final = trace.final_output
    delays = [0] * len(final)
    for snap in trace.snapshots:
        for t in range(min(len(snap.displayed), len(final))):
            if delays[t] == 0:
                delays[t] = snap.source_step
    return tuple(delays)


def al(trace: CommitTrace) -> float:
    """Classical average lagging from first-appearance steps."""
    if not trace.final_output:
        raise MetricsError("final output is empty")
    return average_lagging(first_appearance(trace), trace.source_len, len(trace.final_output))


def al_from_policy(delays: Sequence[int], source_len: int, target_len: int) -> float:
    """Classical AL from a policy's g(1..|y|) directly."""
    return average_lagging(list(delays), source_len, target_len)

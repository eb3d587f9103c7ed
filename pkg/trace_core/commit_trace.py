"""
Commit-trace data model.

A CommitTrace records, for every revealed source token, what the audience
sees on the target side and how much of it is already irreversible.
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from .tokens import EOS, Sentence, TokenError, check_token


@dataclass(frozen=True)
class Snapshot:
    """Displayed output after source step `source_step` has been processed."""

    source_step: int
    displayed: Sentence
    committed_len: int

    def __post_init__(self):
        object.__setattr__(self, 'displayed', tuple(self.displayed))

    @property
    def committed(self) -> Sentence:
        return self.displayed[:self.committed_len]

    @property
    def revisable(self) -> Sentence:
        return self.displayed[self.committed_len:]


@dataclass(frozen=True)
class CommitTrace:
    """One snapshot per source step s = 1..source_len."""

    source_len: int
    snapshots: Tuple[Snapshot, ...]

    def __post_init__(self):
        object.__setattr__(self, 'snapshots', tuple(self.snapshots))

    @property
    def final_output(self) -> Sentence:
        if not self.snapshots:
            return ()
        return self.snapshots[-1].displayed

    def displayed_at(self, source_step: int) -> Sentence:
        """f(x_{<=s}); the empty output for s = 0."""
        if source_step == 0:
            return ()
        return self.snapshots[source_step - 1].displayed

    @classmethod
    def from_rows(cls, rows: Iterable[Tuple[Iterable[str], int]]) -> 'CommitTrace':
        """Build a trace from (displayed, committed_len) pairs for s = 1, 2, ..."""
        snapshots = tuple(
            Snapshot(source_step=s, displayed=tuple(displayed), committed_len=committed)
            for s, (displayed, committed) in enumerate(rows, start=1)
        )
        return cls(source_len=len(snapshots), snapshots=snapshots)


@dataclass(frozen=True)
class TraceViolation:
    """First invariant a trace breaks."""

    source_step: Optional[int]
    message: str

    def __str__(self) -> str:
        if self.source_step is None:
            return self.message
        return f"s={self.source_step}: {self.message}"


def trace_validate(trace: CommitTrace, window: Optional[int] = None) -> Optional[TraceViolation]:
    """
    Check every CommitTrace invariant.

    Args:
        trace: Trace to check
        window: Revisable window bound w; skipped when None

    Returns:
        The first violation found, or None when the trace is valid
    """
    if trace.source_len < 1:
        return TraceViolation(None, "source_len must be at least 1")
    if len(trace.snapshots) != trace.source_len:
        return TraceViolation(
            None,
            f"expected {trace.source_len} snapshots, found {len(trace.snapshots)}"
        )

    previous = None
    for expected_step, snap in enumerate(trace.snapshots, start=1):
        s = snap.source_step
        if s != expected_step:
            return TraceViolation(s, f"source_step out of order (expected {expected_step})")
        for token in snap.displayed:
            if token == EOS:
                return TraceViolation(s, "EOS in displayed output")
            try:
                check_token(token)
            except TokenError as e:
                return TraceViolation(s, f"invalid token: {e}")
        if snap.committed_len < 0 or snap.committed_len > len(snap.displayed):
            return TraceViolation(s, "committed_len exceeds displayed length")
        if window is not None and len(snap.displayed) - snap.committed_len > window:
            return TraceViolation(s, f"revisable window exceeded (w={window})")

        if previous is not None:
            if snap.committed_len < previous.committed_len:
                return TraceViolation(s, "committed_len non-monotone")
            # Consecutive checks are enough: committed_len only grows.
            if snap.displayed[:previous.committed_len] != previous.committed:
                return TraceViolation(s, "committed token changed")
        previous = snap

    return None

"""Tokens and commit traces shared by the decoder and the metrics."""

from .tokens import (
    EOS,
    PAD,
    Sentence,
    TokenError,
    check_token,
    is_complete,
    make_sentence,
    split_line,
    strip_eos,
)
from .commit_trace import CommitTrace, Snapshot, TraceViolation, trace_validate
from .trace_io import (
    TraceFormatError,
    read_traces,
    trace_from_jsonl,
    trace_to_jsonl,
    traces_from_jsonl,
    traces_to_jsonl,
    write_traces,
)

__all__ = [
    'EOS',
    'PAD',
    'Sentence',
    'TokenError',
    'check_token',
    'is_complete',
    'make_sentence',
    'split_line',
    'strip_eos',
    'CommitTrace',
    'Snapshot',
    'TraceViolation',
    'trace_validate',
    'TraceFormatError',
    'read_traces',
    'trace_from_jsonl',
    'trace_to_jsonl',
    'traces_from_jsonl',
    'traces_to_jsonl',
    'write_traces',
]

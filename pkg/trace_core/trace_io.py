"""
Commit-trace JSONL format.

Each trace is a header line {"source_len": n} followed by exactly n snapshot
lines {"s": int, "committed": int, "displayed": [str, ...]}. Several traces
may be concatenated in one file; each header starts a new trace.
"""

import json
import logging
from pathlib import Path
from typing import Iterable, List, Union

from .commit_trace import CommitTrace, Snapshot

logger = logging.getLogger(__name__)


class TraceFormatError(ValueError):
    """Malformed trace JSONL input."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def _trace_lines(trace: CommitTrace) -> List[str]:
    lines = [_dumps({"source_len": trace.source_len})]
    for snap in trace.snapshots:
        lines.append(_dumps({
            "s": snap.source_step,
            "committed": snap.committed_len,
            "displayed": list(snap.displayed),
        }))
    return lines


def traces_to_jsonl(traces: Iterable[CommitTrace]) -> bytes:
    """Serialize traces back to back as UTF-8 JSONL."""
    lines = []
    for trace in traces:
        lines.extend(_trace_lines(trace))
    if not lines:
        return b""
    return ("\n".join(lines) + "\n").encode('utf-8')


def trace_to_jsonl(trace: CommitTrace) -> bytes:
    """Serialize a single trace."""
    return traces_to_jsonl([trace])


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def traces_from_jsonl(data: Union[bytes, str]) -> List[CommitTrace]:
    """
    Parse concatenated traces.

    Raises:
        TraceFormatError: with the 1-based line number of the first bad line
    """
    if isinstance(data, bytes):
        try:
            data = data.decode('utf-8')
        except UnicodeDecodeError as e:
            raise TraceFormatError(f"not UTF-8: {e}", 1) from e

    traces: List[CommitTrace] = []
    pending_len = None
    snapshots: List[Snapshot] = []
    line_number = 0

    for line_number, line in enumerate(data.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise TraceFormatError(f"invalid JSON ({e.msg})", line_number) from e
        if not isinstance(obj, dict):
            raise TraceFormatError("expected a JSON object", line_number)

        if "source_len" in obj:
            if pending_len is not None:
                raise TraceFormatError(
                    f"header before previous trace was complete "
                    f"({len(snapshots)}/{pending_len} snapshots)",
                    line_number
                )
            source_len = obj["source_len"]
            if not _is_int(source_len) or source_len < 1:
                raise TraceFormatError("source_len must be a positive integer", line_number)
            pending_len = source_len
            snapshots = []
            continue

        if pending_len is None:
            raise TraceFormatError("snapshot line without a header", line_number)
        missing = {"s", "committed", "displayed"} - set(obj)
        if missing:
            raise TraceFormatError(f"missing keys: {sorted(missing)}", line_number)
        step, committed, displayed = obj["s"], obj["committed"], obj["displayed"]
        if not _is_int(step) or not _is_int(committed):
            raise TraceFormatError("'s' and 'committed' must be integers", line_number)
        if not isinstance(displayed, list) or not all(isinstance(t, str) for t in displayed):
            raise TraceFormatError("'displayed' must be a list of strings", line_number)

        snapshots.append(Snapshot(source_step=step, displayed=tuple(displayed), committed_len=committed))
        if len(snapshots) == pending_len:
            traces.append(CommitTrace(source_len=pending_len, snapshots=tuple(snapshots)))
            pending_len = None
            snapshots = []

    if pending_len is not None:
        raise TraceFormatError(
            f"truncated trace ({len(snapshots)}/{pending_len} snapshots)",
            line_number
        )
    return traces


def trace_from_jsonl(data: Union[bytes, str]) -> CommitTrace:
    """Parse exactly one trace."""
    traces = traces_from_jsonl(data)
    if len(traces) != 1:
        raise TraceFormatError(f"expected one trace, found {len(traces)}", 1)
    return traces[0]


def write_traces(path: Union[str, Path], traces: Iterable[CommitTrace]) -> Path:
    """Write traces to a JSONL file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(traces_to_jsonl(traces))
    logger.debug(f"Wrote traces to {path}")
    return path


def read_traces(path: Union[str, Path]) -> List[CommitTrace]:
    """Read every trace from a JSONL file."""
    return traces_from_jsonl(Path(path).read_bytes())

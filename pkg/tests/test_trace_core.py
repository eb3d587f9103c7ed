import json
import random

import pytest

from trace_core import (
    EOS,
    CommitTrace,
    Snapshot,
    TokenError,
    TraceFormatError,
    make_sentence,
    read_traces,
    trace_from_jsonl,
    trace_to_jsonl,
    trace_validate,
    traces_from_jsonl,
    traces_to_jsonl,
    write_traces,
)


def make_trace(*rows):
    return CommitTrace.from_rows(rows)


class TestTokens:
    def test_sentence_accepts_final_eos(self):
        assert make_sentence(['a', 'b', EOS]) == ('a', 'b', EOS)

    def test_eos_in_the_middle_rejected(self):
        with pytest.raises(TokenError):
            make_sentence(['a', EOS, 'b'])

    def test_whitespace_token_rejected(self):
        with pytest.raises(TokenError):
            make_sentence(['a b'])

    def test_reserved_pad_rejected(self):
        with pytest.raises(TokenError):
            make_sentence(['<pad>'])


class TestTraceValidate:
    def test_monotone_append_is_ok(self):
        trace = make_trace((['A'], 1), (['A', 'B'], 2))
        assert trace_validate(trace) is None

    def test_committed_token_changed(self):
        trace = make_trace((['A'], 1), (['X', 'B'], 2))
        violation = trace_validate(trace)
        assert violation is not None
        assert violation.message == "committed token changed"
        assert violation.source_step == 2

    def test_committed_len_decreasing(self):
        trace = make_trace((['A', 'B'], 2), (['A', 'B'], 1))
        violation = trace_validate(trace)
        assert violation.message == "committed_len non-monotone"

    def test_revisable_tokens_may_change(self):
        trace = make_trace((['A', 'X', 'Y'], 1), (['A', 'B'], 1), (['A', 'B', 'C'], 3))
        assert trace_validate(trace, window=2) is None

    def test_window_bound(self):
        trace = make_trace((['A', 'X', 'Y'], 0),)
        assert trace_validate(trace, window=3) is None
        assert "window" in trace_validate(trace, window=2).message

    def test_committed_beyond_display(self):
        trace = make_trace((['A'], 2),)
        assert "exceeds" in trace_validate(trace).message

    def test_snapshot_count_mismatch(self):
        trace = CommitTrace(source_len=3, snapshots=(Snapshot(1, ('A',), 1),))
        assert trace_validate(trace) is not None

    def test_out_of_order_steps(self):
        trace = CommitTrace(source_len=2, snapshots=(Snapshot(2, ('A',), 0), Snapshot(1, ('A',), 0)))
        assert "order" in trace_validate(trace).message

    def test_eos_never_displayed(self):
        trace = make_trace(([EOS], 0),)
        assert "EOS" in trace_validate(trace).message

    def test_final_output_is_last_display(self):
        trace = make_trace(([], 0), (['A', 'B'], 1), (['A', 'C', 'D'], 3))
        assert trace.final_output == ('A', 'C', 'D')


class TestTraceJsonl:
    def test_empty_display_serializes_as_empty_list(self):
        data = trace_to_jsonl(make_trace(([], 0), (['A'], 1)))
        lines = data.decode('utf-8').splitlines()
        assert json.loads(lines[0]) == {"source_len": 2}
        assert json.loads(lines[1]) == {"s": 1, "committed": 0, "displayed": []}

    def test_round_trip_is_byte_stable(self):
        trace = make_trace((['A'], 0), (['A', 'B'], 1), (['A', 'B', 'C'], 3))
        data = trace_to_jsonl(trace)
        again = trace_from_jsonl(data)
        assert again == trace
        assert trace_to_jsonl(again) == data

    def test_multibyte_tokens(self):
        trace = make_trace((['总统'], 0), (['总统', 'Präsident'], 2))
        data = trace_to_jsonl(trace)
        assert '总统'.encode('utf-8') in data
        assert trace_from_jsonl(data) == trace

    def test_malformed_line_reports_line_number(self):
        data = b'{"source_len": 2}\n{"s": 1, "committed": 0, "displayed": []}\n{not json\n'
        with pytest.raises(TraceFormatError) as exc:
            trace_from_jsonl(data)
        assert exc.value.line_number == 3

    def test_missing_key(self):
        data = b'{"source_len": 1}\n{"s": 1, "displayed": []}\n'
        with pytest.raises(TraceFormatError) as exc:
            trace_from_jsonl(data)
        assert exc.value.line_number == 2

    def test_truncated_trace(self):
        data = b'{"source_len": 2}\n{"s": 1, "committed": 0, "displayed": []}\n'
        with pytest.raises(TraceFormatError):
            trace_from_jsonl(data)

    def test_concatenated_traces(self, tmp_path):
        traces = [make_trace((['A'], 1)), make_trace(([], 0), (['B', 'C'], 2))]
        path = write_traces(tmp_path / 'traces.jsonl', traces)
        assert read_traces(path) == traces
        assert traces_from_jsonl(traces_to_jsonl(traces)) == traces

    def test_random_traces_round_trip(self):
        rng = random.Random(7)
        vocab = ['A', 'B', 'C', 'ü', '字']
        for _ in range(100):
            n = rng.randint(1, 6)
            rows = []
            for _ in range(n):
                displayed = [rng.choice(vocab) for _ in range(rng.randint(0, 5))]
                rows.append((displayed, rng.randint(0, len(displayed))))
            trace = make_trace(*rows)
            assert trace_from_jsonl(trace_to_jsonl(trace)) == trace

"""
End-to-end checks on synthetic models.

The metric oracles and the exhaustive beam check live in test_metrics.py and
test_beam_search.py; this module covers the fuzz batch and the sweep-level
behaviour.
"""

import numpy as np
import pytest

from decoder import decode_simultaneous
from metrics import al, ral, revision_rate
from models import LookaheadTransducerModel
from policies import WaitKPolicy
from sweep_config import SweepConfig
from sweep_runner import SweepRunner, read_results_csv
from trace_core import read_traces, trace_validate

FUZZ_INSTANCES = 240


def fuzz_batch(seed=2024):
    """(model, source, k, w) instances over random tables."""
    rng = np.random.default_rng(seed)
    targets = ['W', 'X', 'Y', 'Z']
    for i in range(FUZZ_INSTANCES):
        table = {src: str(rng.choice(targets)) for src in 'abcd'}
        model = LookaheadTransducerModel(
            table,
            lookahead=i % 4,
            sharpness=float(rng.choice([0.6, 0.8, 1.0])),
            confusion=float(rng.choice([1.0, 2.2]))
        )
        source = tuple(str(tok) for tok in rng.choice(list('abcd'), size=int(rng.integers(2, 9))))
        k = 1 + (i // 4) % 4
        w = int(rng.integers(1, 5))
        yield model, source, k, w


@pytest.fixture(scope='module')
def fuzz_traces():
    pairs = []
    for model, source, k, w in fuzz_batch():
        plain = decode_simultaneous(model, WaitKPolicy(k), source, window=0, beam_size=1)
        windowed = decode_simultaneous(model, WaitKPolicy(k), source, window=w, beam_size=1)
        pairs.append((plain, windowed, w))
    return pairs


class TestFuzzBatch:
    def test_greedy_window_keeps_the_output(self, fuzz_traces):
        assert len(fuzz_traces) >= 200
        for plain, windowed, _ in fuzz_traces:
            assert windowed.final_output == plain.final_output

    def test_window_lowers_latency(self, fuzz_traces):
        strictly_lower = 0
        for plain, windowed, _ in fuzz_traces:
            assert ral(windowed) <= ral(plain) + 1e-9
            if ral(windowed) < ral(plain) - 1e-9:
                strictly_lower += 1
        assert strictly_lower >= 1

    def test_traces_are_valid(self, fuzz_traces):
        for plain, windowed, w in fuzz_traces:
            assert trace_validate(plain, window=0) is None
            assert trace_validate(windowed, window=w) is None

    def test_unrevised_traces_have_equal_ral_and_al(self, fuzz_traces):
        checked = 0
        for trace in (t for pair in fuzz_traces for t in pair[:2]):
            if revision_rate(trace) == 0:
                assert ral(trace) == al(trace)
                checked += 1
        assert checked >= FUZZ_INSTANCES


@pytest.fixture(scope='module')
def sweep_dirs(tmp_path_factory):
    """The same synthetic sweep run twice."""
    dirs = []
    for name in ('first', 'second'):
        output_dir = tmp_path_factory.mktemp(name)
        config = SweepConfig(
            synthetic={'n_sentences': 40, 'len_range': [4, 8], 'lookahead': 2, 'sharpness': 0.7},
            k_values=[1, 3, 5, 6],
            rho_values=[0.5],
            windows=[0, 3],
            beams=[1, 3],
            include_retranslation=True,
            include_fullsentence=True,
            output_dir=output_dir,
            seed=1
        )
        config.validate()
        SweepRunner(config).run_sweep()
        dirs.append(output_dir)
    return dirs


@pytest.fixture(scope='module')
def sweep_results(sweep_dirs):
    return read_results_csv(sweep_dirs[0] / 'results.csv')


def pick(results, policy, setting, w, b):
    rows = results[(results['policy'] == policy) & (results['k_or_rho'] == setting)
                   & (results['w'] == w) & (results['b'] == b)]
    assert len(rows) == 1
    return rows.iloc[0]


class TestSweep:
    def test_every_stored_trace_is_valid(self, sweep_dirs):
        trace_files = sorted((sweep_dirs[0] / 'traces').glob('*.jsonl'))
        assert len(trace_files) == 24
        for trace_file in trace_files:
            w = int(trace_file.stem.split('_w')[1].split('_')[0]) if '_w' in trace_file.stem else None
            for trace in read_traces(trace_file):
                assert trace_validate(trace, window=w) is None

    def test_revision_rate_by_wait(self, sweep_results):
        for k in ('1', '3', '5'):
            rate = pick(sweep_results, 'wait_k', k, 3, 1)['revision_rate']
            assert 0.0 <= rate < 1.0
        # d + 1 <= k <= w + d: window guesses are corrected once their lookahead arrives
        assert pick(sweep_results, 'wait_k', '3', 3, 1)['revision_rate'] > 0.0
        # k >= w + d + 1: the whole window is confident
        assert pick(sweep_results, 'wait_k', '6', 3, 1)['revision_rate'] == 0.0

    def test_retranslation_revises_more(self, sweep_results):
        retranslation = pick(sweep_results, 'retranslation', '', 0, 1)['revision_rate']
        opportunistic = pick(sweep_results, 'wait_k', '1', 3, 1)['revision_rate']
        assert retranslation > opportunistic

    def test_beam_window_beats_plain_decoding(self, sweep_results):
        plain = pick(sweep_results, 'wait_k', '1', 0, 1)
        windowed = pick(sweep_results, 'wait_k', '1', 3, 3)
        assert windowed['bleu'] > plain['bleu']
        assert windowed['ral'] <= plain['ral'] + 1e-9
        assert windowed['bleu'] == pytest.approx(100.0)

    def test_full_sentence_latency(self, sweep_dirs, sweep_results):
        lengths = [len(line.split()) for line in
                   (sweep_dirs[0] / 'corpus' / 'source.txt').read_text(encoding='utf-8').splitlines()]
        full = sweep_results[sweep_results['policy'] == 'fullsentence']
        assert list(full['ral']) == pytest.approx([np.mean(lengths)] * 2, abs=1e-6)
        assert list(full['bleu']) == pytest.approx([100.0, 100.0])

    def test_reruns_are_byte_identical(self, sweep_dirs):
        first, second = sweep_dirs
        assert (first / 'results.csv').read_bytes() == (second / 'results.csv').read_bytes()
        for trace_file in sorted((first / 'traces').glob('*.jsonl')):
            assert trace_file.read_bytes() == (second / 'traces' / trace_file.name).read_bytes()

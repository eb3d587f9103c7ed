import numpy as np
import pytest

from decoder import DecodeError, DecoderState, commit_step, decode_simultaneous
from metrics import last_revision, ral
from models import Distribution, IncrementalModel, LookaheadTransducerModel
from policies import ThresholdPolicy, WaitKPolicy
from trace_core import EOS, CommitTrace, is_complete, strip_eos, trace_validate

UNK = 'UNK'


class ScriptedModel(IncrementalModel):
    """Deterministic model driven by a (visible source length, complete, target prefix) script."""

    def __init__(self, script):
        self.script = script

    @property
    def vocabulary(self):
        return frozenset(self.script.values()) - {EOS}

    def next_distribution(self, source_prefix, target_prefix):
        key = (len(strip_eos(source_prefix)), is_complete(source_prefix), tuple(target_prefix))
        return Distribution.from_probabilities({self.script.get(key, EOS): 1.0})


def greedy(model, source, prefix, steps):
    tokens = tuple(prefix)
    for _ in range(steps):
        token = model.next_distribution(source, tokens).top()[0]
        if token == EOS:
            break
        tokens += (token,)
    return tokens


def random_instances(count, seed=7):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, 8))
        yield tuple(rng.choice(list('abcde'), size=n))


def make_models(table):
    return [
        LookaheadTransducerModel(table, lookahead=d, default_token=UNK, sharpness=q)
        for d in (0, 1, 2) for q in (0.7, 1.0)
    ]


class TestCommitStep:
    def test_width_one_is_greedy(self, lookahead_model):
        source = ('a', 'b', 'c')
        state, newly, revisable = commit_step(DecoderState(), lookahead_model, source, 2, 2, 1, 9)
        expected = greedy(lookahead_model, source, (), 4)
        assert newly == expected[:2]
        assert revisable == expected[2:4]
        assert state.committed == newly
        assert state.displayed == expected

    def test_window_stops_at_eos(self, sharp_model):
        # one visible token and d = 2: the model expects three target tokens
        state = DecoderState(committed=(UNK, UNK))
        state, newly, revisable = commit_step(state, sharp_model, ('a',), 1, 3, 1, 9)
        assert newly == (UNK,)
        assert revisable == ()

    def test_suppressed_eos_empties_window(self, lookahead_model):
        state = DecoderState(committed=(UNK, UNK, UNK), revisable=(UNK,))
        state, newly, revisable = commit_step(state, lookahead_model, ('a',), 1, 2, 1, 9)
        assert len(newly) == 1
        assert EOS not in newly
        assert revisable == ()
        assert state.revisable == ()

    def test_new_window_replaces_old(self, sharp_model):
        state = DecoderState(revisable=('X', 'Y'))
        state, _, revisable = commit_step(state, sharp_model, ('a', 'b', 'c'), 1, 1, 1, 9)
        assert state.revisable == revisable == (UNK,)
        assert state.displayed == ('A', UNK)

    def test_length_cap(self, sharp_model):
        with pytest.raises(DecodeError):
            commit_step(DecoderState(committed=(UNK, UNK)), sharp_model, ('a',), 2, 0, 1, 3)

    def test_rejects_bad_arguments(self, sharp_model):
        with pytest.raises(ValueError):
            commit_step(DecoderState(), sharp_model, ('a',), 0, 1, 1, 9)
        with pytest.raises(ValueError):
            commit_step(DecoderState(), sharp_model, ('a',), 1, -1, 1, 9)


class TestDecodeSimultaneous:
    def test_echo_wait1_no_window(self, echo_model):
        trace = decode_simultaneous(echo_model, WaitKPolicy(1), ('a', 'b', 'c'), window=0, beam_size=1)
        assert trace == CommitTrace.from_rows([(('a',), 1), (('a', 'b'), 2), (('a', 'b', 'c'), 3)])

    @pytest.mark.parametrize('window', [1, 2, 5])
    def test_echo_ignores_window(self, echo_model, window):
        source = ('d', 'c', 'b', 'a')
        plain = decode_simultaneous(echo_model, WaitKPolicy(1), source, window=0, beam_size=1)
        windowed = decode_simultaneous(echo_model, WaitKPolicy(1), source, window=window, beam_size=1)
        assert windowed == plain
        assert windowed.final_output == source

    def test_committed_guesses_wait_for_the_tail(self, sharp_model):
        # wait-1 commits each guess before its lookahead arrives; only the tail fixes the last one
        trace = decode_simultaneous(sharp_model, WaitKPolicy(1), ('a', 'b', 'c', 'd'), window=2, beam_size=1)
        assert trace == CommitTrace.from_rows([
            ((UNK,) * 3, 1),
            ((UNK,) * 4, 2),
            ((UNK,) * 5, 3),
            ((UNK, UNK, UNK, 'D'), 4),
        ])
        assert trace_validate(trace, window=2) is None

    def test_window_guess_corrected_on_next_read(self, sharp_model):
        source = ('a', 'b', 'c', 'd', 'e')
        trace = decode_simultaneous(sharp_model, WaitKPolicy(3), source, window=2, beam_size=1)
        assert trace == CommitTrace.from_rows([
            ((), 0),
            ((), 0),
            (('A', UNK, UNK), 1),
            (('A', 'B', UNK, UNK), 2),
            (('A', 'B', 'C', 'D', 'E'), 5),
        ])
        assert trace.displayed_at(3)[1] == UNK
        assert trace.displayed_at(4)[1] == 'B'
        assert trace.snapshots[3].committed[:1] == trace.snapshots[2].committed
        assert last_revision(trace).lr[1] == 4
        assert trace_validate(trace, window=2) is None

    @pytest.mark.parametrize('beam_size', [1, 3])
    def test_threshold_beam_keeps_full_length(self, lookahead_model, beam_size):
        for source in (tuple('abcdea'), tuple('eeab'), tuple('cabbadec')):
            trace = decode_simultaneous(lookahead_model, ThresholdPolicy(0.5), source, window=0, beam_size=beam_size)
            assert len(trace.final_output) >= len(source)
            assert trace_validate(trace, window=0) is None

    def test_wait_k_reads_ahead(self, sharp_model):
        trace = decode_simultaneous(sharp_model, WaitKPolicy(3), ('a', 'b', 'c', 'd'), window=1, beam_size=1)
        assert trace.snapshots[0].displayed == ()
        assert trace.snapshots[1].displayed == ()
        assert trace.snapshots[2].displayed == ('A', UNK)
        assert trace.snapshots[2].committed_len == 1
        assert trace.final_output == ('A', 'B', 'C', 'D')

    def test_window_revision_replaces_guess(self):
        script = {
            (1, False, ()): 'his',
            (1, False, ('his',)): 'welcome',
            (1, False, ('his', 'welcome')): 'to',
            (2, False, ('his',)): 'agreement',
            (2, False, ('his', 'agreement')): 'to',
            (2, False, ('his', 'agreement', 'to')): 'President',
            (3, False, ('his', 'agreement')): 'to',
            (3, False, ('his', 'agreement', 'to')): 'President',
            (3, False, ('his', 'agreement', 'to', 'President')): 'Trump',
            (4, True, ('his', 'agreement', 'to')): 'President',
        }
        source = ('x1', 'x2', 'x3', 'x4')
        trace = decode_simultaneous(ScriptedModel(script), WaitKPolicy(1), source, window=2, beam_size=1)
        assert trace == CommitTrace.from_rows([
            (('his', 'welcome', 'to'), 1),
            (('his', 'agreement', 'to', 'President'), 2),
            (('his', 'agreement', 'to', 'President', 'Trump'), 3),
            (('his', 'agreement', 'to', 'President'), 4),
        ])
        assert trace_validate(trace, window=2) is None

    def test_threshold_policy_on_echo(self, echo_model):
        trace = decode_simultaneous(echo_model, ThresholdPolicy(0.5), ('a', 'b', 'c'), window=2, beam_size=1)
        assert [s.committed_len for s in trace.snapshots] == [1, 2, 3]
        assert trace.final_output == ('a', 'b', 'c')

    def test_threshold_commits_several_per_read(self, sharp_model):
        # rho = 0 with k_min = 2 writes everything the model is sure of at once
        policy = ThresholdPolicy(0.0, k_min=2)
        trace = decode_simultaneous(sharp_model, policy, ('a', 'b', 'c', 'd', 'e'), window=0, beam_size=1)
        assert trace.snapshots[0].displayed == ()
        assert [s.committed_len for s in trace.snapshots] == [0, 4, 5, 6, 6]
        assert trace.final_output == (UNK,) * 6

    def test_error_position(self, lookahead_model):
        with pytest.raises(DecodeError) as info:
            decode_simultaneous(lookahead_model, WaitKPolicy(1), ('a', 'z', 'b'), window=1, beam_size=1)
        assert info.value.source_step == 2
        assert info.value.target_step == 2

    def test_rejects_bad_arguments(self, echo_model):
        with pytest.raises(ValueError):
            decode_simultaneous(echo_model, WaitKPolicy(1), (), window=0, beam_size=1)
        with pytest.raises(ValueError):
            decode_simultaneous(echo_model, WaitKPolicy(1), ('a',), window=-1, beam_size=1)
        with pytest.raises(ValueError):
            decode_simultaneous(echo_model, WaitKPolicy(1), ('a',), window=0, beam_size=0)


class TestDecoderProperties:
    def test_committed_prefix_never_changes(self, table):
        models = [m for m in make_models(table) if m.sharpness < 1]
        rng = np.random.default_rng(11)
        for i, source in enumerate(random_instances(120, seed=3)):
            model = models[i % len(models)]
            window = int(rng.integers(0, 6))
            beam = int(rng.choice([1, 3, 5]))
            policy = WaitKPolicy(int(rng.integers(1, 4))) if i % 2 else ThresholdPolicy(float(rng.choice([0.3, 0.6, 0.9])))
            trace = decode_simultaneous(model, policy, source, window=window, beam_size=beam)
            assert trace_validate(trace, window=window) is None, (source, policy, window, beam)
            assert trace.snapshots[-1].committed_len == len(trace.final_output)

    def test_greedy_output_independent_of_window(self, table):
        models = make_models(table)
        for i, source in enumerate(random_instances(200)):
            model = models[i % len(models)]
            policy = WaitKPolicy(1 + i % 3) if i % 2 else ThresholdPolicy((0.3, 0.6, 0.9)[i % 3])
            plain = decode_simultaneous(model, policy, source, window=0, beam_size=1)
            windowed = decode_simultaneous(model, policy, source, window=2, beam_size=1)
            assert windowed.final_output == plain.final_output
            assert [s.committed for s in windowed.snapshots] == [s.committed for s in plain.snapshots]

    def test_window_never_delays(self, table):
        models = make_models(table)
        strict = 0
        for i, source in enumerate(random_instances(200, seed=5)):
            model = models[i % len(models)]
            policy = WaitKPolicy(1 + i % 3)
            plain = decode_simultaneous(model, policy, source, window=0, beam_size=1)
            for window in (1, 3):
                windowed = decode_simultaneous(model, policy, source, window=window, beam_size=1)
                assert windowed.final_output == plain.final_output
                assert all(a <= b for a, b in zip(last_revision(windowed).lr_bar, last_revision(plain).lr_bar))
                assert ral(windowed) <= ral(plain) + 1e-9
                if ral(windowed) < ral(plain) - 1e-9:
                    strict += 1
        assert strict > 0

    def test_correct_window_lowers_latency(self):
        # d = 0: the window shows the next token as soon as its source word arrives
        model = LookaheadTransducerModel({'a': 'A', 'b': 'B', 'c': 'C'}, lookahead=0, sharpness=0.7)
        source = ('a', 'b', 'c', 'a', 'b')
        plain = decode_simultaneous(model, WaitKPolicy(2), source, window=0, beam_size=1)
        windowed = decode_simultaneous(model, WaitKPolicy(2), source, window=1, beam_size=1)
        assert ral(plain) == pytest.approx(2.0)
        assert ral(windowed) == pytest.approx(6 / 5)

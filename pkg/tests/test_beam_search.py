import itertools
import math

import pytest

from decoder import Beam, Hypothesis, beam_advance, beam_step
from models import LookaheadTransducerModel
from trace_core import EOS


@pytest.fixture
def small_model():
    """Three target types plus EOS, history-dependent through the guess count."""
    return LookaheadTransducerModel({'a': 'A', 'b': 'B', 'c': 'A'}, lookahead=1, default_token='D', sharpness=0.6)


def greedy(model, source, prefix, steps):
    tokens = tuple(prefix)
    for _ in range(steps):
        token = model.next_distribution(source, tokens).top()[0]
        if token == EOS:
            break
        tokens += (token,)
    return tokens


def exhaustive_best(model, source, depth):
    """Best (score, key) over every string of `depth` steps; EOS ends a string."""
    outcomes = sorted(model.vocabulary | {EOS})
    best = None
    for path in itertools.product(outcomes, repeat=depth):
        tokens, logprob, finished = (), 0.0, False
        for token in path:
            if finished:
                break
            p = model.next_distribution(source, tokens).prob(token)
            if p <= 0:
                logprob = None
                break
            logprob += math.log(p)
            if token == EOS:
                finished = True
            else:
                tokens += (token,)
        if logprob is None:
            continue
        hyp = Hypothesis(tokens, logprob, finished)
        if best is None or hyp.sort_key() < best.sort_key():
            best = hyp
    return best


class TestBeamStep:
    def test_width_one_is_greedy(self, sharp_model):
        beam = beam_step(Beam.initial(), 1, sharp_model, ('a', 'b', 'c'))
        assert beam.top.tokens == greedy(sharp_model, ('a', 'b', 'c'), (), 1)

    def test_no_pruning_keeps_all_extensions(self, small_model):
        beam = beam_step(Beam.initial(), len(small_model.vocabulary) + 1, small_model, ('a',))
        extensions = {h.tokens + ((EOS,) if h.finished else ()) for h in beam}
        # the source continues, so EOS is not among them
        assert extensions == {('A',), ('B',), ('D',)}

    def test_sorted_by_score(self, small_model):
        beam = beam_step(Beam.initial(), 4, small_model, ('a',))
        scores = [h.logprob for h in beam]
        assert scores == sorted(scores, reverse=True)
        assert all(h.logprob <= 0 for h in beam)

    def test_finished_hypotheses_carried_over(self, small_model):
        done = Hypothesis(('A',), -0.01, finished=True)
        beam = beam_step(Beam(items=(done,)), 2, small_model, ('a',))
        assert beam.items == (done,)

    def test_two_steps_width_two(self, small_model):
        # complete source: A (0.6) leads B and D (0.2 each); after A, AB (0.36) leads AA and AD (0.12)
        beam = beam_advance(Beam.initial(), 2, 2, small_model, ('a', 'b', EOS))
        assert [(h.tokens, h.finished) for h in beam] == [(('A', 'B'), False), (('A', 'A'), False)]
        assert beam.top.logprob == pytest.approx(2 * math.log(0.6))
        assert beam.items[1].logprob == pytest.approx(math.log(0.6) + math.log(0.2))

    def test_blocked_eos_is_flagged(self):
        # one visible token, three targets already: EOS is the only real option
        model = LookaheadTransducerModel({'a': 'A', 'b': 'B'}, lookahead=2, sharpness=0.9)
        beam = beam_step(Beam.initial(('UNK', 'UNK', 'UNK')), 1, model, ('a',), block_eos=True)
        assert not beam.top.finished
        assert beam.top.eos_suppressed


class TestBeamAdvance:
    def test_zero_steps_is_identity(self, small_model):
        beam = Beam.initial(('A',))
        assert beam_advance(beam, 0, 3, small_model, ('a',)) is beam

    def test_two_steps_is_two_single_steps(self, small_model):
        source = ('a', 'c')
        start = Beam.initial()
        twice = beam_step(beam_step(start, 3, small_model, source), 3, small_model, source)
        assert beam_advance(start, 2, 3, small_model, source) == twice

    def test_width_one_three_steps_is_greedy(self, lookahead_model):
        source = ('a', 'b', 'c', 'd')
        beam = beam_advance(Beam.initial(), 3, 1, lookahead_model, source)
        assert beam.top.tokens == greedy(lookahead_model, source, (), 3)

    @pytest.mark.parametrize('n', range(1, 5))
    def test_matches_exhaustive_search(self, small_model, n):
        outcomes = len(small_model.vocabulary) + 1
        for source in itertools.product('abc', repeat=n):
            for complete in (False, True):
                src = source + ((EOS,) if complete else ())
                for depth in range(1, 5):
                    beam = beam_advance(Beam.initial(), depth, outcomes ** depth, small_model, src)
                    best = exhaustive_best(small_model, src, depth)
                    assert beam.top.tokens == best.tokens
                    assert beam.top.finished == best.finished
                    assert beam.top.logprob == pytest.approx(best.logprob)

"""
Opportunistic decoding with timely correction.

At every commit step the decoder searches n + w tokens ahead from the
committed prefix. The first n tokens become irreversible; the next w are
shown as a revisable suffix that replaces whatever suffix was shown before.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import List, Sequence, Tuple

from models import ModelError
from policies import READ, DecodingPolicy, PolicyState
from trace_core import EOS, CommitTrace, Sentence, Snapshot, is_complete

from .beam_search import DEFAULT_MAX_LEN_RATIO, Beam, DecodeError, beam_advance, decode_to_eos

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecoderState:
    """Committed output, the current revisable suffix and the snapshots so far."""

    committed: Sentence = ()
    revisable: Sentence = ()
    source_read: int = 0
    snapshots: Tuple[Snapshot, ...] = field(default=())

    @property
    def displayed(self) -> Sentence:
        return self.committed + self.revisable

    def snapshot(self) -> Snapshot:
        return Snapshot(
            source_step=self.source_read,
            displayed=self.displayed,
            committed_len=len(self.committed)
        )

    def with_snapshot(self) -> 'DecoderState':
        return replace(self, snapshots=self.snapshots + (self.snapshot(),))


def commit_step(
    state: DecoderState,
    model,
    source_prefix: Sentence,
    n: int,
    window: int,
    beam_size: int,
    max_len: int
) -> Tuple[DecoderState, Sentence, Sentence]:
    """
    Commit n tokens and refresh the revisable window.

    Args:
        state: Current decoder state
        model: IncrementalModel
        source_prefix: Visible source (EOS-terminated once complete)
        n: Tokens to commit
        window: w, revisable tokens to show after them
        beam_size: b
        max_len: Target length cap

    Returns:
        (new state, newly committed tokens, new revisable suffix)
    """
    if n < 1:
        raise ValueError(f"commit batch must be >= 1, got {n}")
    if window < 0:
        raise ValueError(f"window must be >= 0, got {window}")
    committed = state.committed
    if len(committed) + n > max_len:
        raise DecodeError(f"commit of {n} tokens would pass the length cap of {max_len}",
                          target_step=len(committed) + 1)

    complete = is_complete(source_prefix)
    depth = n + min(window, max_len - len(committed) - n)
    beam = beam_advance(
        Beam.initial(committed), depth, beam_size, model, source_prefix,
        block_eos_steps=0 if complete else n
    )
    best = beam.top
    new_tokens = best.tokens[len(committed):]
    newly_committed = new_tokens[:n]
    new_revisable = new_tokens[n:n + window]
    if best.eos_suppressed:
        new_revisable = ()

    new_state = replace(
        state,
        committed=committed + newly_committed,
        revisable=new_revisable
    )
    return new_state, newly_committed, new_revisable


def _plan_write_run(
    policy: DecodingPolicy,
    model,
    state: DecoderState,
    source: Sentence,
    max_len: int
) -> int:
    """Length of the WRITE run the policy issues before its next READ."""
    run = 0
    probe_prefix = state.committed
    source_prefix = source[:state.source_read]
    while len(state.committed) + run < max_len:
        decision = policy.decide(PolicyState(
            source_read=state.source_read,
            committed_len=len(state.committed) + run,
            source_len=len(source),
            model=model,
            source_prefix=source_prefix,
            committed_prefix=probe_prefix,
            writes_since_read=run
        ))
        if decision == READ:
            break
        run += 1
        if policy.probes_model:
            probe = model.next_distribution(source_prefix, probe_prefix).top()[0]
            if probe == EOS:
                break
            probe_prefix = probe_prefix + (probe,)
    return run


def decode_simultaneous(
    model,
    policy: DecodingPolicy,
    source: Sequence[str],
    window: int,
    beam_size: int,
    max_len_ratio: float = DEFAULT_MAX_LEN_RATIO
) -> CommitTrace:
    """
    Stream one source sentence through the READ/WRITE loop.

    Args:
        model: IncrementalModel
        policy: Decoding policy
        source: Source tokens (non-empty, without EOS)
        window: w >= 0
        beam_size: b >= 1
        max_len_ratio: Target length cap relative to the source length

    Returns:
        CommitTrace with one snapshot per source token
    """
    source = tuple(source)
    if not source:
        raise ValueError("source must not be empty")
    if window < 0:
        raise ValueError(f"window must be >= 0, got {window}")
    if beam_size < 1:
        raise ValueError(f"beam size must be >= 1, got {beam_size}")

    n_source = len(source)
    max_len = int(max_len_ratio * n_source)
    state = DecoderState()

    for s in range(1, n_source + 1):
        state = replace(state, source_read=s)
        try:
            if s < n_source:
                run = _plan_write_run(policy, model, state, source, max_len)
                if run > 0:
                    state, committed, revisable = commit_step(
                        state, model, source[:s], run, window, beam_size, max_len
                    )
                    logger.debug(f"s={s}: committed {list(committed)}, window {list(revisable)}")
            else:
                # Tail: whole source visible, write until EOS
                best = decode_to_eos(
                    Beam.initial(state.committed), beam_size, model, source + (EOS,), max_len
                )
                state = replace(state, committed=best.tokens, revisable=())
        except DecodeError as e:
            raise DecodeError(
                e.message,
                source_step=s,
                target_step=e.target_step if e.target_step is not None else len(state.committed) + 1
            ) from e
        except ModelError as e:
            raise DecodeError(str(e), source_step=s, target_step=len(state.committed) + 1) from e

        # Snapshot for s, taken after everything this reveal triggered
        state = state.with_snapshot()

    return CommitTrace(source_len=n_source, snapshots=state.snapshots)

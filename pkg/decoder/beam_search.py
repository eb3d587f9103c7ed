"""
Prefix-constrained beam search.

`beam_step` is the one-step transition (keep the top b expansions),
`beam_advance` composes it i times, and `decode_to_eos` keeps stepping
until the best hypothesis has produced EOS.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from trace_core import EOS, Sentence, is_complete

logger = logging.getLogger(__name__)

DEFAULT_MAX_LEN_RATIO = 3


class DecodeError(Exception):
    """Decoding failed; carries the (source step, target step) position when known."""

    def __init__(self, message: str, source_step: Optional[int] = None, target_step: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.source_step = source_step
        self.target_step = target_step

    def __str__(self) -> str:
        if self.source_step is None and self.target_step is None:
            return self.message
        return f"{self.message} (s={self.source_step}, t={self.target_step})"


@dataclass(frozen=True)
class Hypothesis:
    """
    A scored target prefix.

    `tokens` never contains EOS; `finished` records that EOS was generated
    (its log-probability is included in `logprob`). `eos_suppressed` is set
    when EOS was the model's best choice at a slot where it was blocked.
    """

    tokens: Sentence
    logprob: float = 0.0
    finished: bool = False
    eos_suppressed: bool = False

    def sort_key(self):
        return (-self.logprob, self.tokens + ((EOS,) if self.finished else ()))


@dataclass(frozen=True)
class Beam:
    """At most b hypotheses, best first."""

    items: Tuple[Hypothesis, ...]

    def __post_init__(self):
        object.__setattr__(self, 'items', tuple(sorted(self.items, key=Hypothesis.sort_key)))

    @classmethod
    def initial(cls, prefix: Sentence = ()) -> 'Beam':
        """B^0: the given prefix with probability 1."""
        return cls(items=(Hypothesis(tokens=tuple(prefix)),))

    @property
    def top(self) -> Hypothesis:
        return self.items[0]

    @property
    def all_finished(self) -> bool:
        return all(h.finished for h in self.items)

    def __iter__(self) -> Iterator[Hypothesis]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)


def beam_step(beam: Beam, b: int, model, source_prefix: Sentence, *, block_eos: bool = False) -> Beam:
    """
    Expand every unfinished hypothesis by one token and keep the top b.

    Args:
        beam: Current beam
        b: Beam width
        model: IncrementalModel
        source_prefix: Source tokens visible at this step
        block_eos: Exclude EOS from the expansions

    Returns:
        New beam; finished hypotheses are carried over unchanged
    """
    if b < 1:
        raise ValueError(f"beam size must be >= 1, got {b}")
    candidates = []
    for hyp in beam:
        if hyp.finished:
            candidates.append(hyp)
            continue
        distribution = model.next_distribution(source_prefix, hyp.tokens)
        suppressed = hyp.eos_suppressed or (block_eos and distribution.top()[0] == EOS)
        for token, p in distribution:
            if p <= 0.0:
                continue
            logprob = min(hyp.logprob + math.log(p), 0.0)
            if token == EOS:
                if block_eos:
                    continue
                candidates.append(Hypothesis(hyp.tokens, logprob, True, hyp.eos_suppressed))
            else:
                candidates.append(Hypothesis(hyp.tokens + (token,), logprob, False, suppressed))

    if not candidates:
        raise DecodeError("model offers no continuation other than EOS")
    candidates.sort(key=Hypothesis.sort_key)
    return Beam(items=tuple(candidates[:b]))


def beam_advance(
    beam: Beam,
    i: int,
    b: int,
    model,
    source_prefix: Sentence,
    *,
    block_eos_steps: int = 0
) -> Beam:
    """i-fold composition of beam_step; EOS is blocked in the first `block_eos_steps` steps."""
    if i < 0:
        raise ValueError(f"i must be >= 0, got {i}")
    for step in range(i):
        if beam.all_finished:
            break
        beam = beam_step(beam, b, model, source_prefix, block_eos=step < block_eos_steps)
    return beam


def decode_to_eos(beam: Beam, b: int, model, source_prefix: Sentence, max_len: int) -> Hypothesis:
    """
    Run beam search until the best hypothesis is finished.

    Scores only decrease with length, so a finished top hypothesis cannot be
    overtaken.

    Raises:
        DecodeError: if the best hypothesis passes max_len tokens without EOS
    """
    while not beam.top.finished:
        if len(beam.top.tokens) > max_len:
            raise DecodeError(f"no EOS within the length cap of {max_len} tokens",
                              target_step=len(beam.top.tokens) + 1)
        beam = beam_step(beam, b, model, source_prefix)
    return beam.top


def full_sentence_decode(
    model,
    source: Sequence[str],
    beam_size: int = 1,
    max_len_ratio: float = DEFAULT_MAX_LEN_RATIO
) -> Sentence:
    """
    Translate a complete source with beam search.

    Args:
        model: IncrementalModel
        source: Source tokens (non-empty, without EOS)
        beam_size: b
        max_len_ratio: Target length cap relative to the source length

    Returns:
        Best complete hypothesis, EOS stripped
    """
    source = tuple(source)
    if is_complete(source):
        source = source[:-1]
    if not source:
        raise ValueError("source must not be empty")
    max_len = int(max_len_ratio * len(source))
    best = decode_to_eos(Beam.initial(), beam_size, model, source + (EOS,), max_len)
    return best.tokens

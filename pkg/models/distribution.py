"""Next-token probability distributions."""

import math
from dataclasses import dataclass
from typing import Dict, Iterator, Mapping, Sequence, Tuple

import numpy as np

NORMALIZATION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Distribution:
    """
    Probability distribution over target tokens (EOS included).

    Entries are kept sorted by probability descending, ties broken by token
    text, so iteration order is deterministic. Tokens that are not listed
    have probability 0.
    """

    entries: Tuple[Tuple[str, float], ...]

    def __post_init__(self):
        entries = tuple(sorted(((str(t), float(p)) for t, p in self.entries), key=lambda e: (-e[1], e[0])))
        tokens = [t for t, _ in entries]
        if len(set(tokens)) != len(tokens):
            raise ValueError("Duplicate tokens in distribution")
        if any(p < 0 or math.isnan(p) for _, p in entries):
            raise ValueError("Negative or NaN probability in distribution")
        total = math.fsum(p for _, p in entries)
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise ValueError(f"Probabilities sum to {total}, not 1")
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def from_probabilities(cls, probabilities: Mapping[str, float], normalize: bool = False) -> 'Distribution':
        """
        Build from a token -> probability map.

        Args:
            probabilities: Probability per token
            normalize: Rescale so the values sum to 1
        """
        items = [(t, float(p)) for t, p in probabilities.items()]
        if normalize:
            values = np.array([p for _, p in items], dtype=float)
            total = values.sum()
            if total <= 0:
                raise ValueError("Cannot normalize an all-zero distribution")
            items = [(t, float(p)) for (t, _), p in zip(items, values / total)]
        return cls(entries=tuple(items))

    @classmethod
    def from_logprobs(cls, tokens: Sequence[str], logprobs: Sequence[float]) -> 'Distribution':
        """Renormalize (possibly truncated) natural-log scores over the given tokens."""
        if len(tokens) != len(logprobs):
            raise ValueError("tokens and logprobs differ in length")
        if not tokens:
            raise ValueError("Empty distribution")
        scores = np.asarray(logprobs, dtype=float)
        if not np.all(np.isfinite(scores) | (scores == -np.inf)) or np.all(scores == -np.inf):
            raise ValueError("Log-probabilities must be finite or -inf, with at least one finite")
        weights = np.exp(scores - scores.max())
        weights /= weights.sum()
        return cls(entries=tuple(zip(tokens, (float(w) for w in weights))))

    def __iter__(self) -> Iterator[Tuple[str, float]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def tokens(self) -> Tuple[str, ...]:
        return tuple(t for t, _ in self.entries)

    def top(self) -> Tuple[str, float]:
        """Most likely token and its probability."""
        return self.entries[0]

    def prob(self, token: str) -> float:
        for t, p in self.entries:
            if t == token:
                return p
        return 0.0

    def logprob(self, token: str) -> float:
        p = self.prob(token)
        return math.log(p) if p > 0 else -math.inf

    def as_dict(self) -> Dict[str, float]:
        return dict(self.entries)

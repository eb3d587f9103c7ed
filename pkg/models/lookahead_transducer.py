"""
Deterministic synthetic translation models.

LookaheadTransducerModel maps each source token to one target token through a
table, but only trusts position t once the source has run d tokens past it.
Before that it guesses `default_token`, which is the mistake later corrected
by the decoder. EchoModel is the identity transducer.
"""

import logging
from typing import Dict, FrozenSet, Mapping, Optional

from trace_core import EOS, Sentence, check_token, is_complete, strip_eos

from .distribution import Distribution
from .incremental_model import IncrementalModel, UnknownTokenError

logger = logging.getLogger(__name__)

DEFAULT_HINT = 0.5
DEFAULT_CONFUSION = 2.2


class LookaheadTransducerModel(IncrementalModel):
    """Table transducer with a lookahead requirement."""

    def __init__(
        self,
        table: Mapping[str, str],
        lookahead: int = 1,
        default_token: str = "UNK",
        sharpness: float = 1.0,
        hint: float = DEFAULT_HINT,
        confusion: float = DEFAULT_CONFUSION
    ):
        """
        Initialize the transducer.

        Args:
            table: Source token -> target token
            lookahead: d, source tokens needed beyond position t before trusting it
            default_token: Target token emitted as a guess
            sharpness: q, probability mass on the preferred token (0.5 < q <= 1)
            hint: Share of the leftover mass given to the literal translation
                of a visible source token while guessing
            confusion: Growth factor of the leftover mass per guess already
                sitting on a visible source position (1 disables it)
        """
        if not table:
            raise ValueError("Translation table must not be empty")
        if lookahead < 0:
            raise ValueError(f"lookahead must be >= 0, got {lookahead}")
        if not 0.5 < sharpness <= 1.0:
            raise ValueError(f"sharpness must be in (0.5, 1], got {sharpness}")
        if not 0.0 <= hint < 1.0:
            raise ValueError(f"hint must be in [0, 1), got {hint}")
        if confusion < 1.0:
            raise ValueError(f"confusion must be >= 1, got {confusion}")

        self.table: Dict[str, str] = {
            check_token(src): check_token(tgt) for src, tgt in table.items()
        }
        self.lookahead = lookahead
        self.default_token = check_token(default_token)
        self.sharpness = sharpness
        self.hint = hint
        self.confusion = confusion

        self._vocabulary = frozenset(self.table.values()) | {self.default_token}
        self._outcomes = tuple(sorted(self._vocabulary | {EOS}))

        # Largest share any non-preferred token can receive, relative to the leftover mass;
        # the fewest rivals occur while EOS is ruled out
        n_open = len(self._vocabulary)
        rival_share = max(
            self.hint,
            (1.0 - self.hint) / max(n_open - 2, 1),
            1.0 / max(n_open - 1, 1)
        )
        self._max_leftover = max(1.0 / (1.0 + rival_share) - 0.01, 1.0 - self.sharpness)

    @property
    def vocabulary(self) -> FrozenSet[str]:
        return self._vocabulary

    def translate(self, token: str) -> str:
        try:
            return self.table[token]
        except KeyError:
            raise UnknownTokenError(token) from None

    def oracle(self, source: Sentence) -> Sentence:
        """Tablewise translation of a full source."""
        return tuple(self.translate(tok) for tok in strip_eos(tuple(source)))

    def _preferred(self, visible: Sentence, complete: bool, t: int):
        """Preferred token at target position t and the literal hint, if any."""
        m = len(visible)
        horizon = m if complete else m + self.lookahead
        if t > horizon:
            return EOS, None
        if complete or t + self.lookahead <= m:
            return self.translate(visible[t - 1]), None
        hinted = None
        if t <= m:
            literal = self.translate(visible[t - 1])
            if literal != self.default_token:
                hinted = literal
        return self.default_token, hinted

    def _guess_count(self, visible: Sentence, target_prefix: Sentence) -> int:
        """Guesses already placed on source positions that are visible."""
        count = 0
        for j, token in enumerate(target_prefix[:len(visible)]):
            if token == self.default_token and self.translate(visible[j]) != self.default_token:
                count += 1
        return count

    def next_distribution(self, source_prefix: Sentence, target_prefix: Sentence) -> Distribution:
        source_prefix = tuple(source_prefix)
        target_prefix = tuple(target_prefix)
        complete = is_complete(source_prefix)
        visible = strip_eos(source_prefix)
        for token in visible:
            self.translate(token)

        t = len(target_prefix) + 1
        preferred, hinted = self._preferred(visible, complete, t)

        leftover = (1.0 - self.sharpness) * self.confusion ** self._guess_count(visible, target_prefix)
        leftover = min(leftover, self._max_leftover)

        # The sentence cannot end before the horizon
        outcomes = self._outcomes
        if preferred != EOS:
            outcomes = tuple(tok for tok in outcomes if tok != EOS)

        probabilities = {tok: 0.0 for tok in outcomes}
        probabilities[preferred] = 1.0 - leftover
        rivals = [tok for tok in outcomes if tok not in (preferred, hinted)]
        spread = leftover
        if hinted is not None:
            probabilities[hinted] = self.hint * leftover if rivals else leftover
            spread = (1.0 - self.hint) * leftover
        if rivals:
            for tok in rivals:
                probabilities[tok] = spread / len(rivals)
        elif hinted is None:
            probabilities[preferred] = 1.0

        return Distribution.from_probabilities(
            {tok: p for tok, p in probabilities.items() if p > 0}
        )


class EchoModel(LookaheadTransducerModel):
    """Identity transducer: copies each source token as soon as it is visible."""

    def __init__(self, vocabulary):
        vocabulary = sorted(set(vocabulary))
        if not vocabulary:
            raise ValueError("EchoModel needs a non-empty vocabulary")
        super().__init__(
            table={tok: tok for tok in vocabulary},
            lookahead=0,
            default_token=vocabulary[0],
            sharpness=1.0
        )


def build_lookahead_model(params: Mapping, table: Optional[Mapping[str, str]] = None) -> LookaheadTransducerModel:
    """Build a transducer from a parameter mapping (as stored in model.json)."""
    return LookaheadTransducerModel(
        table=table if table is not None else params['table'],
        lookahead=int(params.get('lookahead', 1)),
        default_token=params.get('default_token', 'UNK'),
        sharpness=float(params.get('sharpness', 1.0)),
        hint=float(params.get('hint', DEFAULT_HINT)),
        confusion=float(params.get('confusion', DEFAULT_CONFUSION))
    )

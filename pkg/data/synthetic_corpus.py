"""
Generate synthetic parallel corpora for the lookahead transducer.

Source sentences are drawn over a small alphabet; each reference is the
tablewise (oracle) translation of its source. Everything is reproducible
from the seed.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from models.lookahead_transducer import DEFAULT_CONFUSION, DEFAULT_HINT, LookaheadTransducerModel
from trace_core import Sentence

logger = logging.getLogger(__name__)

DEFAULT_ALPHABET = ('a', 'b', 'c', 'd', 'e')
DEFAULT_TOKEN = "UNK"

SOURCE_FILE = 'source.txt'
REFERENCE_FILE = 'reference.txt'
MODEL_FILE = 'model.json'


class SyntheticCorpusGenerator:
    """Write source.txt, reference.txt and model.json into a directory."""

    def __init__(
        self,
        output_dir,
        alphabet: Sequence[str] = DEFAULT_ALPHABET,
        lookahead: int = 2,
        sharpness: float = 0.7,
        default_token: str = DEFAULT_TOKEN
    ):
        """
        Initialize the generator.

        Args:
            output_dir: Directory for the corpus files
            alphabet: Source token types
            lookahead: d of the transducer stored in model.json
            sharpness: q of the transducer stored in model.json
            default_token: Guess token of the transducer
        """
        self.output_dir = Path(output_dir)
        self.alphabet = tuple(sorted(set(alphabet)))
        if not self.alphabet:
            raise ValueError("alphabet must not be empty")
        self.lookahead = lookahead
        self.sharpness = sharpness
        self.default_token = default_token
        self.table = self.build_table()
        self.model = LookaheadTransducerModel(
            table=self.table,
            lookahead=lookahead,
            default_token=default_token,
            sharpness=sharpness
        )

    def build_table(self) -> Dict[str, str]:
        """Upper-case each source type; the guess token stays out of the image."""
        table = {}
        for token in self.alphabet:
            target = token.upper()
            if target == token or target == self.default_token:
                target = f"{target}_T"
            table[token] = target
        if len(set(table.values())) != len(table):
            raise ValueError("alphabet maps two source types to one target token")
        return table

    def sample_sentences(self, seed: int, n_sentences: int, len_range: Tuple[int, int]) -> List[Sentence]:
        """Draw n source sentences with lengths in [lo, hi]."""
        if n_sentences < 1:
            raise ValueError(f"n_sentences must be >= 1, got {n_sentences}")
        lo, hi = len_range
        if lo < 1 or hi < lo:
            raise ValueError(f"invalid length range {len_range}")
        rng = np.random.default_rng(seed)
        lengths = rng.integers(lo, hi + 1, size=n_sentences)
        alphabet = np.array(self.alphabet)
        return [tuple(str(tok) for tok in rng.choice(alphabet, size=int(n))) for n in lengths]

    def generate(self, seed: int, n_sentences: int, len_range: Tuple[int, int] = (4, 8)) -> Dict[str, Path]:
        """
        Write a corpus.

        Args:
            seed: RNG seed
            n_sentences: Number of sentence pairs
            len_range: Inclusive source length range

        Returns:
            Paths of the written files
        """
        logger.info(f"Generating {n_sentences} sentences (seed={seed}, lengths {len_range[0]}-{len_range[1]})")
        sources = self.sample_sentences(seed, n_sentences, len_range)
        references = [self.model.oracle(src) for src in sources]

        self.output_dir.mkdir(parents=True, exist_ok=True)
        paths = {
            'source': self.output_dir / SOURCE_FILE,
            'reference': self.output_dir / REFERENCE_FILE,
            'model': self.output_dir / MODEL_FILE,
        }
        _write_lines(paths['source'], sources)
        _write_lines(paths['reference'], references)
        with open(paths['model'], 'w', encoding='utf-8') as f:
            json.dump({
                'name': 'lookahead',
                'table': self.table,
                'lookahead': self.lookahead,
                'default_token': self.default_token,
                'sharpness': self.sharpness,
                'hint': DEFAULT_HINT,
                'confusion': DEFAULT_CONFUSION,
                'seed': seed,
            }, f, indent=2, sort_keys=True)
            f.write("\n")

        logger.info(f"✓ Corpus written to {self.output_dir}")
        return paths


def _write_lines(path: Path, sentences: Iterable[Sentence]):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for sentence in sentences:
            f.write(" ".join(sentence) + "\n")


def gen_synthetic_corpus(
    seed: int,
    n_sentences: int,
    len_range: Tuple[int, int],
    output_dir,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
    lookahead: int = 2,
    sharpness: float = 0.7,
    default_token: str = DEFAULT_TOKEN
) -> Dict[str, Path]:
    """Generate a synthetic corpus and its oracle references."""
    generator = SyntheticCorpusGenerator(
        output_dir,
        alphabet=alphabet,
        lookahead=lookahead,
        sharpness=sharpness,
        default_token=default_token
    )
    return generator.generate(seed, n_sentences, len_range)

"""Corpus BLEU for the quality axis."""

import logging
from typing import Sequence

import sacrebleu

from trace_core import Sentence

from .revision_latency import MetricsError

logger = logging.getLogger(__name__)


def bleu(hypotheses: Sequence[Sentence], reference_sets: Sequence[Sequence[Sentence]]) -> float:
    """
    Corpus BLEU-4 on pre-tokenized text.

    Add-one smoothing applies to the n >= 2 precisions; no further
    tokenization is done.

    Args:
        hypotheses: One token sequence per sentence
        reference_sets: One stream per reference file, each aligned with hypotheses

    Returns:
        BLEU in [0, 100]
    """
    if not hypotheses:
        raise MetricsError("empty hypothesis corpus")
    if not reference_sets:
        raise MetricsError("no reference sets")
    for i, references in enumerate(reference_sets):
        if len(references) != len(hypotheses):
            raise MetricsError(
                f"reference set {i} has {len(references)} sentences, expected {len(hypotheses)}"
            )

    result = sacrebleu.corpus_bleu(
        [" ".join(h) for h in hypotheses],
        [[" ".join(r) for r in references] for references in reference_sets],
        smooth_method='add-k',
        smooth_value=1,
        tokenize='none',
        force=True
    )
    return float(result.score)

"""Corpus-level metric reports."""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence

import pandas as pd

from trace_core import CommitTrace, Sentence

from .quality import bleu
from .revision_latency import MetricsError, al, ral
from .revision_rate import revision_counts

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SentenceMetrics:
    """Latency and revision figures for one sentence."""

    index: int
    source_len: int
    output_len: int
    ral: float
    al: float
    revision_numerator: int
    revision_denominator: int

    @property
    def revision_rate(self) -> float:
        if self.revision_denominator == 0:
            return 0.0
        return self.revision_numerator / self.revision_denominator


@dataclass(frozen=True)
class MetricsReport:
    """
    Corpus metrics.

    RAL and AL are unweighted means over sentences, the revision rate pools
    numerators and denominators, and BLEU is corpus-level (None without
    references).
    """

    ral: float
    al: float
    revision_rate: float
    bleu: Optional[float]
    sentences: Sequence[SentenceMetrics]

    def to_frame(self) -> pd.DataFrame:
        """Per-sentence breakdown."""
        rows = []
        for sm in self.sentences:
            row = asdict(sm)
            row['revision_rate'] = sm.revision_rate
            rows.append(row)
        return pd.DataFrame(rows)

    def summary(self) -> Dict[str, float]:
        return {
            'bleu': float('nan') if self.bleu is None else self.bleu,
            'ral': self.ral,
            'al': self.al,
            'revision_rate': self.revision_rate,
            'sentences': len(self.sentences),
        }


def sentence_metrics(index: int, trace: CommitTrace) -> SentenceMetrics:
    """Metrics of one trace; an empty final output lags the whole source."""
    numerator, denominator = revision_counts(trace)
    if trace.final_output:
        sentence_ral, sentence_al = ral(trace), al(trace)
    else:
        logger.warning(f"Sentence {index}: empty output, latency set to |x|")
        sentence_ral = sentence_al = float(trace.source_len)
    return SentenceMetrics(
        index=index,
        source_len=trace.source_len,
        output_len=len(trace.final_output),
        ral=sentence_ral,
        al=sentence_al,
        revision_numerator=numerator,
        revision_denominator=denominator
    )


def build_report(
    traces: Sequence[CommitTrace],
    reference_sets: Optional[Sequence[Sequence[Sentence]]] = None
) -> MetricsReport:
    """
    Aggregate per-sentence metrics and corpus BLEU.

    Args:
        traces: One trace per corpus sentence
        reference_sets: Reference streams aligned with the traces; BLEU is
            skipped when there are none

    Returns:
        MetricsReport
    """
    if not traces:
        raise MetricsError("no traces to report on")
    sentences: List[SentenceMetrics] = [sentence_metrics(i, t) for i, t in enumerate(traces)]
    numerator = sum(sm.revision_numerator for sm in sentences)
    denominator = sum(sm.revision_denominator for sm in sentences)
    frame = pd.DataFrame({'ral': [sm.ral for sm in sentences], 'al': [sm.al for sm in sentences]})

    return MetricsReport(
        ral=float(frame['ral'].mean()),
        al=float(frame['al'].mean()),
        revision_rate=numerator / denominator if denominator else 0.0,
        bleu=bleu([t.final_output for t in traces], reference_sets) if reference_sets else None,
        sentences=tuple(sentences)
    )


def format_report(report: MetricsReport, title: Optional[str] = None) -> str:
    """Human-readable summary."""
    lines = []
    if title:
        lines.append(title)
        lines.append("=" * len(title))
    lines.append(f"Sentences:      {len(report.sentences)}")
    bleu_text = "n/a" if report.bleu is None else f"{report.bleu:.2f}"
    lines.append(f"BLEU:           {bleu_text}")
    lines.append(f"RAL:            {report.ral:.3f}")
    lines.append(f"AL:             {report.al:.3f}")
    lines.append(f"Revision rate:  {report.revision_rate:.2%}")
    return "\n".join(lines)

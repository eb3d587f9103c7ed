"""Revision-aware latency, revision rate, AL and BLEU."""

from .revision_latency import (
    LastRevisionProfile,
    MetricsError,
    al,
    al_from_policy,
    average_lagging,
    first_appearance,
    last_revision,
    ral,
)
from .revision_rate import dist_padded, revision_counts, revision_rate
from .quality import bleu
from .report import MetricsReport, SentenceMetrics, build_report, format_report, sentence_metrics

__all__ = [
    'LastRevisionProfile',
    'MetricsError',
    'al',
    'al_from_policy',
    'average_lagging',
    'first_appearance',
    'last_revision',
    'ral',
    'dist_padded',
    'revision_counts',
    'revision_rate',
    'bleu',
    'MetricsReport',
    'SentenceMetrics',
    'build_report',
    'format_report',
    'sentence_metrics',
]

"""Recompute metric reports from stored trace JSONL files."""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import pandas as pd

from data.data_validator import CorpusValidator
from metrics import MetricsError, MetricsReport, build_report, format_report
from trace_core import CommitTrace, Sentence, read_traces, trace_validate

logger = logging.getLogger(__name__)


class MetricsExtractor:
    """Load traces written by a sweep and turn them into metric reports."""

    def __init__(self, results_dir: str):
        """
        Initialize metrics extractor.

        Args:
            results_dir: Directory containing sweep results (traces/ inside it)
        """
        self.results_dir = Path(results_dir)

    def load_traces(self, trace_file) -> List[CommitTrace]:
        """
        Read and validate every trace in a JSONL file.

        Args:
            trace_file: Path, absolute or relative to results_dir/traces

        Returns:
            List of traces
        """
        path = Path(trace_file)
        if not path.exists():
            path = self.results_dir / 'traces' / trace_file
        if not path.exists():
            raise FileNotFoundError(f"Trace file not found: {trace_file}")

        traces = read_traces(path)
        for index, trace in enumerate(traces):
            violation = trace_validate(trace)
            if violation is not None:
                logger.warning(f"{path.name} sentence {index}: {violation}")
        logger.info(f"Loaded {len(traces)} traces from {path}")
        return traces

    def load_references(self, reference_paths: Sequence) -> List[List[Sentence]]:
        validator = CorpusValidator()
        return [validator.read_sentences(p) for p in reference_paths]

    def extract_report(self, trace_file, reference_paths: Sequence = ()) -> MetricsReport:
        """
        Build the metrics report of one trace file.

        Args:
            trace_file: Trace JSONL file
            reference_paths: Reference files aligned with the traces; without
                any, the report has no BLEU

        Returns:
            MetricsReport
        """
        traces = self.load_traces(trace_file)
        if not reference_paths:
            logger.info(f"No references for {Path(trace_file).name}, BLEU skipped")
        references = self.load_references(reference_paths)
        for path, refs in zip(reference_paths, references):
            if len(refs) != len(traces):
                raise MetricsError(f"{path} has {len(refs)} lines but there are {len(traces)} traces")
        return build_report(traces, references)

    def extract_all(self, reference_paths: Sequence = ()) -> pd.DataFrame:
        """Reports for every trace file under results_dir/traces."""
        rows = []
        for trace_file in sorted((self.results_dir / 'traces').glob('*.jsonl')):
            try:
                report = self.extract_report(trace_file, reference_paths)
            except (MetricsError, ValueError) as e:
                logger.error(f"Error extracting metrics from {trace_file.name}: {e}")
                continue
            row = {'point': trace_file.stem}
            row.update(report.summary())
            rows.append(row)
        return pd.DataFrame(rows)

    def generate_summary_report(self, report: MetricsReport, output_path: Optional[str] = None, title: str = "Trace metrics") -> str:
        """
        Human-readable report; optionally saved to a file.

        Returns:
            Report text
        """
        lines = [format_report(report, title), "", "Per sentence:"]
        frame = report.to_frame()
        if not frame.empty:
            lines.append(frame[['index', 'source_len', 'output_len', 'ral', 'al', 'revision_rate']]
                         .to_string(index=False, float_format=lambda v: f"{v:.3f}"))
        text = "\n".join(lines) + "\n"
        if output_path:
            Path(output_path).write_text(text, encoding='utf-8')
            logger.info(f"Report saved to {output_path}")
        return text

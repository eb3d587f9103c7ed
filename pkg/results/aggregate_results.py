"""Aggregate sweep results into per-figure plot data."""

import logging
from pathlib import Path
from typing import Dict, Optional

import pandas as pd

from analyze_results import apply_selection, best_beam_selection
from sweep_config import POLICY_FULLSENTENCE, POLICY_THRESHOLD, POLICY_WAIT_K
from sweep_runner import read_results_csv, write_results_csv

logger = logging.getLogger(__name__)

BEAM_FIGURE_WINDOW = 3


class ResultsAggregator:
    """Split a results table into the CSV files each plot reads."""

    def __init__(self, results_dir: str):
        """
        Initialize aggregator.

        Args:
            results_dir: Directory the plot-data files are written to
        """
        self.results_dir = Path(results_dir)

    def load_results(self, path: Optional[str] = None) -> pd.DataFrame:
        path = Path(path) if path else self.results_dir / 'results.csv'
        df = read_results_csv(path)
        logger.info(f"Loaded {len(df)} result rows from {path}")
        return df

    def emit_plot_data(
        self,
        results: pd.DataFrame,
        dev_results: Optional[pd.DataFrame] = None,
        beam_window: int = BEAM_FIGURE_WINDOW
    ) -> Dict[str, Path]:
        """
        Write bleu_vs_ral.csv, revrate_vs_window.csv and revrate_vs_beam.csv.

        Args:
            results: Sweep results
            dev_results: When given, bleu_vs_ral keeps only the beam sizes
                selected on these dev results
            beam_window: Window of the revision-rate-vs-beam plot

        Returns:
            Written paths keyed by file name
        """
        if results.empty:
            raise ValueError("No results to emit")

        bleu_vs_ral = results
        if dev_results is not None:
            bleu_vs_ral = apply_selection(results, best_beam_selection(dev_results))

        decoding = results['policy'].isin([POLICY_WAIT_K, POLICY_THRESHOLD])
        tables = {
            'bleu_vs_ral.csv': bleu_vs_ral,
            'revrate_vs_window.csv': results[results['policy'] != POLICY_FULLSENTENCE],
            'revrate_vs_beam.csv': results[decoding & (results['w'] == beam_window)],
        }

        paths = {}
        for filename, table in tables.items():
            paths[filename] = write_results_csv(table, self.results_dir / filename)
            logger.info(f"✓ {filename}: {len(table)} rows")
        return paths

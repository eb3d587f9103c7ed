"""Run decoding sweeps over (policy, k/rho, w, b) and record traces and metrics."""

import logging
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from data.data_validator import CorpusValidator
from data.synthetic_corpus import MODEL_FILE, REFERENCE_FILE, SOURCE_FILE, gen_synthetic_corpus
from decoder import decode_fullsentence, decode_retranslation, decode_simultaneous
from metrics import build_report
from models import IncrementalModel, build_model
from policies import create_policy
from sweep_config import (
    POLICY_FULLSENTENCE,
    POLICY_RETRANSLATION,
    POLICY_THRESHOLD,
    POLICY_WAIT_K,
    SweepConfig,
)
from trace_core import CommitTrace, Sentence, trace_validate, write_traces

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ['policy', 'k_or_rho', 'w', 'b', 'bleu', 'ral', 'al', 'revision_rate']
TIMING_COLUMNS = ['policy', 'k_or_rho', 'w', 'b', 'sentence_seconds']
FLOAT_FORMAT = '%.6f'


class SweepError(RuntimeError):
    """A sweep could not be completed."""


def format_setting(policy: str, value) -> str:
    """k_or_rho column text: integer k, float rho, empty for baselines."""
    if value is None:
        return ""
    if policy == POLICY_WAIT_K:
        return str(int(value))
    return repr(float(value))


def point_id(policy: str, value, w: int, b: int) -> str:
    """File-name stem of one grid point."""
    if policy == POLICY_WAIT_K:
        return f"{policy}_k{int(value)}_w{w}_b{b}"
    if policy == POLICY_THRESHOLD:
        return f"{policy}_rho{float(value):g}_w{w}_b{b}"
    return f"{policy}_b{b}"


def sort_results(df: pd.DataFrame) -> pd.DataFrame:
    """Order rows by (policy, numeric k_or_rho, w, b)."""
    if df.empty:
        return df
    keyed = df.assign(_setting=pd.to_numeric(df['k_or_rho'], errors='coerce'))
    keyed = keyed.sort_values(['policy', '_setting', 'w', 'b'], na_position='first', kind='mergesort')
    return keyed.drop(columns='_setting').reset_index(drop=True)


def write_results_csv(df: pd.DataFrame, path) -> Path:
    """Write a results table with the fixed header and float format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    sort_results(df)[RESULT_COLUMNS].to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def read_results_csv(path) -> pd.DataFrame:
    """Read a results table back, keeping k_or_rho as text."""
    df = pd.read_csv(path, dtype={'k_or_rho': str}, keep_default_na=False)
    missing = set(RESULT_COLUMNS) - set(df.columns)
    if missing:
        raise SweepError(f"{path} lacks columns {sorted(missing)}")
    for column in ('w', 'b'):
        df[column] = df[column].astype(int)
    for column in ('bleu', 'ral', 'al', 'revision_rate'):
        df[column] = df[column].astype(float)
    return df


class SweepRunner:
    """Decode a corpus at every grid point and collect the result rows."""

    def __init__(self, config: SweepConfig, model: Optional[IncrementalModel] = None):
        """
        Initialize the sweep runner.

        Args:
            config: Validated sweep configuration
            model: Pre-built model (otherwise built from config.model)
        """
        self.config = config
        self.output_dir = Path(config.output_dir)
        self.traces_dir = self.output_dir / 'traces'
        try:
            self.traces_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise SweepError(f"Output directory not writable: {self.output_dir} ({e})") from e
        self._model = model
        self._owns_model = model is None

    def _prepare_corpus(self) -> Tuple[List[Sentence], List[List[Sentence]]]:
        config = self.config
        if config.synthetic is not None:
            corpus_dir = self.output_dir / 'corpus'
            synthetic = dict(config.synthetic)
            gen_synthetic_corpus(
                seed=config.seed,
                n_sentences=int(synthetic.get('n_sentences', 100)),
                len_range=tuple(synthetic.get('len_range', (4, 8))),
                output_dir=corpus_dir,
                alphabet=synthetic.get('alphabet', ('a', 'b', 'c', 'd', 'e')),
                lookahead=int(synthetic.get('lookahead', 2)),
                sharpness=float(synthetic.get('sharpness', 0.7))
            )
            config.source = corpus_dir / SOURCE_FILE
            config.references = [corpus_dir / REFERENCE_FILE]
            if config.model.name == 'lookahead' and 'table' not in config.model.params:
                config.model.params.setdefault('model_file', str((corpus_dir / MODEL_FILE).resolve()))
        return CorpusValidator().load_corpus(config.source, config.references)

    def _get_model(self) -> IncrementalModel:
        if self._model is None:
            self._model = build_model(
                self.config.model.name,
                self.config.model.params,
                command=self.config.model.command,
                base_dir=self.config.base_dir
            )
        return self._model

    def decode_corpus(self, policy: str, value, w: int, b: int, sources: Sequence[Sentence]) -> Tuple[List[CommitTrace], float]:
        """
        Decode every sentence at one grid point.

        Returns:
            (traces, mean wall-clock seconds per sentence)
        """
        model = self._get_model()
        ratio = self.config.max_len_ratio
        decision_policy = None
        if policy in (POLICY_WAIT_K, POLICY_THRESHOLD):
            decision_policy = create_policy(policy, value, k_min=self.config.threshold_k_min, cap=self.config.threshold_cap)

        traces = []
        started = time.perf_counter()
        for index, source in enumerate(sources):
            if policy == POLICY_RETRANSLATION:
                trace = decode_retranslation(model, source, b, ratio)
            elif policy == POLICY_FULLSENTENCE:
                trace = decode_fullsentence(model, source, b, ratio)
            else:
                trace = decode_simultaneous(model, decision_policy, source, w, b, ratio)

            violation = trace_validate(trace, window=w if decision_policy is not None else None)
            if violation is not None:
                raise SweepError(f"{point_id(policy, value, w, b)} sentence {index}: invalid trace ({violation})")
            traces.append(trace)
        elapsed = time.perf_counter() - started
        return traces, elapsed / len(sources)

    def run_point(self, policy: str, value, w: int, b: int, sources, reference_sets) -> Dict:
        """Decode, store traces and compute the metrics row of one grid point."""
        name = point_id(policy, value, w, b)
        logger.info(f"Running sweep point: {name}")
        traces, seconds = self.decode_corpus(policy, value, w, b, sources)
        trace_path = write_traces(self.traces_dir / f"{name}.jsonl", traces)
        report = build_report(traces, reference_sets)
        logger.info(
            f"✓ Sweep point finished: {name} BLEU={report.bleu:.2f} RAL={report.ral:.3f} "
            f"RR={report.revision_rate:.2%}"
        )
        return {
            'policy': policy,
            'k_or_rho': format_setting(policy, value),
            'w': int(w),
            'b': int(b),
            'bleu': report.bleu,
            'ral': report.ral,
            'al': report.al,
            'revision_rate': report.revision_rate,
            'sentence_seconds': seconds,
            'trace_file': str(trace_path),
        }

    def run_sweep(self) -> pd.DataFrame:
        """
        Run every grid point and write results.csv and timings.csv.

        Returns:
            Results table (one row per grid point)
        """
        sources, reference_sets = self._prepare_corpus()
        grid = self.config.grid()
        logger.info(f"Sweeping {len(grid)} configurations over {len(sources)} sentences")

        rows = []
        try:
            for policy, value, w, b in grid:
                rows.append(self.run_point(policy, value, w, b, sources, reference_sets))
        finally:
            if self._owns_model and self._model is not None:
                self._model.close()
                self._model = None

        df = sort_results(pd.DataFrame(rows))
        results_path = write_results_csv(df, self.output_dir / 'results.csv')
        df[TIMING_COLUMNS].to_csv(self.output_dir / 'timings.csv', index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info(f"Results saved to {results_path}")
        return df

    @staticmethod
    def compare_to_baseline(results: pd.DataFrame) -> pd.DataFrame:
        """
        Pair every w > 0 or b > 1 row with its (w = 0, b = 1) row.

        Returns:
            DataFrame with the BLEU gain and RAL reduction of each pairing
        """
        decoding = results[results['policy'].isin([POLICY_WAIT_K, POLICY_THRESHOLD])]
        comparisons = []
        for (policy, setting), group in decoding.groupby(['policy', 'k_or_rho'], sort=True):
            base = group[(group['w'] == 0) & (group['b'] == 1)]
            if base.empty:
                continue
            base = base.iloc[0]
            for _, row in group.iterrows():
                if row['w'] == 0 and row['b'] == 1:
                    continue
                comparisons.append({
                    'policy': policy,
                    'k_or_rho': setting,
                    'w': int(row['w']),
                    'b': int(row['b']),
                    'bleu_gain': row['bleu'] - base['bleu'],
                    'ral_reduction': base['ral'] - row['ral'],
                    'revision_rate': row['revision_rate'],
                })
        return sort_results(pd.DataFrame(comparisons)) if comparisons else pd.DataFrame(comparisons)


def run_sweep(config: SweepConfig, model: Optional[IncrementalModel] = None) -> pd.DataFrame:
    """Convenience wrapper around SweepRunner."""
    return SweepRunner(config, model=model).run_sweep()

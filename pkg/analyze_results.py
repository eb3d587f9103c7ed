#!/usr/bin/env python3
"""
Analyze sweep results.

Selects the best beam size per (policy, k/rho, window) on dev results and
summarizes what opportunistic windows buy over plain policy decoding.
"""

import json
import sys
from pathlib import Path
from typing import Dict

import pandas as pd

sys.path.insert(0, str(Path(__file__).parent))

from sweep_config import POLICY_FULLSENTENCE, POLICY_RETRANSLATION
from sweep_runner import SweepRunner, read_results_csv, sort_results

GROUP_KEYS = ['policy', 'k_or_rho', 'w']


def best_beam_selection(dev_results: pd.DataFrame) -> pd.DataFrame:
    """
    Pick one beam size for every (policy, k/rho, window) group.

    Highest BLEU wins; ties go to the lower RAL, then the smaller beam.

    Args:
        dev_results: Sweep results on a development corpus

    Returns:
        One row per group, the selected configuration
    """
    if dev_results.empty:
        return dev_results.copy()
    ranked = dev_results.sort_values(
        GROUP_KEYS + ['bleu', 'ral', 'b'],
        ascending=[True, True, True, False, True, True],
        kind='mergesort'
    )
    selected = ranked.groupby(GROUP_KEYS, sort=False, dropna=False).head(1)
    return sort_results(selected)


def apply_selection(test_results: pd.DataFrame, selection: pd.DataFrame) -> pd.DataFrame:
    """Keep the test rows whose (policy, k/rho, w, b) was selected on dev."""
    keys = GROUP_KEYS + ['b']
    chosen = selection[keys].drop_duplicates()
    return sort_results(test_results.merge(chosen, on=keys, how='inner'))


def generate_summary(results: pd.DataFrame) -> Dict:
    """Aggregate statistics of a sweep."""
    if results.empty:
        return {}

    comparisons = SweepRunner.compare_to_baseline(results)
    summary = {
        'total_configurations': int(len(results)),
        'best_bleu': results.loc[results['bleu'].idxmax(), ['policy', 'k_or_rho', 'w', 'b', 'bleu', 'ral']].to_dict(),
        'lowest_ral': results.loc[results['ral'].idxmin(), ['policy', 'k_or_rho', 'w', 'b', 'bleu', 'ral']].to_dict(),
        'max_revision_rate': float(results['revision_rate'].max()),
    }
    if not comparisons.empty:
        summary['average_improvements'] = {
            'bleu_gain': float(comparisons['bleu_gain'].mean()),
            'ral_reduction': float(comparisons['ral_reduction'].mean()),
        }
        summary['positive_improvements'] = {
            'bleu_improved': int((comparisons['bleu_gain'] > 0).sum()),
            'ral_reduced': int((comparisons['ral_reduction'] > 0).sum()),
            'compared': int(len(comparisons)),
        }
    for baseline in (POLICY_RETRANSLATION, POLICY_FULLSENTENCE):
        rows = results[results['policy'] == baseline]
        if not rows.empty:
            summary[baseline] = {
                'bleu': float(rows['bleu'].max()),
                'ral': float(rows['ral'].min()),
                'revision_rate': float(rows['revision_rate'].min()),
            }
    return summary


def main(argv=None) -> int:
    """Print a summary of a results.csv file."""
    argv = sys.argv[1:] if argv is None else argv
    results_path = Path(argv[0]) if argv else Path('results/sweep/results.csv')
    if not results_path.exists():
        print(f"❌ Results file not found: {results_path}")
        return 1

    results = read_results_csv(results_path)
    print(f"Loaded {len(results)} configurations from {results_path}")
    summary = generate_summary(results)

    analysis_path = results_path.with_name('analysis.json')
    with open(analysis_path, 'w') as f:
        json.dump(summary, f, indent=2, default=str)
    print(f"✅ Analysis saved to {analysis_path}")
    print("")

    best = summary['best_bleu']
    print(f"Best BLEU: {best['bleu']:.2f} ({best['policy']} {best['k_or_rho']} w={best['w']} b={best['b']}, RAL {best['ral']:.3f})")
    if 'average_improvements' in summary:
        avg = summary['average_improvements']
        positive = summary['positive_improvements']
        print(f"Average BLEU gain over w=0, b=1:    {avg['bleu_gain']:+.2f}")
        print(f"Average RAL reduction over w=0, b=1: {avg['ral_reduction']:+.3f}")
        print(f"BLEU improved in {positive['bleu_improved']}/{positive['compared']} configurations")
    print(f"Highest revision rate: {summary['max_revision_rate']:.2%}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""
Command-line entry point.

Subcommands:
    gen       write a synthetic corpus (source, references, model.json)
    sweep     decode a corpus over a (policy, k/rho, w, b) grid
    metrics   recompute metric reports from stored trace JSONL
    plotdata  split results into per-figure CSV files
    select    pick the best beam size per (policy, k/rho, w) on dev results
"""

import argparse
import logging
import os
import sys
from datetime import datetime
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from analyze_results import best_beam_selection
from data.data_validator import CorpusError
from data.synthetic_corpus import DEFAULT_ALPHABET, gen_synthetic_corpus
from decoder import DecodeError
from metrics import MetricsError
from metrics_extractor import MetricsExtractor
from models import ModelError
from results.aggregate_results import ResultsAggregator
from sweep_config import ConfigError, add_sweep_arguments, config_from_args
from sweep_runner import SweepError, SweepRunner, read_results_csv, write_results_csv
from trace_core import TraceFormatError

logger = logging.getLogger(__name__)

DOMAIN_ERRORS = (ConfigError, CorpusError, DecodeError, ModelError, MetricsError,
                 TraceFormatError, SweepError, FileNotFoundError)


def setup_logging(log_dir, verbose: bool = False):
    """Log to both a file in log_dir and the console."""
    os.makedirs(log_dir, exist_ok=True)
    log_file = os.path.join(log_dir, f'sweep_progress_{datetime.now().strftime("%Y%m%d_%H%M%S")}.log')
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler()
        ],
        force=True
    )


def cmd_gen(args) -> int:
    paths = gen_synthetic_corpus(
        seed=args.seed,
        n_sentences=args.n,
        len_range=(args.min_len, args.max_len),
        output_dir=args.output_dir,
        alphabet=args.alphabet.split(',') if args.alphabet else DEFAULT_ALPHABET,
        lookahead=args.lookahead,
        sharpness=args.sharpness
    )
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def cmd_sweep(args) -> int:
    config = config_from_args(args)
    runner = SweepRunner(config)
    results = runner.run_sweep()
    comparisons = runner.compare_to_baseline(results)
    if not comparisons.empty:
        logger.info("Gains over plain policy decoding (w=0, b=1):\n" + comparisons.to_string(index=False))
    logger.info(f"Sweep complete: {len(results)} configurations")
    return 0


def cmd_metrics(args) -> int:
    extractor = MetricsExtractor(args.results_dir or '.')
    if args.traces:
        for trace_file in args.traces:
            report = extractor.extract_report(trace_file, args.references)
            print(extractor.generate_summary_report(report, args.output, title=Path(trace_file).stem))
    else:
        table = extractor.extract_all(args.references)
        if table.empty:
            raise MetricsError(f"no trace files under {extractor.results_dir / 'traces'}")
        print(table.to_string(index=False, na_rep='n/a', float_format=lambda v: f"{v:.3f}"))
    return 0


def cmd_plotdata(args) -> int:
    aggregator = ResultsAggregator(args.output_dir or Path(args.results).parent)
    results = aggregator.load_results(args.results)
    dev_results = read_results_csv(args.dev_results) if args.dev_results else None
    for path in aggregator.emit_plot_data(results, dev_results, beam_window=args.beam_window).values():
        print(path)
    return 0


def cmd_select(args) -> int:
    selection = best_beam_selection(read_results_csv(args.dev_results))
    if args.output:
        write_results_csv(selection, args.output)
        logger.info(f"Selection saved to {args.output}")
    print(selection[['policy', 'k_or_rho', 'w', 'b', 'bleu', 'ral']].to_string(index=False))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Opportunistic simultaneous decoding sweeps")
    parser.add_argument('--verbose', action='store_true', help='Debug logging')
    parser.add_argument('--log-dir', help='Directory for the progress log')
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('gen', help='Generate a synthetic corpus')
    gen.add_argument('--seed', type=int, default=1)
    gen.add_argument('--n', type=int, default=500, help='Number of sentences')
    gen.add_argument('--min-len', type=int, default=4)
    gen.add_argument('--max-len', type=int, default=8)
    gen.add_argument('--alphabet', help='Comma-separated source tokens')
    gen.add_argument('--lookahead', type=int, default=2)
    gen.add_argument('--sharpness', type=float, default=0.7)
    gen.add_argument('--output-dir', default='data/synthetic')
    gen.set_defaults(func=cmd_gen)

    sweep = sub.add_parser('sweep', help='Run a decoding sweep')
    add_sweep_arguments(sweep)
    sweep.set_defaults(func=cmd_sweep)

    metrics = sub.add_parser('metrics', help='Recompute metrics from trace JSONL')
    metrics.add_argument('--traces', nargs='+', help='Trace files (default: all under RESULTS_DIR/traces)')
    metrics.add_argument('--results-dir', help='Sweep output directory')
    metrics.add_argument('--reference', action='append', dest='references', default=[],
                         help='Reference file, repeatable (BLEU is skipped without one)')
    metrics.add_argument('--output', help='Write the text report here')
    metrics.set_defaults(func=cmd_metrics)

    plotdata = sub.add_parser('plotdata', help='Write per-figure CSV files')
    plotdata.add_argument('--results', required=True, help='results.csv of a sweep')
    plotdata.add_argument('--dev-results', help='Dev results used for beam selection')
    plotdata.add_argument('--output-dir')
    plotdata.add_argument('--beam-window', type=int, default=3)
    plotdata.set_defaults(func=cmd_plotdata)

    select = sub.add_parser('select', help='Best beam size per (policy, k/rho, w)')
    select.add_argument('--dev-results', required=True)
    select.add_argument('--output', help='Write the selected rows as CSV')
    select.set_defaults(func=cmd_select)
    return parser


def _log_dir(args) -> str:
    if args.log_dir:
        return args.log_dir
    for name in ('output_dir', 'results_dir'):
        value = getattr(args, name, None)
        if value:
            return str(value)
    return 'results'


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(_log_dir(args), args.verbose)
    try:
        return args.func(args)
    except DOMAIN_ERRORS as e:
        logger.error(f"✗ {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Interrupted")
        sys.exit(130)
    except Exception as e:
        logger.error(f"Error: {e}", exc_info=True)
        sys.exit(1)

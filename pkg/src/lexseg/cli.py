"""Command-line front end for the experiment harness.

Exit codes: 0 success, 1 usage error, 2 corpus or inventory parse error.
All output files are reproducible byte-for-byte for identical flags.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .corpus import CorpusError, default_inventory, load_corpus, load_inventory
from .experiments import (DEFAULT_RUNS, ExperimentSpec, baseline_experiment,
                          fully_trained, lexicon_growth, phoneme_matrix,
                          train_sweep, write_error_listing,
                          write_fully_trained_csv, write_growth_csv,
                          write_matrix_csv, write_summary_csv, write_sweep_csv)
from .scoring import write_aggregate_csv, write_runs_csv
from .segmenter import RunConfig


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lexseg",
                description="Unsupervised word segmentation experiments.")
    p.add_argument("--experiment", required=True,
                   choices=["baseline", "train-sweep", "fully-trained",
                            "phoneme-matrix", "lexicon-growth"])
    p.add_argument("--corpus", required=True, help="corpus file path")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--order", action="append", type=int, choices=[1, 2, 3],
                   help="model order; repeat the flag for several orders")
    p.add_argument("--phoneme-mode", default="lexicon",
                   choices=["uniform", "lexicon", "corpus"])
    p.add_argument("--denominator", default="context",
                   choices=["context", "as-written"])
    p.add_argument("--runs", type=int, default=None,
                   help="permutation runs (default: per-experiment)")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--block-size", type=int, default=100)
    p.add_argument("--train-fraction", default="0",
                   help="leading fraction gold-trained, e.g. 0.1 (exact decimal)")
    p.add_argument("--train-cap", type=int, default=75,
                   help="largest training percentage in a sweep")
    p.add_argument("--sweep-step", type=int, default=1,
                   help="sweep step in percentage points")
    p.add_argument("--inventory", default=None,
                   help="inventory file (default: built-in 50-phoneme set)")
    p.add_argument("--manifest", action="store_true",
                   help="also write a provenance manifest")
    return p


def _write_manifest(args, orders, runs, corpus_path: Path, out_dir: Path) -> None:
    digest = hashlib.sha256(corpus_path.read_bytes()).hexdigest()
    lines = [
        f"package: lexseg {__version__}",
        f"experiment: {args.experiment}",
        f"corpus: {corpus_path}",
        f"corpus-sha256: {digest}",
        f"inventory: {args.inventory or 'built-in'}",
        f"orders: {','.join(str(o) for o in orders)}",
        f"runs: {runs}",
        f"base-seed: {args.seed}",
        f"block-size: {args.block_size}",
        f"phoneme-mode: {args.phoneme_mode}",
        f"denominator: {args.denominator}",
        f"train-fraction: {args.train_fraction}",
        f"train-cap: {args.train_cap}",
        f"sweep-step: {args.sweep_step}",
    ]
    (out_dir / "manifest.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.runs is not None and args.runs < 1:
        parser.error("--runs must be at least 1")
    if args.block_size < 1:
        parser.error("--block-size must be at least 1")
    if args.sweep_step < 1:
        parser.error("--sweep-step must be at least 1")
    try:
        fraction = Fraction(args.train_fraction)
        if not 0 <= fraction <= 1:
            raise ValueError
    except (ValueError, ZeroDivisionError):
        parser.error(f"--train-fraction {args.train_fraction!r} is not a "
                     "fraction in [0, 1]")

    orders = args.order or [1]
    runs = args.runs if args.runs is not None else DEFAULT_RUNS[args.experiment]

    try:
        inventory = (load_inventory(args.inventory) if args.inventory
                     else default_inventory())
        corpus = load_corpus(args.corpus, inventory)
    except OSError as err:
        print(f"lexseg: {err}", file=sys.stderr)
        return 2
    except CorpusError as err:
        print(f"lexseg: {args.corpus}: {err}", file=sys.stderr)
        return 2

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    def spec_for(order: int) -> ExperimentSpec:
        config = RunConfig(order=order, phoneme_mode=args.phoneme_mode,
                           denominator_mode=args.denominator,
                           train_fraction=fraction, block_size=args.block_size)
        return ExperimentSpec(kind=args.experiment, runs=runs,
                              base_seed=args.seed, config=config)

    if args.experiment == "baseline":
        summary = []
        for order in orders:
            result = baseline_experiment(corpus, spec_for(order))
            write_runs_csv(result.reports, out_dir / f"runs_order{order}.csv")
            write_aggregate_csv(result.aggregate, out_dir / f"blocks_order{order}.csv")
            summary.append((order, result.aggregate))
        write_summary_csv(summary, out_dir / "summary.csv")
    elif args.experiment == "train-sweep":
        for order in orders:
            points = train_sweep(corpus, spec_for(order), cap_percent=args.train_cap,
                                 step_percent=args.sweep_step)
            write_sweep_csv(points, out_dir / f"train_sweep_order{order}.csv")
    elif args.experiment == "fully-trained":
        for order in orders:
            result = fully_trained(corpus, spec_for(order))
            write_fully_trained_csv(result, order,
                                    out_dir / f"fully_trained_order{order}.csv")
            write_error_listing(result, out_dir / f"errors_order{order}.txt")
    elif args.experiment == "phoneme-matrix":
        cells = phoneme_matrix(corpus, spec_for(orders[0]), orders=tuple(orders))
        write_matrix_csv(cells, out_dir / "phoneme_matrix.csv")
    elif args.experiment == "lexicon-growth":
        points = lexicon_growth(corpus, spec_for(orders[0]), orders=tuple(orders))
        write_growth_csv(points, out_dir / "lexicon_growth.csv")

    if args.manifest:
        _write_manifest(args, orders, runs, Path(args.corpus), out_dir)
    return 0


if __name__ == "__main__":
    sys.exit(main())

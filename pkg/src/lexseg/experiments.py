"""Experiment harness: seeded permutation batches and CSV emission.

Every experiment reuses the same run core (segmenter.iter_run); runs are
independent, seeded by a pure function of (base_seed, run_index), and
aggregated in run-index order, so results are reproducible bit-for-bit
and any single run can be replayed outside its batch.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from fractions import Fraction

from .corpus import Corpus, concat_self, gold_lexicon, permute
from .rng import derive_seed
from .scoring import (AggregateReport, MetricAggregate, RunReport,
                      UtteranceScore, aggregate_metric, aggregate_runs, match_words,
                      score_run)
from .segmenter import RunConfig, iter_run

EXPERIMENT_KINDS = ("baseline", "train-sweep", "fully-trained",
                    "phoneme-matrix", "lexicon-growth")

# how many permutation runs each experiment averages over by default
DEFAULT_RUNS = {
    "baseline": 1000,
    "train-sweep": 25,
    "fully-trained": 1,
    "phoneme-matrix": 1000,
    "lexicon-growth": 100,
}


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    runs: int
    base_seed: int
    config: RunConfig

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")


@dataclass(frozen=True)
class RunOutcome:
    report: RunReport
    n_train_utterances: int
    n_train_tokens: int


def execute_run(corpus: Corpus, config: RunConfig, run_id: int,
                gold_lex: frozenset[str]) -> RunOutcome:
    """Score one run over an already-ordered corpus.

    Lexicon events cover words inferred during the test phase; a word is
    first-seen the first time the segmenter (not gold training) emits it
    in this run, and correct iff it occurs anywhere in the gold lexicon.
    """
    scores = []
    seen: set[str] = set()
    n_train = 0
    train_tokens = 0
    for step in iter_run(corpus, config):
        if step.phase == "train":
            n_train += 1
            train_tokens += len(step.utterance.gold_words)
            continue
        tp, n_pred, n_gold = match_words(step.segmentation, step.utterance)
        events = []
        for w in step.segmentation.words:
            first = w not in seen
            if first:
                seen.add(w)
            events.append((w, w in gold_lex, first))
        scores.append(UtteranceScore(tp, n_pred, n_gold, tuple(events)))
    return RunOutcome(score_run(run_id, scores, config.block_size),
                      n_train, train_tokens)


@dataclass(frozen=True)
class BaselineResult:
    reports: tuple[RunReport, ...]
    aggregate: AggregateReport


def baseline_experiment(corpus: Corpus, spec: ExperimentSpec) -> BaselineResult:
    """Unsupervised learning over seeded permutations, scored per block."""
    gold_lex = gold_lexicon(corpus)
    reports = []
    for i in range(spec.runs):
        seed = derive_seed(spec.base_seed, i)
        config = replace(spec.config, seed=seed)
        outcome = execute_run(permute(corpus, seed), config, i, gold_lex)
        reports.append(outcome.report)
    return BaselineResult(tuple(reports), aggregate_runs(reports))


@dataclass(frozen=True)
class SweepPoint:
    fraction_pct: int
    n_train: int
    n_test: int
    n_runs: int
    precision: MetricAggregate | None
    recall: MetricAggregate | None
    lexicon_precision: MetricAggregate | None
    # alternative reading: training utterances pooled into the totals as
    # perfectly segmented, so both scorings of a training sweep are emitted
    precision_incl_train: MetricAggregate | None
    recall_incl_train: MetricAggregate | None
    empty_test: bool


def train_sweep(corpus: Corpus, spec: ExperimentSpec, cap_percent: int = 75,
                step_percent: int = 1) -> list[SweepPoint]:
    """Precision/recall on the test remainder vs training fraction."""
    if step_percent < 1:
        raise ValueError("step_percent must be positive")
    gold_lex = gold_lexicon(corpus)
    m = len(corpus)
    points = []
    for pct in range(0, cap_percent + 1, step_percent):
        fraction = Fraction(pct, 100)
        n_train = int(fraction * m)
        n_test = m - n_train
        if n_test == 0:
            points.append(SweepPoint(pct, n_train, 0, spec.runs,
                                     None, None, None, None, None, True))
            continue
        reports = []
        incl_precision = []
        incl_recall = []
        for i in range(spec.runs):
            seed = derive_seed(spec.base_seed, i)
            config = replace(spec.config, seed=seed, train_fraction=fraction)
            outcome = execute_run(permute(corpus, seed), config, i, gold_lex)
            reports.append(outcome.report)
            r = outcome.report
            t = outcome.n_train_tokens
            incl_precision.append(100.0 * (r.tp + t) / (r.n_predicted + t))
            incl_recall.append(100.0 * (r.tp + t) / (r.n_gold + t))
        agg = aggregate_runs(reports)
        points.append(SweepPoint(
            fraction_pct=pct,
            n_train=n_train,
            n_test=n_test,
            n_runs=spec.runs,
            precision=agg.precision,
            recall=agg.recall,
            lexicon_precision=agg.lexicon_precision,
            precision_incl_train=aggregate_metric(incl_precision),
            recall_incl_train=aggregate_metric(incl_recall),
            empty_test=False,
        ))
    return points


@dataclass(frozen=True)
class SegmentationError:
    index: int  # position within the test half
    predicted: tuple[str, ...]
    gold: tuple[str, ...]


@dataclass(frozen=True)
class FullyTrainedResult:
    report: RunReport
    errors: tuple[SegmentationError, ...]


def fully_trained(corpus: Corpus, spec: ExperimentSpec) -> FullyTrainedResult:
    """Train on the corpus, then segment an identical copy appended to it.

    A single deterministic pass in corpus order (no permutation); emits
    every test utterance whose prediction differs from gold.
    """
    doubled = concat_self(corpus)
    gold_lex = gold_lexicon(corpus)
    config = replace(spec.config, train_fraction=Fraction(1, 2))
    m = len(corpus)
    scores = []
    errors = []
    seen: set[str] = set()
    for step in iter_run(doubled, config):
        if step.phase == "train":
            continue
        u = step.utterance
        tp, n_pred, n_gold = match_words(step.segmentation, u)
        events = []
        for w in step.segmentation.words:
            first = w not in seen
            if first:
                seen.add(w)
            events.append((w, w in gold_lex, first))
        scores.append(UtteranceScore(tp, n_pred, n_gold, tuple(events)))
        if step.segmentation.boundaries != u.gold_boundaries:
            errors.append(SegmentationError(step.index - m,
                                            step.segmentation.words,
                                            u.gold_words))
    return FullyTrainedResult(score_run(0, scores, config.block_size),
                              tuple(errors))


@dataclass(frozen=True)
class MatrixCell:
    phoneme_mode: str
    order: int
    n_runs: int
    precision: MetricAggregate
    recall: MetricAggregate
    lexicon_precision: MetricAggregate


def phoneme_matrix(corpus: Corpus, spec: ExperimentSpec,
                   orders=(1, 2, 3)) -> list[MatrixCell]:
    """Baseline metrics for every phoneme-estimation mode and order."""
    cells = []
    for mode in ("uniform", "lexicon", "corpus"):
        for order in orders:
            sub = replace(spec, config=replace(spec.config, phoneme_mode=mode,
                                               order=order))
            agg = baseline_experiment(corpus, sub).aggregate
            cells.append(MatrixCell(mode, order, spec.runs, agg.precision,
                                    agg.recall, agg.lexicon_precision))
    return cells


@dataclass(frozen=True)
class GrowthPoint:
    curve: str  # "gold" or "order-<k>"
    percent: int
    n_runs: int
    size: MetricAggregate


def _checkpoints(total: int):
    """Map consumed-count -> percents recorded there, for p = 0..100."""
    targets: dict[int, list[int]] = {}
    for p in range(101):
        targets.setdefault(round(p * total / 100), []).append(p)
    return targets


def lexicon_growth(corpus: Corpus, spec: ExperimentSpec,
                   orders=(1, 2, 3)) -> list[GrowthPoint]:
    """Lexicon size vs corpus consumed, averaged over permutations.

    Algorithm curves sample the inferred lexicon at 1% utterance
    intervals; the gold curve counts distinct gold words at 1% token
    intervals.
    """
    m = len(corpus)
    utt_targets = _checkpoints(m)
    gold_sizes: list[list[int]] = []
    algo_sizes: dict[int, list[list[int]]] = {o: [] for o in orders}
    for i in range(spec.runs):
        seed = derive_seed(spec.base_seed, i)
        perm = permute(corpus, seed)

        tokens = [w for u in perm for w in u.gold_words]
        tok_targets = _checkpoints(len(tokens))
        sizes = [0] * 101
        distinct: set[str] = set()
        for p in tok_targets.get(0, ()):
            sizes[p] = 0
        for consumed, w in enumerate(tokens, start=1):
            distinct.add(w)
            for p in tok_targets.get(consumed, ()):
                sizes[p] = len(distinct)
        gold_sizes.append(sizes)

        for order in orders:
            config = replace(spec.config, order=order, seed=seed,
                             train_fraction=Fraction(0))
            sizes = [0] * 101
            consumed = 0
            for p in utt_targets.get(0, ()):
                sizes[p] = 0
            for step in iter_run(perm, config):
                consumed += 1
                for p in utt_targets.get(consumed, ()):
                    sizes[p] = step.model.lexicon_size
            algo_sizes[order].append(sizes)

    points = []
    for p in range(101):
        points.append(GrowthPoint("gold", p, spec.runs,
                                  aggregate_metric(s[p] for s in gold_sizes)))
    for order in orders:
        for p in range(101):
            points.append(GrowthPoint(f"order-{order}", p, spec.runs,
                                      aggregate_metric(s[p] for s in algo_sizes[order])))
    return points


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def write_summary_csv(rows, path) -> None:
    """Whole-run aggregates, one row per order."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["order", "n_runs", "precision_mean", "precision_sd",
                    "recall_mean", "recall_sd", "lexicon_precision_mean",
                    "lexicon_precision_sd"])
        for order, agg in rows:
            w.writerow([order, agg.n_runs,
                        _fmt(agg.precision.mean), _fmt(agg.precision.sd),
                        _fmt(agg.recall.mean), _fmt(agg.recall.sd),
                        _fmt(agg.lexicon_precision.mean),
                        _fmt(agg.lexicon_precision.sd)])


def write_sweep_csv(points, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["fraction_pct", "n_train", "n_test", "n_runs",
                    "precision_mean", "precision_sd", "recall_mean", "recall_sd",
                    "lexicon_precision_mean", "lexicon_precision_sd",
                    "precision_incl_train_mean", "precision_incl_train_sd",
                    "recall_incl_train_mean", "recall_incl_train_sd", "flag"])
        for p in points:
            if p.empty_test:
                w.writerow([p.fraction_pct, p.n_train, p.n_test, p.n_runs,
                            "", "", "", "", "", "", "", "", "", "", "empty-test"])
            else:
                w.writerow([p.fraction_pct, p.n_train, p.n_test, p.n_runs,
                            _fmt(p.precision.mean), _fmt(p.precision.sd),
                            _fmt(p.recall.mean), _fmt(p.recall.sd),
                            _fmt(p.lexicon_precision.mean),
                            _fmt(p.lexicon_precision.sd),
                            _fmt(p.precision_incl_train.mean),
                            _fmt(p.precision_incl_train.sd),
                            _fmt(p.recall_incl_train.mean),
                            _fmt(p.recall_incl_train.sd), ""])


def write_fully_trained_csv(result: FullyTrainedResult, order: int, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["order", "n_test", "precision", "recall",
                    "lexicon_precision", "n_errors"])
        r = result.report
        n_test = sum(b.n_utterances for b in r.blocks)
        w.writerow([order, n_test, _fmt(r.precision), _fmt(r.recall),
                    _fmt(r.lexicon_precision), len(result.errors)])


def write_error_listing(result: FullyTrainedResult, path) -> None:
    """One line per erroneous test utterance: index, predicted, gold."""
    with open(path, "w", encoding="utf-8") as fh:
        for e in result.errors:
            fh.write(f"{e.index}\t{' '.join(e.predicted)}\t{' '.join(e.gold)}\n")


def write_matrix_csv(cells, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["phoneme_mode", "order", "n_runs",
                    "precision_mean", "precision_sd", "recall_mean", "recall_sd",
                    "lexicon_precision_mean", "lexicon_precision_sd"])
        for c in cells:
            w.writerow([c.phoneme_mode, c.order, c.n_runs,
                        _fmt(c.precision.mean), _fmt(c.precision.sd),
                        _fmt(c.recall.mean), _fmt(c.recall.sd),
                        _fmt(c.lexicon_precision.mean),
                        _fmt(c.lexicon_precision.sd)])


def write_growth_csv(points, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["curve", "percent", "n_runs", "size_mean", "size_sd"])
        for p in points:
            w.writerow([p.curve, p.percent, p.n_runs,
                        _fmt(p.size.mean), _fmt(p.size.sd)])

"""Word-level precision/recall scoring and cross-run aggregation.

A predicted word is a true positive iff its (start, end) span exactly
matches a gold word's span.  Precision and recall are computed within
consecutive blocks of test utterances from that block's counts only;
lexicon precision is cumulative over all distinct words inferred so far,
an entry being correct iff it occurs anywhere in the gold segmentation of
the corpus.  Whole-run figures are pooled-count ratios, not means of
block ratios.

Everything here is a pure function over immutable inputs.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .corpus import Utterance
from .segmenter import Segmentation


class ScoringError(Exception):
    pass


def match_words(predicted: Segmentation, gold: Utterance) -> tuple[int, int, int]:
    """(true positives, predicted word count, gold word count)."""
    if predicted.phonemes != gold.phonemes:
        raise ScoringError(
            f"predicted and gold cover different phoneme sequences: "
            f"{predicted.phonemes!r} vs {gold.phonemes!r}")
    if gold.gold_boundaries is None:
        raise ScoringError(f"utterance {gold.phonemes!r} has no gold segmentation")
    pred_spans = _spans(predicted.boundaries, len(predicted.phonemes))
    gold_spans = _spans(gold.gold_boundaries, len(gold.phonemes))
    tp = len(pred_spans & gold_spans)
    return tp, len(pred_spans), len(gold_spans)


def _spans(boundaries: tuple[int, ...], length: int) -> set[tuple[int, int]]:
    cuts = (0, *boundaries, length)
    return set(zip(cuts, cuts[1:]))


@dataclass(frozen=True)
class UtteranceScore:
    """Match counts for one test utterance plus its lexicon events.

    lexicon_events holds (word, is_correct, first_seen) for each predicted
    word, in order; only first_seen entries advance the cumulative lexicon
    tallies.
    """

    tp: int
    n_predicted: int
    n_gold: int
    lexicon_events: tuple[tuple[str, bool, bool], ...] = ()


@dataclass(frozen=True)
class BlockReport:
    block_index: int
    n_utterances: int
    tp: int
    n_predicted: int
    n_gold: int
    precision: float
    recall: float
    lexicon_precision: float
    correct_lexicon_count: int
    incorrect_lexicon_count: int
    partial: bool


@dataclass(frozen=True)
class RunReport:
    run_id: int
    blocks: tuple[BlockReport, ...]
    tp: int
    n_predicted: int
    n_gold: int
    precision: float
    recall: float
    lexicon_precision: float
    correct_lexicon_count: int
    incorrect_lexicon_count: int


def _pct(num: int, denom: int) -> float:
    return 100.0 * num / denom if denom else 0.0


def block_scores(scores, block_size: int) -> list[BlockReport]:
    """Fold per-utterance scores into consecutive blocks.

    The final block may cover fewer than block_size utterances; it is
    reported and flagged partial rather than dropped.
    """
    if block_size < 1:
        raise ScoringError("block_size must be positive")
    scores = list(scores)
    blocks = []
    correct_lex = 0
    incorrect_lex = 0
    for b in range(0, len(scores), block_size):
        chunk = scores[b:b + block_size]
        tp = sum(s.tp for s in chunk)
        n_pred = sum(s.n_predicted for s in chunk)
        n_gold = sum(s.n_gold for s in chunk)
        for s in chunk:
            for _, is_correct, first_seen in s.lexicon_events:
                if first_seen:
                    if is_correct:
                        correct_lex += 1
                    else:
                        incorrect_lex += 1
        blocks.append(BlockReport(
            block_index=b // block_size,
            n_utterances=len(chunk),
            tp=tp,
            n_predicted=n_pred,
            n_gold=n_gold,
            precision=_pct(tp, n_pred),
            recall=_pct(tp, n_gold),
            lexicon_precision=_pct(correct_lex, correct_lex + incorrect_lex),
            correct_lexicon_count=correct_lex,
            incorrect_lexicon_count=incorrect_lex,
            partial=len(chunk) < block_size,
        ))
    return blocks


def score_run(run_id: int, scores, block_size: int) -> RunReport:
    scores = list(scores)
    blocks = tuple(block_scores(scores, block_size))
    tp = sum(s.tp for s in scores)
    n_pred = sum(s.n_predicted for s in scores)
    n_gold = sum(s.n_gold for s in scores)
    correct_lex = blocks[-1].correct_lexicon_count if blocks else 0
    incorrect_lex = blocks[-1].incorrect_lexicon_count if blocks else 0
    return RunReport(
        run_id=run_id,
        blocks=blocks,
        tp=tp,
        n_predicted=n_pred,
        n_gold=n_gold,
        precision=_pct(tp, n_pred),
        recall=_pct(tp, n_gold),
        lexicon_precision=_pct(correct_lex, correct_lex + incorrect_lex),
        correct_lexicon_count=correct_lex,
        incorrect_lexicon_count=incorrect_lex,
    )


@dataclass(frozen=True)
class MetricAggregate:
    mean: float
    sd: float


@dataclass(frozen=True)
class BlockAggregate:
    block_index: int
    n_utterances: int
    n_runs: int
    precision: MetricAggregate
    recall: MetricAggregate
    lexicon_precision: MetricAggregate


@dataclass(frozen=True)
class AggregateReport:
    blocks: tuple[BlockAggregate, ...]
    n_runs: int
    precision: MetricAggregate
    recall: MetricAggregate
    lexicon_precision: MetricAggregate


def aggregate_metric(values) -> MetricAggregate:
    values = list(values)
    n = len(values)
    mean = math.fsum(values) / n
    if n > 1:
        var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
        sd = math.sqrt(var)
    else:
        sd = 0.0
    return MetricAggregate(mean=mean, sd=sd)


def aggregate_runs(reports) -> AggregateReport:
    """Arithmetic mean and sample sd per block index across runs.

    All reports must share the same block structure (count and utterances
    per block); permutations of one corpus always do.
    """
    reports = list(reports)
    if not reports:
        raise ScoringError("no reports to aggregate")
    shape = [(b.block_index, b.n_utterances) for b in reports[0].blocks]
    for r in reports[1:]:
        if [(b.block_index, b.n_utterances) for b in r.blocks] != shape:
            raise ScoringError(
                f"run {r.run_id} has a different block structure than run "
                f"{reports[0].run_id}")
    blocks = []
    for i, (index, n_utt) in enumerate(shape):
        per = [r.blocks[i] for r in reports]
        blocks.append(BlockAggregate(
            block_index=index,
            n_utterances=n_utt,
            n_runs=len(reports),
            precision=aggregate_metric(b.precision for b in per),
            recall=aggregate_metric(b.recall for b in per),
            lexicon_precision=aggregate_metric(b.lexicon_precision for b in per),
        ))
    return AggregateReport(
        blocks=tuple(blocks),
        n_runs=len(reports),
        precision=aggregate_metric(r.precision for r in reports),
        recall=aggregate_metric(r.recall for r in reports),
        lexicon_precision=aggregate_metric(r.lexicon_precision for r in reports),
    )


def _fmt(x: float) -> str:
    return f"{x:.2f}"


RUNS_CSV_HEADER = ["run_id", "block_index", "utterances", "precision", "recall",
                   "lexicon_precision", "correct_lex", "incorrect_lex"]

AGGREGATE_CSV_HEADER = ["block_index", "utterances", "precision_mean", "precision_sd",
                        "recall_mean", "recall_sd", "lexicon_precision_mean",
                        "lexicon_precision_sd", "n_runs"]


def write_runs_csv(reports, path) -> None:
    """One row per (run, block); percentages to two decimals."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(RUNS_CSV_HEADER)
        for r in reports:
            for b in r.blocks:
                w.writerow([r.run_id, b.block_index, b.n_utterances,
                            _fmt(b.precision), _fmt(b.recall),
                            _fmt(b.lexicon_precision),
                            b.correct_lexicon_count, b.incorrect_lexicon_count])


def write_aggregate_csv(aggregate: AggregateReport, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(AGGREGATE_CSV_HEADER)
        for b in aggregate.blocks:
            w.writerow([b.block_index, b.n_utterances,
                        _fmt(b.precision.mean), _fmt(b.precision.sd),
                        _fmt(b.recall.mean), _fmt(b.recall.sd),
                        _fmt(b.lexicon_precision.mean), _fmt(b.lexicon_precision.sd),
                        b.n_runs])

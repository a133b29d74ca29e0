"""Minimum-cost segmentation search and the incremental learning loop.

Each utterance is segmented by exact dynamic programming over negative
log-probabilities.  DP state is the end position for the unigram model,
(end, span of last word) for the bigram model, and (end, spans of the last
two words) for the trigram model, so conditional scores chain across the
inferred words exactly as they would in a left-to-right evaluation.

Tie rule, applied everywhere a candidate replaces another: lower score,
then fewer words, then the earlier final boundary (recursing leftward on
further ties).  Entries are (score, word_count, cuts) tuples where cuts is
a linked pair chain holding the boundaries latest-first, so plain tuple
comparison implements the rule and extending a prefix costs O(1).

Scores are composed left to right and every cost comes from the model's
own scoring functions, so a full segmentation's DP score is bit-identical
to evaluating that segmentation directly.  When no seen bigram (trigram)
ends in a candidate word, the table's tail index proves it without
enumerating histories, and all prefixes share one back-off cost.

The incremental protocol commits each utterance's best segmentation to the
model before the next utterance is considered; a run is therefore strictly
sequential, and concurrent runs must use independent model instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .corpus import Corpus, Utterance, split_at, validate_symbols
from .ngram import DENOMINATOR_MODES, PHONEME_MODES, LanguageModel


@dataclass(frozen=True)
class Segmentation:
    """Interior cut positions over one utterance, with the total score."""

    phonemes: str
    boundaries: tuple[int, ...]
    score: float

    @property
    def words(self) -> tuple[str, ...]:
        return split_at(self.phonemes, self.boundaries)

    def line(self) -> str:
        """Space-separated words, matching the corpus input format."""
        return " ".join(self.words)


@dataclass(frozen=True)
class RunConfig:
    """Knobs for one learning run over a corpus."""

    order: int = 1
    phoneme_mode: str = "lexicon"
    denominator_mode: str = "context"
    seed: int = 0
    train_fraction: Fraction = Fraction(0)
    block_size: int = 100
    phoneme_prior: float = 1.0

    def __post_init__(self):
        if self.order not in (1, 2, 3):
            raise ValueError(f"order must be 1, 2 or 3, got {self.order}")
        if self.phoneme_mode not in PHONEME_MODES:
            raise ValueError(f"unknown phoneme mode {self.phoneme_mode!r}")
        if self.denominator_mode not in DENOMINATOR_MODES:
            raise ValueError(f"unknown denominator mode {self.denominator_mode!r}")
        # exact rational so the train/test split index is never off by one
        # from binary rounding; pass a str ("0.29") or Fraction for decimals
        frac = Fraction(self.train_fraction)
        if not 0 <= frac <= 1:
            raise ValueError("train_fraction must be within [0, 1]")
        object.__setattr__(self, "train_fraction", frac)
        if self.block_size < 1:
            raise ValueError("block_size must be positive")


def new_model(config: RunConfig, inventory=None) -> LanguageModel:
    return LanguageModel(
        inventory=inventory,
        order=config.order,
        phoneme_mode=config.phoneme_mode,
        denominator_mode=config.denominator_mode,
        phoneme_prior=config.phoneme_prior,
    )


def _phonemes_of(u) -> str:
    return u.phonemes if isinstance(u, Utterance) else u


def eval_utterance(lm: LanguageModel, u) -> Segmentation:
    """Best segmentation of `u` under the model's order; model untouched."""
    phonemes = _phonemes_of(u)
    if not phonemes:
        raise ValueError("cannot segment an empty utterance")
    validate_symbols(phonemes, lm.inventory)
    if lm.order == 1:
        return _dp_unigram(lm, phonemes)
    if lm.order == 2:
        return _dp_bigram(lm, phonemes)
    return _dp_trigram(lm, phonemes)


def _unwind(rev) -> tuple[int, ...]:
    cuts = []
    while rev:
        cuts.append(rev[0])
        rev = rev[1]
    cuts.reverse()
    return tuple(cuts)


def _spans_of(u: str):
    n = len(u)
    spans = [[None] * (n + 1) for _ in range(n)]
    for i in range(n):
        row = spans[i]
        for j in range(i + 1, n + 1):
            row[j] = u[i:j]
    return spans


def _dp_unigram(lm: LanguageModel, u: str) -> Segmentation:
    n = len(u)
    word_logprob = lm.word_logprob
    best = [None] * (n + 1)
    best[0] = (0.0, 0, ())
    for j in range(1, n + 1):
        top = None
        for i in range(j):
            prev = best[i]
            cost = word_logprob(u[i:j])
            entry = (prev[0] + cost, prev[1] + 1, (i, prev[2]) if i else prev[2])
            if top is None or entry < top:
                top = entry
        best[j] = top
    score, _, rev = best[n]
    return Segmentation(u, _unwind(rev), score)


def _dp_bigram(lm: LanguageModel, u: str) -> Segmentation:
    n = len(u)
    seen2 = lm.tables[2].counts
    tails2 = lm.tables[2].firsts_by_tail
    esc2 = lm.escape_logprob(2)
    word_logprob = lm.word_logprob
    bigram_logprob = lm.bigram_logprob
    spans = _spans_of(u)
    wl = [[None] * (n + 1) for _ in range(n)]

    # by_end[j] maps the start of the last word to the best prefix entry
    by_end: list[dict[int, tuple]] = [{} for _ in range(n + 1)]
    wl0 = wl[0]
    for j in range(1, n + 1):
        wl0[j] = v = word_logprob(spans[0][j])
        by_end[j][0] = (v, 1, ())
    for j in range(1, n):
        group = by_end[j]
        agg_score, agg_n, agg_rev = min(group.values())
        spans_j = spans[j]
        wl_j = wl[j]
        for l in range(j + 1, n + 1):
            w = spans_j[l]
            firsts = tails2.get(w)
            if firsts is None:
                wv = wl_j[l]
                if wv is None:
                    wv = wl_j[l] = word_logprob(w)
                unseen = esc2 + wv
                entry = (agg_score + unseen, agg_n + 1, (j, agg_rev))
            else:
                entry = None
                unseen = None
                for i, prev in group.items():
                    pw = spans[i][j]
                    if (pw, w) in seen2:
                        cost = bigram_logprob(pw, w)
                    else:
                        if unseen is None:
                            wv = wl_j[l]
                            if wv is None:
                                wv = wl_j[l] = word_logprob(w)
                            unseen = esc2 + wv
                        cost = unseen
                    cand = (prev[0] + cost, prev[1] + 1, (j, prev[2]))
                    if entry is None or cand < entry:
                        entry = cand
            # each (j, l) batch owns its slot: inits fill key 0, batches key j
            by_end[l][j] = entry
    score, _, rev = min(by_end[n].values())
    return Segmentation(u, _unwind(rev), score)


def _dp_trigram(lm: LanguageModel, u: str) -> Segmentation:
    n = len(u)
    seen3 = lm.tables[3].counts
    tails3 = lm.tables[3].firsts_by_tail
    seen2 = lm.tables[2].counts
    esc2 = lm.escape_logprob(2)
    esc3 = lm.escape_logprob(3)
    word_logprob = lm.word_logprob
    bigram_logprob = lm.bigram_logprob
    trigram_logprob = lm.trigram_logprob
    spans = _spans_of(u)
    wl = [[None] * (n + 1) for _ in range(n)]

    def wlv(i: int, j: int) -> float:
        v = wl[i][j]
        if v is None:
            v = wl[i][j] = word_logprob(spans[i][j])
        return v

    def blv(b: int, e: int, f: int) -> float:
        """Bigram cost of u[e:f] after u[b:e], same floats as the model."""
        pw, w = spans[b][e], spans[e][f]
        if (pw, w) in seen2:
            return bigram_logprob(pw, w)
        return esc2 + wlv(e, f)

    one_word = (wlv(0, n), 1, ())
    if n == 1:
        return Segmentation(u, (), one_word[0])

    # by_end[f][b] maps the start a of the second-to-last word to the best
    # entry for a prefix of u[0:f] ending in words u[a:b], u[b:f]
    by_end: list[dict[int, dict[int, tuple]]] = [{} for _ in range(n + 1)]
    for e in range(1, n):
        first = wlv(0, e)
        for f in range(e + 1, n + 1):
            by_end[f][e] = {0: (first + blv(0, e, f), 2, (e, ()))}

    for e in range(2, n):
        for b, group in by_end[e].items():
            w1 = spans[b][e]
            agg_score, agg_n, agg_rev = min(group.values())
            spans_e = spans[e]
            for f in range(e + 1, n + 1):
                w = spans_e[f]
                firsts = tails3.get((w1, w))
                if firsts is None:
                    unseen = esc3 + blv(b, e, f)
                    entry = (agg_score + unseen, agg_n + 1, (e, agg_rev))
                else:
                    entry = None
                    unseen = None
                    for a, prev in group.items():
                        w2 = spans[a][b]
                        if (w2, w1, w) in seen3:
                            cost = trigram_logprob(w2, w1, w)
                        else:
                            if unseen is None:
                                unseen = esc3 + blv(b, e, f)
                            cost = unseen
                        cand = (prev[0] + cost, prev[1] + 1, (e, prev[2]))
                        if entry is None or cand < entry:
                            entry = cand
                # each (b, e, f) batch owns slot b; inits filled slot 0
                by_end[f][e][b] = entry

    top = one_word
    for group in by_end[n].values():
        for entry in group.values():
            if entry < top:
                top = entry
    score, _, rev = top
    return Segmentation(u, _unwind(rev), score)


def segment_and_learn(lm: LanguageModel, u) -> Segmentation:
    """Segment, then commit the inferred words to the model."""
    phonemes = _phonemes_of(u)
    seg = eval_utterance(lm, phonemes)
    words = seg.words
    if "".join(words) != phonemes:
        raise RuntimeError(f"inferred words do not rebuild {phonemes!r}")
    lm.commit_words(words)
    return seg


def train_on(lm: LanguageModel, u: Utterance) -> None:
    """Commit the gold segmentation without running the search."""
    lm.commit_words(u.gold_words)


@dataclass(frozen=True)
class RunStep:
    phase: str  # "train" or "test"
    index: int
    utterance: Utterance
    segmentation: Segmentation | None
    model: LanguageModel = field(repr=False)


def iter_run(corpus: Corpus, config: RunConfig) -> Iterator[RunStep]:
    """One full pass: gold-train the leading fraction, then learn-as-you-go.

    Yields a RunStep per utterance in corpus order; the model is shared
    across steps and mutates as the run proceeds.
    """
    lm = new_model(config, corpus.inventory)
    n_train = int(config.train_fraction * len(corpus))
    for index, utt in enumerate(corpus):
        if index < n_train:
            train_on(lm, utt)
            yield RunStep("train", index, utt, None, lm)
        else:
            seg = segment_and_learn(lm, utt.phonemes)
            yield RunStep("test", index, utt, seg, lm)


def run(corpus: Corpus, config: RunConfig) -> list[Segmentation]:
    """Segmentations of the test remainder, in corpus order."""
    return [s.segmentation for s in iter_run(corpus, config) if s.phase == "test"]

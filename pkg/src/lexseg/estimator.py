"""Scikit-learn compatible wrapper around the incremental segmenter.

Input is always an iterable of strings.  A line containing spaces is a
reference-segmented utterance (the spaces mark word boundaries); a line
without spaces is a raw phoneme sequence.  Output lines are segmented
utterances in the same space-separated format, so predictions can be fed
back in or scored by any conforming tool.

The underlying learner is online: `fit`/`partial_fit` consume utterances
one at a time, learning from the reference segmentation when one is given
and from their own best guess otherwise.  `predict` and `transform` are
pure (they do not update the model), which keeps the estimator usable
inside ordinary pipelines; use `fit_predict` for the learn-as-you-go
protocol where each utterance is segmented and then committed.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin

from .corpus import (CorpusError, PhonemeInventory, Utterance, boundaries_of,
                     default_inventory, validate_symbols)
from .ngram import DENOMINATOR_MODES, PHONEME_MODES, LanguageModel
from .scoring import UtteranceScore, match_words, score_run
from .segmenter import eval_utterance, segment_and_learn, train_on


def _check_lines(X) -> list[str]:
    lines = []
    for i, line in enumerate(X):
        if not isinstance(line, str):
            raise ValueError(f"utterance {i} is {type(line).__name__}, expected str")
        if not line.replace(" ", ""):
            raise ValueError(f"utterance {i} is empty")
        lines.append(line)
    return lines


def _as_utterance(line: str, inventory: PhonemeInventory, index: int) -> Utterance:
    words = [w for w in line.split(" ") if w]
    phonemes = "".join(words)
    try:
        validate_symbols(phonemes, inventory)
    except CorpusError as err:
        raise ValueError(f"utterance {index}: {err}") from err
    gold = boundaries_of(words) if " " in line.strip() else None
    return Utterance(phonemes, gold)


class WordSegmenter(BaseEstimator, TransformerMixin):
    """Online word segmenter for continuous phoneme (or letter) strings.

    Parameters
    ----------
    order : 1, 2 or 3
        Longest word n-gram the model conditions on.
    phoneme_mode : "uniform", "lexicon" or "corpus"
        How symbol probabilities are estimated (fixed uniform, from
        distinct learned words, or from all learned tokens).
    denominator_mode : "context" or "as-written"
        Which count conditions the higher-order estimates.
    phoneme_prior : float
        Pseudo-count given to every symbol so novel words keep nonzero
        probability.
    inventory : PhonemeInventory or None
        Symbol alphabet; None selects the built-in 50-phoneme set.
    """

    def __init__(self, order=1, phoneme_mode="lexicon",
                 denominator_mode="context", phoneme_prior=1.0, inventory=None):
        self.order = order
        self.phoneme_mode = phoneme_mode
        self.denominator_mode = denominator_mode
        self.phoneme_prior = phoneme_prior
        self.inventory = inventory

    def _validate_params(self):
        if self.order not in (1, 2, 3):
            raise ValueError(f"order must be 1, 2 or 3, got {self.order!r}")
        if self.phoneme_mode not in PHONEME_MODES:
            raise ValueError(f"unknown phoneme_mode {self.phoneme_mode!r}")
        if self.denominator_mode not in DENOMINATOR_MODES:
            raise ValueError(f"unknown denominator_mode {self.denominator_mode!r}")

    def _new_model(self) -> LanguageModel:
        inventory = self.inventory if self.inventory is not None else default_inventory()
        return LanguageModel(inventory=inventory, order=self.order,
                             phoneme_mode=self.phoneme_mode,
                             denominator_mode=self.denominator_mode,
                             phoneme_prior=self.phoneme_prior)

    def fit(self, X, y=None):
        """Reset the model, then consume X in order (see partial_fit)."""
        self._validate_params()
        self.model_ = self._new_model()
        self.n_utterances_ = 0
        return self.partial_fit(X)

    def partial_fit(self, X, y=None):
        """Consume more utterances without resetting learned tables.

        Segmented lines are committed as given; raw lines are segmented
        first and the inferred words committed.
        """
        if not hasattr(self, "model_"):
            self._validate_params()
            self.model_ = self._new_model()
            self.n_utterances_ = 0
        for i, line in enumerate(_check_lines(X)):
            utt = _as_utterance(line, self.model_.inventory, i)
            if utt.gold_boundaries is not None:
                train_on(self.model_, utt)
            else:
                segment_and_learn(self.model_, utt.phonemes)
            self.n_utterances_ += 1
        return self

    def fit_predict(self, X, y=None):
        """The learn-as-you-go protocol: segment each utterance, commit
        the result, and return the segmentations produced along the way."""
        self._validate_params()
        self.model_ = self._new_model()
        self.n_utterances_ = 0
        out = []
        for i, line in enumerate(_check_lines(X)):
            utt = _as_utterance(line, self.model_.inventory, i)
            seg = segment_and_learn(self.model_, utt.phonemes)
            out.append(seg.line())
            self.n_utterances_ += 1
        return out

    def predict(self, X):
        """Segment without learning; spaces in input lines are ignored."""
        self._require_fitted()
        out = []
        for i, line in enumerate(_check_lines(X)):
            utt = _as_utterance(line, self.model_.inventory, i)
            out.append(eval_utterance(self.model_, utt.phonemes).line())
        return out

    def transform(self, X):
        return self.predict(X)

    def score(self, X, y=None):
        """Word F1 against the reference segmentation carried in X's spaces."""
        self._require_fitted()
        scores = []
        for i, line in enumerate(_check_lines(X)):
            utt = _as_utterance(line, self.model_.inventory, i)
            if utt.gold_boundaries is None:
                raise ValueError(f"utterance {i} carries no reference segmentation")
            seg = eval_utterance(self.model_, utt.phonemes)
            tp, n_pred, n_gold = match_words(seg, utt)
            scores.append(UtteranceScore(tp, n_pred, n_gold))
        report = score_run(0, scores, block_size=max(len(scores), 1))
        p, r = report.precision, report.recall
        return 2 * p * r / (p + r) / 100.0 if p + r else 0.0

    @property
    def lexicon_size_(self) -> int:
        self._require_fitted()
        return self.model_.lexicon_size

    def _require_fitted(self):
        if not hasattr(self, "model_"):
            raise ValueError("this WordSegmenter instance is not fitted yet")

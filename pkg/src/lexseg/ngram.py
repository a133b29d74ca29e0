"""Back-off n-gram language model over words, with an open vocabulary.

Probability of a word sequence is composed from conditional estimates that
back off from trigram to bigram to unigram counts, reserving escape mass
N_k/(N_k + S_k) for unseen k-grams (N_k distinct k-grams seen, S_k their
frequency sum).  Below the unigram level lies an open vocabulary: a novel
word is scored as a normalized product of phoneme relative frequencies
terminated by an end-of-word sentinel.

All scores are negative natural-log probabilities, composed left to right
so results are bit-reproducible.  A model instance is single-writer:
commits and queries must not interleave across threads.
"""

from __future__ import annotations

import math

from .corpus import PhonemeInventory, default_inventory

PHONEME_MODES = ("uniform", "lexicon", "corpus")
DENOMINATOR_MODES = ("context", "as-written")


class ModelConsistencyError(RuntimeError):
    """Internal frequency tables disagree (should be unreachable)."""


class NGramTable:
    """Frequency table for word tuples of one fixed order.

    Maintains the distinct-key count N and the frequency sum S alongside
    the raw counts, since every probability in the model needs them.
    Tables of order 2 and 3 also index seen keys by their tail (the last
    one or two words), which lets the segmenter prove cheaply that no
    seen k-gram can end at a candidate word and take the back-off cost
    without enumerating histories.
    """

    __slots__ = ("order", "counts", "n_distinct", "total", "firsts_by_tail")

    def __init__(self, order: int):
        if order not in (1, 2, 3):
            raise ValueError(f"unsupported order {order}")
        self.order = order
        self.counts: dict[tuple[str, ...], int] = {}
        self.n_distinct = 0
        self.total = 0
        self.firsts_by_tail: dict | None = {} if order > 1 else None

    def increment(self, key: tuple[str, ...]) -> None:
        if len(key) != self.order:
            raise ValueError(f"key {key!r} does not match order {self.order}")
        c = self.counts.get(key, 0)
        if c == 0:
            self.n_distinct += 1
            if self.order == 2:
                self.firsts_by_tail.setdefault(key[1], set()).add(key[0])
            elif self.order == 3:
                self.firsts_by_tail.setdefault((key[1], key[2]), set()).add(key[0])
        self.counts[key] = c + 1
        self.total += 1


class PhonemeModel:
    """Relative frequencies over the phoneme alphabet plus the sentinel.

    mode "uniform" never learns; "corpus" counts the phonemes (plus one
    sentinel) of every committed token; "lexicon" counts them only when a
    token first enters the lexicon.  Every symbol starts with `prior`
    pseudo-counts so no symbol ever has zero probability unless the prior
    is deliberately set to 0.
    """

    def __init__(self, inventory: PhonemeInventory, mode: str = "lexicon",
                 prior: float = 1.0):
        if mode not in PHONEME_MODES:
            raise ValueError(f"unknown phoneme mode {mode!r}")
        if prior < 0:
            raise ValueError("prior must be nonnegative")
        self.inventory = inventory
        self.mode = mode
        self.prior = prior
        self.sentinel = inventory.sentinel
        self.counts: dict[str, float] = {s: prior for s in sorted(inventory.symbols)}
        self.counts[self.sentinel] = prior
        self.total = prior * (len(inventory) + 1)
        self._nll_cache: dict[str, float] = {}
        self._end_correction: float | None = None

    def relative_frequency(self, symbol: str) -> float:
        if symbol not in self.counts:
            raise ValueError(f"unknown symbol {symbol!r}")
        if self.total == 0:
            return 0.0
        return self.counts[symbol] / self.total

    def logprob(self, symbol: str) -> float:
        """Negative natural log of the symbol's relative frequency."""
        nll = self._nll_cache.get(symbol)
        if nll is None:
            p = self.relative_frequency(symbol)
            nll = -math.log(p) if p > 0.0 else math.inf
            self._nll_cache[symbol] = nll
        return nll

    def end_correction(self) -> float:
        """ln(1 - r(end)): the open-vocabulary renormalization term."""
        if self._end_correction is None:
            self._end_correction = math.log1p(-self.relative_frequency(self.sentinel))
        return self._end_correction

    def note_token(self, word: str, first_seen: bool) -> None:
        """Apply the mode's learning rule for one committed token."""
        if self.mode == "uniform":
            return
        if self.mode == "lexicon" and not first_seen:
            return
        for sym in word:
            if sym not in self.counts or sym == self.sentinel:
                raise ValueError(f"unknown symbol {sym!r}")
            self.counts[sym] += 1
        self.counts[self.sentinel] += 1
        self.total += len(word) + 1
        self._nll_cache.clear()
        self._end_correction = None


class LanguageModel:
    """Word n-gram tables (orders 1..order) plus the phoneme model."""

    def __init__(self, inventory: PhonemeInventory | None = None, order: int = 1,
                 phoneme_mode: str = "lexicon", denominator_mode: str = "context",
                 phoneme_prior: float = 1.0):
        if order not in (1, 2, 3):
            raise ValueError(f"order must be 1, 2 or 3, got {order}")
        if denominator_mode not in DENOMINATOR_MODES:
            raise ValueError(f"unknown denominator mode {denominator_mode!r}")
        if inventory is None:
            inventory = default_inventory()
        self.inventory = inventory
        self.order = order
        self.denominator_mode = denominator_mode
        self.tables = {k: NGramTable(k) for k in range(1, order + 1)}
        self.phonemes = PhonemeModel(inventory, phoneme_mode, phoneme_prior)

    @property
    def lexicon_size(self) -> int:
        return self.tables[1].n_distinct

    @property
    def token_count(self) -> int:
        return self.tables[1].total

    def escape_logprob(self, order: int) -> float:
        """-ln of the escape mass N_k/(N_k+S_k); 0 on an empty table.

        The empty-table case is 0/0, defined as probability 1 so the very
        first utterance backs off to the phoneme level at no cost.
        """
        t = self.tables[order]
        denom = t.n_distinct + t.total
        if denom == 0:
            return 0.0
        return -math.log(t.n_distinct / denom)

    def phoneme_logprob(self, symbol: str) -> float:
        return self.phonemes.logprob(symbol)

    def novel_word_logprob(self, word: str) -> float:
        """Open-vocabulary word score, excluding the unigram escape factor.

        -ln [ r(end) * prod_j r(word[j]) / (1 - r(end)) ], where r is the
        phoneme relative-frequency function.  The division renormalizes
        the geometric length distribution so novel-word probabilities sum
        to 1 over all finite words.
        """
        if not word:
            raise ValueError("word must be nonempty")
        ph = self.phonemes
        cache = ph._nll_cache
        score = cache.get(ph.sentinel)
        if score is None:
            score = ph.logprob(ph.sentinel)
        for sym in word:
            nll = cache.get(sym)
            if nll is None:
                nll = ph.logprob(sym)
            score += nll
        score += ph.end_correction()
        return score

    def word_logprob(self, word: str) -> float:
        """Unigram estimate: seen mass C(w)/(N1+S1), else escape + novel."""
        t1 = self.tables[1]
        c = t1.counts.get((word,), 0)
        if c:
            return -math.log(c / (t1.n_distinct + t1.total))
        return self.escape_logprob(1) + self.novel_word_logprob(word)

    def bigram_logprob(self, prev: str, word: str) -> float:
        """Conditional estimate of `word` after `prev`, with back-off."""
        t2 = self.tables[2]
        c2 = t2.counts.get((prev, word), 0)
        if c2:
            cond = prev if self.denominator_mode == "context" else word
            d = self.tables[1].counts.get((cond,), 0)
            if d == 0:
                raise ModelConsistencyError(
                    f"bigram {prev!r},{word!r} seen but unigram {cond!r} has count 0")
            return -math.log(t2.total * c2 / ((t2.n_distinct + t2.total) * d))
        return self.escape_logprob(2) + self.word_logprob(word)

    def trigram_logprob(self, w2: str, w1: str, word: str) -> float:
        """Conditional estimate of `word` after `w2 w1`, with back-off."""
        t3 = self.tables[3]
        c3 = t3.counts.get((w2, w1, word), 0)
        if c3:
            key = (w2, w1) if self.denominator_mode == "context" else (w1, word)
            d = self.tables[2].counts.get(key, 0)
            if d == 0:
                raise ModelConsistencyError(
                    f"trigram {w2!r},{w1!r},{word!r} seen but bigram {key!r} has count 0")
            return -math.log(t3.total * c3 / ((t3.n_distinct + t3.total) * d))
        return self.escape_logprob(3) + self.bigram_logprob(w1, word)

    def commit_words(self, words) -> None:
        """Learn one utterance's inferred (or gold) word sequence.

        Increments each word's unigram count, each adjacent pair's bigram
        count and each consecutive triple's trigram count (orders above
        the model's are skipped), and updates phoneme counts per the
        phoneme mode.  No utterance-boundary markers are added.
        """
        words = tuple(words)
        if not words:
            raise ValueError("cannot commit an empty word sequence")
        t1 = self.tables[1]
        for w in words:
            first = (w,) not in t1.counts
            t1.increment((w,))
            self.phonemes.note_token(w, first)
        if self.order >= 2:
            t2 = self.tables[2]
            for pair in zip(words, words[1:]):
                t2.increment(pair)
        if self.order >= 3:
            t3 = self.tables[3]
            for triple in zip(words, words[1:], words[2:]):
                t3.increment(triple)

    def dump(self) -> str:
        """Line-oriented snapshot of every table, for inspection and tests."""
        out = []
        for k in range(1, self.order + 1):
            out.append(f"[order-{k}]")
            for key in sorted(self.tables[k].counts):
                out.append(f"{' '.join(key)}\t{self.tables[k].counts[key]}")
        out.append("[phonemes]")
        for sym in sorted(self.phonemes.counts):
            label = "<end>" if sym == self.phonemes.sentinel else sym
            c = self.phonemes.counts[sym]
            shown = int(c) if float(c).is_integer() else c
            out.append(f"{label}\t{shown}")
        return "\n".join(out) + "\n"

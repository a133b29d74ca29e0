"""Phonemic transcript corpora: parsing, validation, permutation, stats.

A corpus file is plain ASCII/UTF-8 text, one utterance per line, words
separated by single spaces.  Spaces carry the reference (gold) word
boundaries; the phoneme string of an utterance is the line with spaces
removed.  Corpus values are immutable after parsing and safe to share
across concurrent runs.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, field

from .rng import shuffled

# Transcription alphabet used by the bundled child-directed-speech corpora:
# one ASCII code per phoneme, tagged by class.  Note that '#' here is a
# vowel+r phoneme ("arm"), which is why the end-of-word sentinel below must
# be an out-of-band symbol rather than the customary '#'.
DEFAULT_INVENTORY_TABLE = (
    ("p", "consonant"), ("b", "consonant"), ("m", "consonant"),
    ("t", "consonant"), ("d", "consonant"), ("n", "consonant"),
    ("k", "consonant"), ("g", "consonant"), ("N", "consonant"),
    ("f", "consonant"), ("v", "consonant"), ("T", "consonant"),
    ("D", "consonant"), ("s", "consonant"), ("z", "consonant"),
    ("S", "consonant"), ("Z", "consonant"), ("h", "consonant"),
    ("c", "consonant"), ("G", "consonant"), ("l", "consonant"),
    ("r", "consonant"), ("y", "consonant"), ("w", "consonant"),
    ("W", "consonant"), ("L", "consonant"), ("M", "consonant"),
    ("~", "consonant"),
    ("I", "vowel"), ("E", "vowel"), ("&", "vowel"), ("A", "vowel"),
    ("a", "vowel"), ("O", "vowel"), ("U", "vowel"), ("6", "vowel"),
    ("i", "vowel"), ("e", "vowel"), ("u", "vowel"), ("o", "vowel"),
    ("9", "vowel"), ("Q", "vowel"), ("7", "vowel"),
    ("3", "vowel+r"), ("R", "vowel+r"), ("#", "vowel+r"),
    ("%", "vowel+r"), ("*", "vowel+r"), ("(", "vowel+r"),
    (")", "vowel+r"),
)

# Reserved end-of-word marker.  Never appears in transcripts; chosen
# out-of-band (NUL) so it cannot collide with any printable alphabet.
SENTINEL = "\x00"

_VALID_CLASSES = ("consonant", "vowel", "vowel+r")


class CorpusError(Exception):
    """Raised for malformed corpus or inventory input."""


class ParseError(CorpusError):
    """Corpus text rejected; carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class PhonemeInventory:
    """The transcription alphabet plus the reserved end-of-word sentinel."""

    symbols: frozenset[str]
    sentinel: str = SENTINEL
    classes: dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for sym in self.symbols:
            if len(sym) != 1:
                raise CorpusError(f"inventory symbol {sym!r} is not a single character")
        if self.sentinel in self.symbols:
            raise CorpusError("sentinel must not be a transcription symbol")

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.symbols

    def __len__(self) -> int:
        return len(self.symbols)


def default_inventory() -> PhonemeInventory:
    """The built-in 50-phoneme alphabet (28 consonants, 15 vowels, 7 vowel+r)."""
    return PhonemeInventory(
        symbols=frozenset(sym for sym, _ in DEFAULT_INVENTORY_TABLE),
        classes={sym: cls for sym, cls in DEFAULT_INVENTORY_TABLE},
    )


def load_inventory(path) -> PhonemeInventory:
    """Read an inventory file: one symbol per line, optional class tag.

    Lines look like "p consonant" or just "p".  Blank lines are skipped.
    """
    symbols = []
    classes = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            parts = line.split(None, 1)
            sym = parts[0]
            if len(sym) != 1:
                raise CorpusError(f"{path}: line {lineno}: symbol {sym!r} is not one character")
            if sym in classes:
                raise CorpusError(f"{path}: line {lineno}: duplicate symbol {sym!r}")
            if len(parts) == 2:
                cls = parts[1].strip()
                if cls not in _VALID_CLASSES:
                    raise CorpusError(f"{path}: line {lineno}: unknown class {cls!r}")
                classes[sym] = cls
            else:
                classes[sym] = ""
            symbols.append(sym)
    if not symbols:
        raise CorpusError(f"{path}: empty inventory")
    return PhonemeInventory(symbols=frozenset(symbols), classes=classes)


def save_inventory(inventory: PhonemeInventory, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sym in sorted(inventory.symbols):
            cls = inventory.classes.get(sym, "")
            fh.write(f"{sym} {cls}\n" if cls else f"{sym}\n")


@dataclass(frozen=True)
class Utterance:
    """One line of the corpus: a phoneme string plus optional gold cuts.

    gold_boundaries are interior cut positions, strictly increasing, each
    in (0, len(phonemes)).  None means the reference segmentation is
    unknown (raw test input).
    """

    phonemes: str
    gold_boundaries: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.gold_boundaries is not None:
            prev = 0
            for cut in self.gold_boundaries:
                if not (0 < cut < len(self.phonemes)):
                    raise CorpusError(
                        f"gold boundary {cut} out of range for {self.phonemes!r}")
                if cut <= prev:
                    raise CorpusError("gold boundaries must be strictly increasing")
                prev = cut

    def __len__(self) -> int:
        return len(self.phonemes)

    @property
    def gold_words(self) -> tuple[str, ...]:
        if self.gold_boundaries is None:
            raise CorpusError(f"utterance {self.phonemes!r} has no gold segmentation")
        return split_at(self.phonemes, self.gold_boundaries)

    def gold_line(self) -> str:
        return " ".join(self.gold_words)


def split_at(phonemes: str, boundaries: tuple[int, ...]) -> tuple[str, ...]:
    """Cut a phoneme string at the given interior positions."""
    cuts = (0, *boundaries, len(phonemes))
    return tuple(phonemes[a:b] for a, b in zip(cuts, cuts[1:]))


def boundaries_of(words) -> tuple[int, ...]:
    """Interior cut positions implied by a word sequence."""
    cuts = []
    pos = 0
    for w in list(words)[:-1]:
        pos += len(w)
        cuts.append(pos)
    return tuple(cuts)


@dataclass(frozen=True)
class Corpus:
    utterances: tuple[Utterance, ...]
    inventory: PhonemeInventory

    def __len__(self) -> int:
        return len(self.utterances)

    def __iter__(self):
        return iter(self.utterances)

    def __getitem__(self, i):
        return self.utterances[i]


def validate_symbols(phonemes: str, inventory: PhonemeInventory) -> None:
    """Raise CorpusError naming the first symbol outside the inventory."""
    for pos, sym in enumerate(phonemes):
        if sym not in inventory:
            raise CorpusError(f"symbol {sym!r} at position {pos} not in inventory")


def parse_corpus(text, inventory: PhonemeInventory | None = None) -> Corpus:
    """Parse corpus text (str, bytes, or a text stream) into a Corpus.

    Words are space-delimited; spaces become gold boundaries.  Blank lines
    and lines containing only spaces are skipped (the latter with a
    warning).  A symbol outside the inventory raises ParseError with its
    1-based line and column.
    """
    if inventory is None:
        inventory = default_inventory()
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if isinstance(text, str):
        stream = io.StringIO(text)
    else:
        stream = text

    utterances = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line:
            continue
        if not line.strip(" "):
            warnings.warn(f"line {lineno}: only spaces, skipped", stacklevel=2)
            continue
        words = []
        column = 1
        for token in line.split(" "):
            if token:
                for offset, sym in enumerate(token):
                    if sym not in inventory:
                        raise ParseError(
                            f"symbol {sym!r} not in inventory", lineno, column + offset)
                words.append(token)
            column += len(token) + 1
        phonemes = "".join(words)
        utterances.append(Utterance(phonemes, boundaries_of(words)))
    return Corpus(tuple(utterances), inventory)


def load_corpus(path, inventory: PhonemeInventory | None = None) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh, inventory)


def serialize_corpus(corpus: Corpus) -> str:
    """Render back to corpus text: words single-spaced, newline-terminated."""
    return "".join(u.gold_line() + "\n" for u in corpus)


def permute(corpus: Corpus, seed: int) -> Corpus:
    """Reorder utterances uniformly at random, deterministic per seed."""
    return Corpus(tuple(shuffled(corpus.utterances, seed)), corpus.inventory)


def concat_self(corpus: Corpus) -> Corpus:
    """The corpus followed by an identical copy of itself."""
    return Corpus(corpus.utterances + corpus.utterances, corpus.inventory)


@dataclass(frozen=True)
class CorpusStats:
    n_utterances: int
    n_word_tokens: int
    n_distinct_words: int
    mean_utterance_length: float


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Exact counts over the gold segmentation; requires gold boundaries."""
    tokens = 0
    distinct = set()
    total_len = 0
    for i, u in enumerate(corpus):
        if u.gold_boundaries is None:
            raise CorpusError(f"utterance {i} ({u.phonemes!r}) has no gold segmentation")
        words = u.gold_words
        tokens += len(words)
        distinct.update(words)
        total_len += len(u.phonemes)
    n = len(corpus)
    return CorpusStats(
        n_utterances=n,
        n_word_tokens=tokens,
        n_distinct_words=len(distinct),
        mean_utterance_length=total_len / n if n else 0.0,
    )


def gold_lexicon(corpus: Corpus) -> frozenset[str]:
    """Every word occurring anywhere in the gold segmentation."""
    words = set()
    for u in corpus:
        words.update(u.gold_words)
    return frozenset(words)

import random

import pytest

from lexseg.corpus import PhonemeInventory, parse_corpus
from lexseg.ngram import LanguageModel

# minimal alphabets for enumeration-heavy tests
ABCD = PhonemeInventory(frozenset("abcd"))
ABC = PhonemeInventory(frozenset("abc"))


@pytest.fixture
def abcd_inventory():
    return ABCD


def random_utterance(rng: random.Random, alphabet="abcd", max_len=12, min_len=1):
    n = rng.randint(min_len, max_len)
    return "".join(rng.choice(alphabet) for _ in range(n))


def random_model(rng: random.Random, order: int, alphabet="abcd",
                 utterance: str | None = None) -> LanguageModel:
    """A model with a small random table state built via real commits.

    When `utterance` is given, some committed words are drawn from random
    segmentations of it so the decode exercises seen n-grams, not just
    the back-off path.
    """
    inv = PhonemeInventory(frozenset(alphabet))
    lm = LanguageModel(inventory=inv, order=order,
                       phoneme_mode=rng.choice(["uniform", "lexicon", "corpus"]),
                       denominator_mode=rng.choice(["context", "as-written"]))
    for _ in range(rng.randint(0, 6)):
        if utterance and rng.random() < 0.5:
            cuts = sorted(rng.sample(range(1, len(utterance)),
                                     rng.randint(0, min(3, len(utterance) - 1)))) \
                if len(utterance) > 1 else []
            pieces = []
            prev = 0
            for c in [*cuts, len(utterance)]:
                pieces.append(utterance[prev:c])
                prev = c
            lm.commit_words(pieces)
        else:
            words = [random_utterance(rng, alphabet, max_len=4)
                     for _ in range(rng.randint(1, 5))]
            lm.commit_words(words)
    return lm


# Synthetic test language: every word is one consonant followed by one or
# more vowels, so any concatenation of vocabulary words parses uniquely
# and generated corpora are internally consistent by construction.
_ONSETS = "ptkbg"
_VOWELS = "aeiou"


def make_vocabulary(rng: random.Random, n_words: int, reserved=()) -> list[str]:
    vocab: list[str] = []
    seen = set(reserved)
    while len(vocab) < n_words:
        w = rng.choice(_ONSETS) + "".join(
            rng.choice(_VOWELS) for _ in range(rng.randint(1, 3)))
        if w not in seen:
            seen.add(w)
            vocab.append(w)
    return vocab


def make_corpus_lines(rng: random.Random, n_utterances: int, vocab) -> list[str]:
    # zipf-ish frequencies so the lexicon-growth curve looks natural
    weights = [1.0 / (rank + 1) for rank in range(len(vocab))]
    lines = []
    for _ in range(n_utterances):
        n = rng.randint(1, 5)
        lines.append(" ".join(rng.choices(vocab, weights=weights, k=n)))
    return lines


def make_corpus(seed: int, n_utterances: int, n_words: int = 30, reserved=()):
    rng = random.Random(seed)
    vocab = make_vocabulary(rng, n_words, reserved)
    lines = make_corpus_lines(rng, n_utterances, vocab)
    return parse_corpus("\n".join(lines) + "\n")


# words reserved for the planted transcription inconsistency below
_PLANT_RESERVED = ("da", "ko", "ra", "kora")


def build_doubling_corpus(planted: bool, seed=2024, n=500):
    """Internally consistent corpus for train-on-self experiments.

    With `planted`, one utterance transcribes the pair "ko ra" as the
    single word "kora" while ten others keep it split, mimicking a manual
    transcription slip.  Returns (corpus, index of the planted utterance).
    """
    rng = random.Random(seed)
    vocab = make_vocabulary(rng, 30, reserved=_PLANT_RESERVED)
    lines = make_corpus_lines(rng, n - 10 - (1 if planted else 0), vocab)
    for k in range(10):
        lines.insert(len(lines) * (k + 1) // 11, "da ko ra")
    planted_index = None
    if planted:
        planted_index = len(lines) // 2
        lines.insert(planted_index, "da kora")
    return parse_corpus("\n".join(lines) + "\n"), planted_index

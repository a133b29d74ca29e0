"""Incremental unsupervised word segmentation with back-off n-gram models."""

__version__ = "0.1.0"

from .corpus import (Corpus, CorpusError, ParseError, PhonemeInventory,
                     Utterance, concat_self, corpus_stats, default_inventory,
                     gold_lexicon, load_corpus, load_inventory, parse_corpus,
                     permute, serialize_corpus)
from .ngram import LanguageModel, NGramTable, PhonemeModel
from .scoring import (BlockReport, RunReport, UtteranceScore, aggregate_runs,
                      block_scores, match_words, score_run)
from .segmenter import (RunConfig, Segmentation, eval_utterance, iter_run,
                        run, segment_and_learn, train_on)

__all__ = [
    "Corpus", "CorpusError", "ParseError", "PhonemeInventory", "Utterance",
    "concat_self", "corpus_stats", "default_inventory", "gold_lexicon",
    "load_corpus", "load_inventory", "parse_corpus", "permute",
    "serialize_corpus",
    "LanguageModel", "NGramTable", "PhonemeModel",
    "BlockReport", "RunReport", "UtteranceScore", "aggregate_runs",
    "block_scores", "match_words", "score_run",
    "RunConfig", "Segmentation", "eval_utterance", "iter_run", "run",
    "segment_and_learn", "train_on",
    "WordSegmenter",
]


def __getattr__(name):
    # imported lazily so the core package does not pay the sklearn import
    if name == "WordSegmenter":
        from .estimator import WordSegmenter
        return WordSegmenter
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")

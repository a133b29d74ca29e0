import math
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexseg.corpus import PhonemeInventory, default_inventory
from lexseg.ngram import LanguageModel, ModelConsistencyError, NGramTable, PhonemeModel

ABC = PhonemeInventory(frozenset("abc"))
AB = PhonemeInventory(frozenset("ab"))
A = PhonemeInventory(frozenset("a"))


def test_uniform_phonemes_over_default_inventory():
    pm = PhonemeModel(default_inventory(), mode="uniform")
    for sym in ("a", "#", pm.sentinel):
        assert pm.relative_frequency(sym) == pytest.approx(1 / 51, abs=1e-15)


def test_uniform_mode_never_learns():
    pm = PhonemeModel(AB, mode="uniform")
    pm.note_token("ab", first_seen=True)
    assert pm.relative_frequency("a") == pm.relative_frequency("b") == \
        pm.relative_frequency(pm.sentinel) == pytest.approx(1 / 3)


def test_corpus_mode_counts_every_token():
    # committing "a" then "ab" with no prior: a:2, b:1, sentinel:2
    pm = PhonemeModel(AB, mode="corpus", prior=0.0)
    pm.note_token("a", first_seen=True)
    pm.note_token("ab", first_seen=True)
    assert pm.relative_frequency("a") == pytest.approx(2 / 5)
    assert pm.relative_frequency("b") == pytest.approx(1 / 5)
    assert pm.relative_frequency(pm.sentinel) == pytest.approx(2 / 5)


def test_lexicon_mode_ignores_repeat_tokens():
    # tokens a, a, ab -> lexicon {a, ab}: same counts as the corpus case
    lm = LanguageModel(AB, phoneme_mode="lexicon", phoneme_prior=0.0)
    lm.commit_words(["a"])
    lm.commit_words(["a"])
    lm.commit_words(["ab"])
    assert lm.phonemes.relative_frequency("a") == pytest.approx(2 / 5)
    assert lm.phonemes.relative_frequency("b") == pytest.approx(1 / 5)


def test_phoneme_logprob_rejects_unknown_symbol():
    lm = LanguageModel(AB)
    with pytest.raises(ValueError, match="unknown symbol"):
        lm.phoneme_logprob("z")


def test_phoneme_frequencies_sum_to_one_after_commits():
    lm = LanguageModel(ABC, phoneme_mode="corpus")
    lm.commit_words(["ab", "c", "abc"])
    total = sum(lm.phonemes.relative_frequency(s)
                for s in [*ABC.symbols, lm.phonemes.sentinel])
    assert abs(total - 1.0) < 1e-12


def test_novel_word_logprob_uniform_51():
    lm = LanguageModel(default_inventory(), phoneme_mode="uniform")
    expected = -math.log((1 / 51) ** 3 / (50 / 51))
    assert lm.novel_word_logprob("tu") == pytest.approx(expected, abs=1e-12)
    assert lm.novel_word_logprob("tu") == pytest.approx(11.776, abs=1e-3)


def test_novel_word_logprob_degenerate_alphabet():
    # one symbol plus sentinel, uniform: r(end) = r(a) = 1/2 -> ln 2
    lm = LanguageModel(A)
    assert lm.novel_word_logprob("a") == pytest.approx(math.log(2), abs=1e-12)


@pytest.mark.parametrize("mode", ["uniform", "corpus", "lexicon"])
def test_novel_word_mass_is_truncated_geometric(mode):
    # sum of novel-word probabilities over words of length <= K equals
    # 1 - (1 - r(end))^K: the open vocabulary is properly normalized
    lm = LanguageModel(ABC, phoneme_mode=mode)
    if mode != "uniform":
        lm.commit_words(["ab", "ca"])
        lm.commit_words(["b", "ab"])
    K = 6
    total = 0.0
    for length in range(1, K + 1):
        for word in product("abc", repeat=length):
            total += math.exp(-lm.novel_word_logprob("".join(word)))
    r_end = lm.phonemes.relative_frequency(lm.phonemes.sentinel)
    assert abs(total - (1 - (1 - r_end) ** K)) < 1e-9


def test_word_logprob_on_flip_point_lexicon():
    lm = LanguageModel(default_inventory())
    lm.commit_words(["damnbritish"])
    lm.commit_words(["damn"])
    lm.commit_words(["damn"])
    for _ in range(7):
        lm.commit_words(["british"])
    assert lm.word_logprob("damnbritish") == pytest.approx(-math.log(1 / 13), abs=1e-12)
    assert lm.word_logprob("damn") == pytest.approx(-math.log(2 / 13), abs=1e-12)
    assert lm.word_logprob("british") == pytest.approx(-math.log(7 / 13), abs=1e-12)
    # the rounded scores quoted for this configuration
    assert lm.word_logprob("damnbritish") == pytest.approx(2.6, abs=0.05)
    assert lm.word_logprob("damn") == pytest.approx(1.9, abs=0.05)
    assert lm.word_logprob("british") == pytest.approx(0.6, abs=0.05)


def test_word_logprob_empty_lexicon_backs_off_at_no_cost():
    lm = LanguageModel(ABC, phoneme_mode="uniform")
    assert lm.word_logprob("ab") == lm.novel_word_logprob("ab")


def test_unigram_masses_partition_unity():
    lm = LanguageModel(AB)
    lm.commit_words(["a", "a", "a", "b"])
    t1 = lm.tables[1]
    seen_mass = sum(c / (t1.n_distinct + t1.total) for c in t1.counts.values())
    escape_mass = t1.n_distinct / (t1.n_distinct + t1.total)
    assert seen_mass == pytest.approx(4 / 6)
    assert escape_mass == pytest.approx(2 / 6)
    assert abs(seen_mass + escape_mass - 1.0) < 1e-12
    assert math.exp(-lm.word_logprob("a")) == pytest.approx(3 / 6, abs=1e-12)
    assert math.exp(-lm.word_logprob("b")) == pytest.approx(1 / 6, abs=1e-12)


def test_bigram_seen_branch():
    # C(a,b)=2, C(a)=2, N2=1, S2=2 -> -ln[(2/3)(2/2)] = ln(3/2)
    lm = LanguageModel(AB, order=2)
    lm.commit_words(["a", "b"])
    lm.commit_words(["a", "b"])
    assert lm.bigram_logprob("a", "b") == pytest.approx(math.log(3 / 2), abs=1e-12)


def test_bigram_unseen_on_empty_table_is_word_logprob():
    lm = LanguageModel(AB, order=2)
    assert lm.bigram_logprob("a", "b") == lm.word_logprob("b")


def test_bigram_escape_added_for_unseen_pair():
    lm = LanguageModel(AB, order=2)
    lm.commit_words(["a", "b"])
    expected = lm.escape_logprob(2) + lm.word_logprob("a")
    assert lm.bigram_logprob("b", "a") == expected
    assert lm.escape_logprob(2) == pytest.approx(-math.log(1 / 2), abs=1e-15)


def test_bigram_seen_mass_sums_to_retained_mass():
    # context mode: when a word never ends an utterance, its successors
    # exhaust its count and the seen branch sums to S2/(N2+S2)
    lm = LanguageModel(ABC, order=2)
    lm.commit_words(["a", "b"])
    lm.commit_words(["a", "c"])
    lm.commit_words(["a", "b"])
    t2 = lm.tables[2]
    total = sum(math.exp(-lm.bigram_logprob("a", w)) for w in ("b", "c"))
    assert abs(total - t2.total / (t2.n_distinct + t2.total)) < 1e-12


def test_bigram_denominator_modes_differ():
    # C(a,b)=1, C(a)=1, C(b)=3: context divides by C(a), as-written by C(b)
    for mode, expected in [("context", math.log(2)), ("as-written", math.log(6))]:
        lm = LanguageModel(AB, order=2, denominator_mode=mode)
        lm.commit_words(["a", "b"])
        lm.commit_words(["b"])
        lm.commit_words(["b"])
        assert lm.bigram_logprob("a", "b") == pytest.approx(expected, abs=1e-12)


def test_trigram_seen_branch():
    # C(a,b,c)=1, C(a,b)=1, N3=1, S3=1 -> -ln[(1/2)(1/1)] = ln 2
    lm = LanguageModel(ABC, order=3)
    lm.commit_words(["a", "b", "c"])
    assert lm.trigram_logprob("a", "b", "c") == pytest.approx(math.log(2), abs=1e-12)


def test_trigram_denominator_modes_differ():
    # context divides by C(a,b)=1, as-written by C(b,c)=3
    for mode, expected in [("context", math.log(2)), ("as-written", math.log(6))]:
        lm = LanguageModel(ABC, order=3, denominator_mode=mode)
        lm.commit_words(["a", "b", "c"])
        lm.commit_words(["b", "c"])
        lm.commit_words(["b", "c"])
        assert lm.trigram_logprob("a", "b", "c") == pytest.approx(expected, abs=1e-12)


def test_trigram_unseen_pays_escape_then_backs_off():
    lm = LanguageModel(ABC, order=3)
    lm.commit_words(["a", "b", "c"])
    expected = lm.escape_logprob(3) + lm.bigram_logprob("b", "a")
    assert lm.trigram_logprob("c", "b", "a") == expected
    assert lm.trigram_logprob("c", "b", "a") > lm.bigram_logprob("b", "a")


def test_commit_updates_all_orders():
    lm = LanguageModel(ABC, order=3)
    lm.commit_words(["a", "bc", "c"])
    assert lm.tables[1].counts == {("a",): 1, ("bc",): 1, ("c",): 1}
    assert lm.tables[2].counts == {("a", "bc"): 1, ("bc", "c"): 1}
    assert lm.tables[3].counts == {("a", "bc", "c"): 1}


def test_commit_single_word_adds_no_higher_orders():
    lm = LanguageModel(ABC, order=3)
    lm.commit_words(["ab"])
    assert lm.tables[1].n_distinct == 1
    assert lm.tables[2].counts == {}
    assert lm.tables[3].counts == {}


def test_commit_orders_above_model_order_skipped():
    lm = LanguageModel(ABC, order=1)
    lm.commit_words(["a", "b", "c"])
    assert set(lm.tables) == {1}


def test_commit_corpus_mode_phoneme_effect():
    # [a, bc, ca] in corpus mode: one sentinel per inferred word
    lm = LanguageModel(ABC, phoneme_mode="corpus", phoneme_prior=0.0)
    lm.commit_words(["a", "bc", "ca"])
    ph = lm.phonemes
    assert ph.counts["a"] == 2
    assert ph.counts["b"] == 1
    assert ph.counts["c"] == 2
    assert ph.counts[ph.sentinel] == 3


def test_commit_rejects_empty_sequence():
    lm = LanguageModel(ABC)
    with pytest.raises(ValueError):
        lm.commit_words([])


def test_lexicon_and_corpus_modes_agree_when_words_unique():
    # degenerate case: every committed word occurs exactly once
    words = ["a", "ab", "bc", "ca", "abc"]
    by_mode = {}
    for mode in ("lexicon", "corpus"):
        lm = LanguageModel(ABC, phoneme_mode=mode)
        lm.commit_words(words)
        by_mode[mode] = dict(lm.phonemes.counts)
    assert by_mode["lexicon"] == by_mode["corpus"]


def test_ngram_table_rejects_wrong_arity():
    t = NGramTable(2)
    with pytest.raises(ValueError):
        t.increment(("a",))


def test_consistency_error_when_tables_disagree():
    lm = LanguageModel(AB, order=2)
    lm.tables[2].increment(("a", "b"))  # bigram without its unigram
    with pytest.raises(ModelConsistencyError):
        lm.bigram_logprob("a", "b")


def test_trigram_requires_order_3_model():
    lm = LanguageModel(ABC, order=2)
    with pytest.raises(KeyError):
        lm.trigram_logprob("a", "b", "c")


words_strategy = st.lists(
    st.lists(st.text(alphabet="abc", min_size=1, max_size=4), min_size=1, max_size=6),
    min_size=1, max_size=10)


@given(words_strategy)
@settings(max_examples=60)
def test_table_counters_match_brute_force_recount(utterances):
    lm = LanguageModel(ABC, order=3)
    for words in utterances:
        lm.commit_words(words)
    flat = [w for words in utterances for w in words]
    assert lm.tables[1].n_distinct == len(set(flat))
    assert lm.tables[1].total == len(flat)
    bigrams = [p for ws in utterances for p in zip(ws, ws[1:])]
    trigrams = [t for ws in utterances for t in zip(ws, ws[1:], ws[2:])]
    assert lm.tables[2].total == len(bigrams)
    assert lm.tables[2].n_distinct == len(set(bigrams))
    assert lm.tables[3].total == len(trigrams)
    assert lm.tables[3].n_distinct == len(set(trigrams))
    # adjacency-slot identities across orders
    assert lm.tables[2].total == lm.tables[1].total - len(utterances)
    assert lm.tables[3].total == \
        lm.tables[2].total - sum(1 for ws in utterances if len(ws) >= 2)


@given(words_strategy, st.sampled_from(["uniform", "lexicon", "corpus"]))
@settings(max_examples=60)
def test_all_logprobs_finite_and_nonnegative(utterances, mode):
    lm = LanguageModel(ABC, order=3, phoneme_mode=mode)
    for words in utterances:
        lm.commit_words(words)
    probes = ["a", "ab", "abc", "cb", utterances[0][0]]
    for w in probes:
        for v in (lm.word_logprob(w), lm.bigram_logprob(probes[0], w),
                  lm.trigram_logprob(probes[1], probes[0], w)):
            assert math.isfinite(v)
            assert v >= 0.0


def test_zero_prior_gives_infinite_novel_cost():
    lm = LanguageModel(ABC, phoneme_mode="corpus", phoneme_prior=0.0)
    assert lm.novel_word_logprob("a") == math.inf


def test_dump_sections_and_sentinel_rendering():
    lm = LanguageModel(AB, order=2, phoneme_mode="corpus")
    lm.commit_words(["a", "ab"])
    text = lm.dump()
    lines = text.splitlines()
    assert "[order-1]" in lines
    assert "[order-2]" in lines
    assert "[phonemes]" in lines
    assert "a\t1" in lines
    assert "a ab\t1" in lines
    assert any(line.startswith("<end>\t") for line in lines)
    assert "\x00" not in text


def test_model_rejects_bad_order():
    with pytest.raises(ValueError):
        LanguageModel(ABC, order=4)


def test_model_rejects_bad_modes():
    with pytest.raises(ValueError):
        LanguageModel(ABC, phoneme_mode="zipf")
    with pytest.raises(ValueError):
        LanguageModel(ABC, denominator_mode="literal")

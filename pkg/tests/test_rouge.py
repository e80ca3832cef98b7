import random
import statistics
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from verifact.rouge import (RougeScore, aggregate, lcs_length, rouge_l, rouge_n,
                            score_all)

# -- independent oracles ----------------------------------------------------


def oracle_ngram_counts(tokens, n):
    return [tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]


def oracle_rouge_n(cand, ref, n):
    cand_grams = oracle_ngram_counts(cand, n)
    ref_grams = oracle_ngram_counts(ref, n)
    overlap = sum(min(cand_grams.count(g), ref_grams.count(g)) for g in set(cand_grams))
    p = overlap / len(cand_grams) if cand_grams else 0.0
    r = overlap / len(ref_grams) if ref_grams else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def is_subsequence(sub, seq):
    it = iter(seq)
    return all(tok in it for tok in sub)


def oracle_lcs(a, b):
    short, long_ = (a, b) if len(a) <= len(b) else (b, a)
    best = 0
    for size in range(len(short), 0, -1):
        for combo in combinations(range(len(short)), size):
            if is_subsequence([short[i] for i in combo], long_):
                best = size
                break
        if best:
            break
    return best


def random_pair(rng, max_len=12, vocab="abcd"):
    return ([rng.choice(vocab) for _ in range(rng.randint(0, max_len))],
            [rng.choice(vocab) for _ in range(rng.randint(0, max_len))])


# -- hand cases ---------------------------------------------------------------


def test_identical_texts_score_one():
    toks = ["the", "vote", "was", "close"]
    for variant in (rouge_n(toks, toks, 1), rouge_n(toks, toks, 2), rouge_l(toks, toks)):
        assert variant.precision == variant.recall == variant.f1 == 1.0


def test_rouge1_hand_case():
    score = rouge_n(["the", "cat", "ran"], ["the", "cat", "sat"], 1)
    assert score.precision == pytest.approx(2 / 3)
    assert score.recall == pytest.approx(2 / 3)
    assert score.f1 == pytest.approx(2 / 3)


def test_rouge1_clipping():
    score = rouge_n(["a", "a"], ["a"], 1)
    assert score.recall == 1.0
    assert score.precision == 0.5


def test_rouge_l_hand_case():
    score = rouge_l(["a", "b", "c", "d"], ["b", "d"])
    assert score.recall == 1.0
    assert score.precision == 0.5


def test_disjoint_vocabulary_zeros():
    score = rouge_l(["x", "y"], ["p", "q"])
    assert score.precision == score.recall == score.f1 == 0.0
    assert rouge_n(["x"], ["p"], 1).f1 == 0.0


def test_empty_inputs_zero():
    for score in (rouge_n([], ["a"], 1), rouge_n(["a"], [], 1), rouge_l([], [])):
        assert score.precision == score.recall == score.f1 == 0.0


def test_lcs_basics():
    assert lcs_length(["x"], ["x"]) == 1
    assert lcs_length([], ["a", "b"]) == 0
    assert lcs_length(["a", "b"], []) == 0


def test_rouge_n_rejects_bad_n():
    with pytest.raises(ValueError):
        rouge_n(["a"], ["a"], 0)


# -- oracle equivalence -------------------------------------------------------


def test_rouge_matches_oracles_on_random_pairs():
    rng = random.Random(20240811)
    for _ in range(60):
        cand, ref = random_pair(rng)
        for n in (1, 2):
            got = rouge_n(cand, ref, n)
            p, r, f = oracle_rouge_n(cand, ref, n)
            assert abs(got.precision - p) <= 1e-9
            assert abs(got.recall - r) <= 1e-9
            assert abs(got.f1 - f) <= 1e-9
        assert lcs_length(cand, ref) == oracle_lcs(cand, ref)


def test_lcs_matches_bruteforce_short_lists():
    rng = random.Random(7)
    for _ in range(200):
        a = [rng.choice("abc") for _ in range(rng.randint(0, 12))]
        b = [rng.choice("abc") for _ in range(rng.randint(0, 12))]
        assert lcs_length(a, b) == oracle_lcs(a, b)


# -- properties ---------------------------------------------------------------

token_lists = st.lists(st.sampled_from(["a", "b", "c", "d", "e"]), max_size=15)


@given(token_lists, token_lists)
@settings(max_examples=200)
def test_swap_symmetry(a, b):
    for fwd, rev in ((rouge_n(a, b, 1), rouge_n(b, a, 1)),
                     (rouge_n(a, b, 2), rouge_n(b, a, 2)),
                     (rouge_l(a, b), rouge_l(b, a))):
        assert fwd.precision == pytest.approx(rev.recall, abs=1e-12)
        assert fwd.recall == pytest.approx(rev.precision, abs=1e-12)
        assert fwd.f1 == pytest.approx(rev.f1, abs=1e-12)


@given(token_lists, token_lists)
@settings(max_examples=200)
def test_lcs_bounded_by_shorter(a, b):
    length = lcs_length(a, b)
    assert length <= min(len(a), len(b))
    if is_subsequence(a, b) or is_subsequence(b, a):
        assert length == min(len(a), len(b))
    if length == min(len(a), len(b)):
        short, long_ = (a, b) if len(a) <= len(b) else (b, a)
        assert is_subsequence(short, long_)


@given(token_lists, token_lists)
@settings(max_examples=200)
def test_r1_recall_one_on_multiset_containment(cand, ref):
    from collections import Counter
    if not ref:
        return
    contained = not (Counter(ref) - Counter(cand))
    if contained:
        assert rouge_n(cand, ref, 1).recall == pytest.approx(1.0)


@given(token_lists, token_lists)
@settings(max_examples=200)
def test_rl_recall_never_exceeds_r1_recall(cand, ref):
    assert rouge_l(cand, ref).recall <= rouge_n(cand, ref, 1).recall + 1e-12


# -- aggregation --------------------------------------------------------------


def test_aggregate_mean_of_two():
    scores = [RougeScore("R1", 1.0, 1.0, 1.0), RougeScore("R1", 0.0, 0.0, 0.0)]
    agg = aggregate(scores)
    assert agg.f1 == 0.5 and agg.precision == 0.5 and agg.recall == 0.5


def test_aggregate_single_is_identity():
    score = RougeScore("RL", 0.25, 0.75, 0.375)
    assert aggregate([score]) == score


def test_aggregate_fixture_against_mean():
    values = [(0.2, 0.4, 0.26666666666666666), (0.5, 0.5, 0.5), (1.0, 0.25, 0.4),
              (0.0, 0.0, 0.0), (0.9, 0.6, 0.72)]
    scores = [RougeScore("R2", p, r, f) for p, r, f in values]
    agg = aggregate(scores)
    assert agg.precision == pytest.approx(statistics.mean(v[0] for v in values))
    assert agg.recall == pytest.approx(statistics.mean(v[1] for v in values))
    assert agg.f1 == pytest.approx(statistics.mean(v[2] for v in values))


def test_aggregate_rejects_empty_and_mixed():
    with pytest.raises(ValueError):
        aggregate([])
    with pytest.raises(ValueError):
        aggregate([RougeScore("R1", 1, 1, 1), RougeScore("R2", 1, 1, 1)])


def test_score_all_has_three_variants():
    scores = score_all(["a", "b"], ["a", "c"])
    assert set(scores) == {"R1", "R2", "RL"}
    assert scores["R1"].variant == "R1"

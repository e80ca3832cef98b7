"""From-scratch ROUGE-1, ROUGE-2, and ROUGE-L scoring.

Conventions, printed into every report header:
  - tokens are lowercase alphanumeric runs (see corpus.tokenize);
    no stemming, no stopword removal;
  - n-gram overlap counts are clipped (multiset intersection);
  - ROUGE-L is summary-level: one LCS over the flattened token sequences,
    which keeps precision/recall swap-symmetric.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

R1 = "R1"
R2 = "R2"
RL = "RL"
VARIANTS = (R1, R2, RL)

LCS_VARIANT_ID = "summary-level-lcs"


@dataclass(frozen=True)
class RougeScore:
    variant: str
    precision: float
    recall: float
    f1: float


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _score(variant: str, overlap: float, cand_total: int, ref_total: int) -> RougeScore:
    precision = overlap / cand_total if cand_total else 0.0
    recall = overlap / ref_total if ref_total else 0.0
    return RougeScore(variant, precision, recall, _f1(precision, recall))


def ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: Sequence[str], reference: Sequence[str], n: int) -> RougeScore:
    """Clipped n-gram overlap precision/recall/F1.

    Empty candidate or reference (fewer than n tokens) scores zero.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cand = ngram_counts(candidate, n)
    ref = ngram_counts(reference, n)
    overlap = sum(min(count, ref[gram]) for gram, count in cand.items())
    variant = f"R{n}"
    return _score(variant, overlap, sum(cand.values()), sum(ref.values()))


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Longest common subsequence length; O(|a|*|b|) time, O(min) memory."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: Sequence[str], reference: Sequence[str]) -> RougeScore:
    """Summary-level ROUGE-L over the full flattened token sequences."""
    length = lcs_length(candidate, reference)
    return _score(RL, length, len(candidate), len(reference))


def score_all(candidate: Sequence[str], reference: Sequence[str]) -> dict[str, RougeScore]:
    """R1, R2, and RL for one candidate/reference pair."""
    return {
        R1: rouge_n(candidate, reference, 1),
        R2: rouge_n(candidate, reference, 2),
        RL: rouge_l(candidate, reference),
    }


def aggregate(scores: Iterable[RougeScore]) -> RougeScore:
    """Arithmetic mean of precision, recall, and F1 over same-variant scores."""
    scores = list(scores)
    if not scores:
        raise ValueError("cannot aggregate an empty score list")
    variants = {s.variant for s in scores}
    if len(variants) > 1:
        raise ValueError(f"mixed variants in aggregation: {sorted(variants)}")
    n = len(scores)
    return RougeScore(
        variant=scores[0].variant,
        precision=sum(s.precision for s in scores) / n,
        recall=sum(s.recall for s in scores) / n,
        f1=sum(s.f1 for s in scores) / n,
    )

"""Extractive reduction strategies: truncation, LexRank, claim-driven.

All three produce a Ranking (a scored permutation of sentence indices);
`extract` then applies the selection (top/bottom) and ordering
(article/ranking) policies to materialize the reduced text.

Ties always break toward the smaller sentence index, which favors
document order and keeps every ranking deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus, SegmentedDoc, mean_verdict_sentences
from .embedder import LexicalEmbedder, cosine, embed_lexical, fit_lexical

TRUNCATION = "truncation"
LEXRANK = "lexrank"
CLAIMDRIVEN = "claimdriven"
METHODS = (TRUNCATION, LEXRANK, CLAIMDRIVEN)

SELECTIONS = ("top", "bottom")
ORDERINGS = ("article", "ranking")

AUTO = "auto"


@dataclass(frozen=True)
class Ranking:
    """Sentence indices ordered best-first with aligned scores."""

    order: tuple[int, ...]
    scores: tuple[float, ...]
    method: str


@dataclass(frozen=True)
class ExtractConfig:
    method: str
    k: int | str = AUTO
    selection: str = "top"
    ordering: str = "article"
    damping: float = 0.85
    tolerance: float = 1e-6
    max_iters: int = 100
    embedder: str = "lexical"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.selection not in SELECTIONS:
            raise ValueError(f"unknown selection {self.selection!r}")
        if self.ordering not in ORDERINGS:
            raise ValueError(f"unknown ordering {self.ordering!r}")
        if self.k != AUTO and (not isinstance(self.k, int) or self.k < 1):
            raise ValueError(f"k must be 'auto' or a positive int, got {self.k!r}")
        if not (0.0 < self.damping < 1.0):
            raise ValueError(f"damping must be in (0,1), got {self.damping}")


@dataclass(frozen=True)
class Extract:
    """The emitted sentence indices and their single-space-joined text."""

    indices: tuple[int, ...]
    text: str
    config: ExtractConfig = field(compare=False)
    # per-index sentence texts, aligned with `indices`; text == " ".join(sentences)
    sentences: tuple[str, ...] = ()


def _rank_by_score(scores: list[float], method: str) -> Ranking:
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return Ranking(order=tuple(order),
                   scores=tuple(scores[i] for i in order),
                   method=method)


def rank_truncation(article: SegmentedDoc) -> Ranking:
    """Positional ranking: best = first. Top selection is the article head."""
    s = article.sentence_count
    if s == 0:
        raise ValueError("cannot rank an article with no sentences")
    return Ranking(order=tuple(range(s)),
                   scores=tuple(float(s - i) for i in range(s)),
                   method=TRUNCATION)


def lexrank_transition_matrix(article: SegmentedDoc, damping: float = 0.85) -> np.ndarray:
    """Damped row-stochastic transition matrix over the sentence graph.

    Edge weights are cosines of TF-IDF vectors fit on the article's own
    sentences. Rows with no similarity mass (sentences with no tokens)
    fall back to the uniform distribution.
    """
    s = article.sentence_count
    token_lists = [article.sentence_tokens(i) for i in range(s)]
    try:
        model = fit_lexical(token_lists)
        rows = np.stack([embed_lexical(model, toks) for toks in token_lists])
        weights = rows @ rows.T  # rows are L2-normalized, so this is cosine
    except ValueError:  # every sentence tokenizes to nothing
        weights = np.zeros((s, s))
    row_sums = weights.sum(axis=1, keepdims=True)
    stochastic = np.where(row_sums > 0, weights / np.where(row_sums > 0, row_sums, 1.0),
                          1.0 / s)
    return damping * stochastic + (1.0 - damping) / s


def lexrank_scores(article: SegmentedDoc, damping: float = 0.85,
                   tolerance: float = 1e-6, max_iters: int = 100) -> np.ndarray:
    """Stationary distribution of the damped sentence graph by power iteration."""
    s = article.sentence_count
    matrix = lexrank_transition_matrix(article, damping)
    p = np.full(s, 1.0 / s)
    for _ in range(max_iters):
        nxt = matrix.T @ p
        if np.max(np.abs(nxt - p)) < tolerance:
            return nxt
        p = nxt
    return p


def rank_lexrank(article: SegmentedDoc, damping: float = 0.85,
                 tolerance: float = 1e-6, max_iters: int = 100) -> Ranking:
    """Continuous LexRank: centrality scores on the sentence-similarity graph."""
    if article.sentence_count == 0:
        raise ValueError("cannot rank an article with no sentences")
    scores = lexrank_scores(article, damping, tolerance, max_iters)
    return _rank_by_score([float(x) for x in scores], LEXRANK)


def claim_backend_for(article: SegmentedDoc, claim: SegmentedDoc) -> LexicalEmbedder:
    """Lexical backend fit on the article's sentences plus the claim."""
    return LexicalEmbedder.fit(article.sentence_texts() + [claim.text])


def rank_claim(article: SegmentedDoc, claim: SegmentedDoc, backend) -> Ranking:
    """Rank article sentences by embedding cosine to the claim."""
    if article.sentence_count == 0:
        raise ValueError("cannot rank an article with no sentences")
    vectors = backend.embed([claim.text] + article.sentence_texts())
    claim_vec = vectors[0]
    scores = [cosine(claim_vec, v) for v in vectors[1:]]
    return _rank_by_score(scores, CLAIMDRIVEN)


def resolve_auto_k(corpus: Corpus) -> int:
    """k for k=auto: the rounded mean verdict sentence count of the corpus."""
    return max(1, math.floor(mean_verdict_sentences(corpus) + 0.5))


def rank(article: SegmentedDoc, claim: SegmentedDoc, config: ExtractConfig,
         backend=None) -> Ranking:
    if config.method == TRUNCATION:
        return rank_truncation(article)
    if config.method == LEXRANK:
        return rank_lexrank(article, config.damping, config.tolerance, config.max_iters)
    if backend is None:
        backend = claim_backend_for(article, claim)
    return rank_claim(article, claim, backend)


def extract(article: SegmentedDoc, claim: SegmentedDoc, config: ExtractConfig,
            *, backend=None, auto_k: int | None = None) -> Extract:
    """Apply the configured ranking, selection, and ordering policies.

    selection=top takes the k best-ranked sentences; selection=bottom the k
    lowest-ranked. For ordering=ranking both are emitted in descending score
    order; ordering=article re-sorts the chosen indices by article position.
    k is clamped to the sentence count.
    """
    if config.k == AUTO:
        if auto_k is None:
            raise ValueError("config.k='auto' requires auto_k (corpus-level value)")
        k = auto_k
    else:
        k = config.k
    ranking = rank(article, claim, config, backend)
    s = len(ranking.order)
    k = min(k, s)
    if config.selection == "top":
        chosen = list(ranking.order[:k])
    else:
        chosen = list(ranking.order[s - k:])
    if config.ordering == "article":
        indices = sorted(chosen)
    else:
        indices = chosen
    all_sentences = article.sentence_texts()
    chosen_texts = tuple(all_sentences[i] for i in indices)
    return Extract(indices=tuple(indices), text=" ".join(chosen_texts),
                   config=config, sentences=chosen_texts)

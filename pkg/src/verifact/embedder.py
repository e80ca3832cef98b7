"""Sentence-vector backends and cosine similarity.

Two interchangeable backends map strings to vectors:
  - LexicalEmbedder: built-in TF-IDF over a small fitted vocabulary, used
    when no semantic embedding server is available;
  - RemoteEmbedder: client for the /embed wire protocol (HTTP/1.1 JSON),
    with batching, bounded retries, and bounded in-flight requests.

Vectors are plain 1-D numpy float arrays.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import requests

from .corpus import tokenize
from .errors import BackendError, ProtocolError


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """dot(a,b)/(|a||b|); 0 if either vector is zero."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    norm = float(np.linalg.norm(a) * np.linalg.norm(b))
    if norm == 0.0:
        return 0.0
    return float(np.dot(a, b) / norm)


@dataclass(frozen=True)
class LexicalModel:
    """TF-IDF vocabulary with smoothed idf weights.

    idf(t) = ln((1 + docs)/(1 + df(t))) + 1, strictly positive for every
    vocabulary term, so no in-vocabulary token is silently zeroed.
    """

    vocabulary: dict[str, int]
    idf: np.ndarray
    doc_count: int

    @property
    def dims(self) -> int:
        return len(self.vocabulary)


def fit_lexical(sentences: Sequence[Sequence[str]]) -> LexicalModel:
    """Fit vocabulary and idf from tokenized sentences.

    df counts each term once per sentence; vocabulary indices follow
    lexicographic term order, so fitting is order-insensitive.
    """
    if not sentences:
        raise ValueError("cannot fit on an empty sentence list")
    df: dict[str, int] = {}
    for toks in sentences:
        for term in set(toks):
            df[term] = df.get(term, 0) + 1
    if not df:
        raise ValueError("cannot fit: all sentences are empty")
    terms = sorted(df)
    vocabulary = {term: i for i, term in enumerate(terms)}
    n = len(sentences)
    idf = np.array([np.log((1 + n) / (1 + df[t])) + 1.0 for t in terms], dtype=float)
    return LexicalModel(vocabulary=vocabulary, idf=idf, doc_count=n)


def embed_lexical(model: LexicalModel, tokens: Sequence[str]) -> np.ndarray:
    """tf*idf coefficients, L2-normalized; all-OOV input gives a zero vector."""
    vec = np.zeros(model.dims, dtype=float)
    for term in tokens:
        idx = model.vocabulary.get(term)
        if idx is not None:
            vec[idx] += 1.0
    vec *= model.idf
    norm = np.linalg.norm(vec)
    if norm > 0:
        vec /= norm
    return vec


class LexicalEmbedder:
    """String-level embedder over a fitted lexical model.

    For claim-driven ranking the model is fit on the article's sentences
    plus the claim, so both live in the same vector space.
    """

    name = "lexical-tfidf"

    def __init__(self, model: LexicalModel):
        self.model = model

    @classmethod
    def fit(cls, texts: Sequence[str]) -> "LexicalEmbedder":
        return cls(fit_lexical([tokenize(t) for t in texts]))

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        return [embed_lexical(self.model, tokenize(t)) for t in texts]


class RemoteEmbedder:
    """Client for the embedding wire protocol.

    POST {endpoint}/embed with {"texts": [...]} and expect
    {"dims": int, "vectors": [[...], ...]} with one vector per text.
    Requests are batched; at most `max_in_flight` batches run concurrently
    and responses are reassembled in request order. The server contract
    requires determinism for identical input.
    """

    name = "remote"

    def __init__(self, endpoint: str, *, batch_size: int = 32, retries: int = 2,
                 backoff: float = 0.5, max_in_flight: int = 4,
                 timeout: float = 30.0, session: requests.Session | None = None):
        if batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        self.endpoint = endpoint.rstrip("/")
        self.batch_size = batch_size
        self.retries = retries
        self.backoff = backoff
        self.max_in_flight = max(1, max_in_flight)
        self.timeout = timeout
        self.session = session or requests.Session()
        self._dims: int | None = None

    def _post_batch(self, batch_index: int, texts: list[str]) -> list[np.ndarray]:
        url = f"{self.endpoint}/embed"
        last_exc: Exception | None = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                resp = self.session.post(url, json={"texts": texts}, timeout=self.timeout)
                resp.raise_for_status()
                payload = resp.json()
                break
            except (requests.RequestException, ValueError) as exc:
                last_exc = exc
        else:
            raise BackendError(
                f"embed request failed after {self.retries} retries: {last_exc}",
                endpoint=self.endpoint, batch_index=batch_index) from last_exc
        vectors = payload.get("vectors")
        dims = payload.get("dims")
        if not isinstance(vectors, list) or not isinstance(dims, int):
            raise ProtocolError(f"malformed embed response: {payload!r}",
                                endpoint=self.endpoint, batch_index=batch_index)
        if len(vectors) != len(texts):
            raise ProtocolError(
                f"embed response has {len(vectors)} vectors for {len(texts)} texts",
                endpoint=self.endpoint, batch_index=batch_index)
        if self._dims is None:
            self._dims = dims
        elif dims != self._dims:
            raise ProtocolError(
                f"embed dims changed from {self._dims} to {dims}",
                endpoint=self.endpoint, batch_index=batch_index)
        out = []
        for vec in vectors:
            if len(vec) != dims:
                raise ProtocolError(
                    f"vector length {len(vec)} != advertised dims {dims}",
                    endpoint=self.endpoint, batch_index=batch_index)
            out.append(np.asarray(vec, dtype=float))
        return out

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        texts = list(texts)
        if not texts:
            return []
        batches = [texts[i:i + self.batch_size]
                   for i in range(0, len(texts), self.batch_size)]
        if len(batches) == 1:
            return self._post_batch(0, batches[0])
        with ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
            results = list(pool.map(self._post_batch, range(len(batches)), batches))
        return [vec for batch in results for vec in batch]

"""Embedding and generation backends behind the wire protocols.

All backends are deterministic for identical requests: real checkpoints run
in eval mode with per-text response caching, the hermetic ones are pure
functions of the request (plus a seeded RNG for sampling strategies).
"""

from __future__ import annotations

import hashlib
import random
import re
import threading

import numpy as np

STRATEGIES = ("beam", "topk", "nucleus", "typical")

_SENTENCE_END = re.compile(r"(?<=[.!?])\s+")


class BackendLoadError(RuntimeError):
    """A model checkpoint could not be loaded (surfaces as HTTP 503)."""


# -- embedding ----------------------------------------------------------------


class HashEmbedder:
    """Hermetic embedder: hashed bag of whitespace tokens, L2-normalized."""

    def __init__(self, dims: int = 384):
        if dims < 1:
            raise ValueError("dims must be positive")
        self.dims = dims
        self.identifier = f"hash:{dims}"
        self._cache: dict[str, list[float]] = {}
        self._lock = threading.Lock()

    def _vector(self, text: str) -> list[float]:
        vec = np.zeros(self.dims)
        for token in text.lower().split():
            seed = int.from_bytes(
                hashlib.sha256(token.encode("utf-8")).digest()[:4], "big")
            vec += np.random.RandomState(seed).standard_normal(self.dims)
        norm = np.linalg.norm(vec)
        if norm > 0:
            vec /= norm
        return [float(x) for x in vec]

    def embed(self, texts: list[str]) -> list[list[float]]:
        out = []
        with self._lock:
            for text in texts:
                if text not in self._cache:
                    self._cache[text] = self._vector(text)
                out.append(self._cache[text])
        return out


class SbertEmbedder:
    """sentence-transformers checkpoint in eval mode, with response caching."""

    def __init__(self, model_name: str, device: str = "cpu"):
        self.identifier = f"st:{model_name}"
        self._model_name = model_name
        self._device = device
        self._model = None
        self._dims: int | None = None
        self._cache: dict[str, list[float]] = {}
        self._lock = threading.Lock()

    def _load(self):
        if self._model is None:
            try:
                from sentence_transformers import SentenceTransformer
                self._model = SentenceTransformer(self._model_name,
                                                  device=self._device)
                self._dims = int(self._model.get_sentence_embedding_dimension())
            except Exception as exc:
                raise BackendLoadError(
                    f"cannot load embedding model {self._model_name!r}: {exc}") from exc
        return self._model

    @property
    def dims(self) -> int:
        self._load()
        return self._dims

    def embed(self, texts: list[str]) -> list[list[float]]:
        model = self._load()
        with self._lock:
            missing = [t for t in texts if t not in self._cache]
            if missing:
                vectors = model.encode(missing, convert_to_numpy=True,
                                       show_progress_bar=False)
                for text, vec in zip(missing, vectors):
                    self._cache[text] = [float(x) for x in vec]
            return [self._cache[t] for t in texts]


# -- generation ---------------------------------------------------------------


def split_context_sentences(context: str) -> list[str]:
    return [s for s in _SENTENCE_END.split(context) if s.strip()]


class LeadGenerator:
    """Hermetic generator: lead-n sentences for beam, seeded picks otherwise."""

    def __init__(self, lead_n: int = 2):
        if lead_n < 1:
            raise ValueError("lead_n must be positive")
        self.lead_n = lead_n
        self.identifier = f"lead:{lead_n}"

    def generate(self, claim: str | None, context: str, mode: str,
                 strategy: str, params: dict, seed: int,
                 max_context_words: int) -> tuple[str, bool]:
        words = context.split()
        truncated = len(words) > max_context_words
        if truncated:
            context = " ".join(words[:max_context_words])
        sentences = split_context_sentences(context)
        if not sentences:
            return "", truncated
        if strategy == "beam":
            chosen = sentences[:self.lead_n]
        else:
            key = (seed, strategy, tuple(sorted(params.items())), len(sentences))
            rng = random.Random(repr(key))
            count = min(self.lead_n, len(sentences))
            chosen = sorted(rng.sample(range(len(sentences)), count))
            chosen = [sentences[i] for i in chosen]
        return " ".join(chosen), truncated


class HfGenerator:
    """transformers seq2seq checkpoint; decoding params map onto generate()."""

    def __init__(self, model_name: str, device: str = "cpu"):
        self.identifier = f"hf:{model_name}"
        self._model_name = model_name
        self._device = device
        self._model = None
        self._tokenizer = None
        self._lock = threading.Lock()

    def _load(self):
        if self._model is None:
            try:
                import torch  # noqa: F401
                from transformers import AutoModelForSeq2SeqLM, AutoTokenizer
                self._tokenizer = AutoTokenizer.from_pretrained(self._model_name)
                self._model = AutoModelForSeq2SeqLM.from_pretrained(self._model_name)
                self._model.to(self._device)
                self._model.eval()
            except Exception as exc:
                raise BackendLoadError(
                    f"cannot load generation model {self._model_name!r}: {exc}") from exc

    def generate(self, claim: str | None, context: str, mode: str,
                 strategy: str, params: dict, seed: int,
                 max_context_words: int) -> tuple[str, bool]:
        self._load()
        import torch

        text = context if mode == "article" or not claim \
            else f"claim: {claim} context: {context}"
        limit = int(self._tokenizer.model_max_length)
        encoded = self._tokenizer(text, return_tensors="pt", truncation=True,
                                  max_length=limit)
        truncated = len(self._tokenizer(text)["input_ids"]) > limit
        kwargs = {"max_new_tokens": 160}
        if strategy == "beam":
            kwargs.update(num_beams=int(params.get("beams", 5)), do_sample=False)
        elif strategy == "topk":
            kwargs.update(do_sample=True, top_k=int(params.get("k", 40)))
        elif strategy == "nucleus":
            kwargs.update(do_sample=True, top_p=float(params.get("p", 0.9)))
        else:  # typical
            kwargs.update(do_sample=True, typical_p=float(params.get("p", 0.95)))
        with self._lock:
            torch.manual_seed(seed)
            with torch.no_grad():
                output = self._model.generate(**encoded.to(self._device), **kwargs)
        text_out = self._tokenizer.decode(output[0], skip_special_tokens=True)
        return text_out, truncated


# -- factories ----------------------------------------------------------------


def make_embedder(spec: str, device: str = "cpu"):
    kind, _, arg = spec.partition(":")
    if kind == "hash":
        return HashEmbedder(int(arg) if arg else 384)
    if kind == "st":
        if not arg:
            raise ValueError("st: embedder needs a model name")
        return SbertEmbedder(arg, device)
    raise ValueError(f"unknown embedding backend {spec!r}")


def make_generator(spec: str, device: str = "cpu"):
    kind, _, arg = spec.partition(":")
    if kind == "lead":
        return LeadGenerator(int(arg) if arg else 2)
    if kind == "hf":
        if not arg:
            raise ValueError("hf: generator needs a model name")
        return HfGenerator(arg, device)
    raise ValueError(f"unknown generation backend {spec!r}")

"""Corpus loading, validation, and deterministic text segmentation.

A corpus is a set of (claim, article, verdict) triples read from JSONL.
Segmentation is rule-based and fully deterministic: no model dependency,
so every downstream ranking is reproducible from the input bytes alone.

Subword counts are estimates (word tokens x calibration ratio) unless an
exact sidecar file supplies real counts per (id, field).
"""

from __future__ import annotations

import json
import math
import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

from .errors import DataError

Span = tuple[int, int]

# Default word-token to subword ratio. Sits between the observed article
# ratios of the two supported dataset styles (~1.38 and ~1.27).
DEFAULT_CALIBRATION = 1.35

# Trailing-period tokens that never end a sentence. Case-sensitive.
DEFAULT_ABBREVIATIONS = frozenset({
    "U.S.", "U.K.", "U.N.", "D.C.",
    "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "Jr.", "Sr.", "St.",
    "No.", "vs.", "Sen.", "Rep.", "Gov.",
})

_TERMINATORS = ".!?"
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

SEGMENTER_ID = "rule-v1(.!?/ws+upper, abbrev-list, initials)"
TOKENIZER_ID = "lowercase-alnum"


def token_spans(text: str) -> list[Span]:
    """Character spans of word tokens: maximal alphanumeric runs."""
    return [(m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens, split on any non-alphanumeric character.

    Digits are kept ("1,400" -> ["1", "400"]); empty tokens are dropped.
    This is the token definition used by all ROUGE scoring in the toolkit.
    """
    return [text[s:e].lower() for s, e in token_spans(text)]


def _period_blocked(text: str, i: int, abbreviations: frozenset[str]) -> bool:
    """Whether the lone period at index i must not end a sentence."""
    start = i
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    token = text[start:i + 1]
    while token and not token[0].isalnum():
        token = token[1:]
    if token in abbreviations:
        return True
    # Single initial such as "J." in "J. Smith".
    if len(token) == 2 and token[0].isalpha() and token[0].isupper():
        return True
    return False


def split_sentences(text: str,
                    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
                    ) -> list[Span]:
    """Rule-based sentence segmentation returning trimmed character spans.

    A run of terminators (. ! ?) ends a sentence when it is followed by
    whitespace and an uppercase letter, or by end of text. Lone periods are
    kept inside known abbreviations and single initials; decimal numbers
    never split because a digit (not whitespace) follows the period.
    A text with no terminator is a single sentence; empty text yields [].

    Spans are non-overlapping, ordered, and cover every non-whitespace
    character of the input.
    """
    n = len(text)
    cuts: list[int] = []
    i = 0
    while i < n:
        if text[i] not in _TERMINATORS:
            i += 1
            continue
        j = i
        while j + 1 < n and text[j + 1] in _TERMINATORS:
            j += 1
        m = j + 1
        while m < n and text[m].isspace():
            m += 1
        at_end = m >= n
        upper_follows = m > j + 1 and m < n and text[m].isupper()
        if at_end or upper_follows:
            lone_period = i == j and text[i] == "."
            if not (lone_period and _period_blocked(text, i, abbreviations)):
                cuts.append(j + 1)
        i = j + 1

    spans: list[Span] = []
    prev = 0
    for cut in cuts + [n]:
        s, e = prev, cut
        while s < e and text[s].isspace():
            s += 1
        while e > s and text[e - 1].isspace():
            e -= 1
        if e > s:
            spans.append((s, e))
        prev = cut
    return spans


def estimate_subwords(text: str, calibration: float = DEFAULT_CALIBRATION) -> int:
    """ceil(word-token count x calibration), a monotone proxy for BPE length."""
    if calibration <= 0:
        raise ValueError(f"calibration must be positive, got {calibration}")
    return math.ceil(len(token_spans(text)) * calibration)


@dataclass(frozen=True)
class SegmentedDoc:
    """A text with its sentence spans, token spans, and subword count."""

    text: str
    sentences: tuple[Span, ...]
    tokens: tuple[Span, ...]
    subword_estimate: int

    @property
    def sentence_count(self) -> int:
        return len(self.sentences)

    @property
    def token_count(self) -> int:
        return len(self.tokens)

    def sentence_texts(self) -> list[str]:
        return [self.text[s:e] for s, e in self.sentences]

    def token_list(self) -> list[str]:
        return [self.text[s:e].lower() for s, e in self.tokens]

    def sentence_tokens(self, index: int) -> list[str]:
        s, e = self.sentences[index]
        return tokenize(self.text[s:e])


def segment(text: str,
            calibration: float = DEFAULT_CALIBRATION,
            subword_override: int | None = None) -> SegmentedDoc:
    """Segment a text once; optionally pin the subword count to an exact value."""
    sents = tuple(split_sentences(text))
    toks = tuple(token_spans(text))
    if subword_override is not None:
        if subword_override < len(toks):
            raise DataError(
                f"subword override {subword_override} below word-token count {len(toks)}")
        est = subword_override
    else:
        # Clamp keeps the estimate >= token count even for calibrations < 1.
        est = max(estimate_subwords(text, calibration), len(toks))
    return SegmentedDoc(text=text, sentences=sents, tokens=toks, subword_estimate=est)


@dataclass(frozen=True)
class Triple:
    """One claim/article/verdict record; the unit of every experiment."""

    id: str
    dataset: str
    claim: str
    article: str
    verdict: str
    truth_label: str | None = None


FIELDS = ("claim", "article", "verdict")


@dataclass
class Corpus:
    """Immutable-after-load collection of triples with segmentation cache."""

    name: str
    triples: tuple[Triple, ...]
    _segmented: dict[str, tuple[SegmentedDoc, SegmentedDoc, SegmentedDoc]] = field(
        repr=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples)

    def segmented(self, triple_id: str) -> tuple[SegmentedDoc, SegmentedDoc, SegmentedDoc]:
        """(claim, article, verdict) SegmentedDocs for one triple."""
        return self._segmented[triple_id]

    def by_id(self, triple_id: str) -> Triple:
        for t in self.triples:
            if t.id == triple_id:
                return t
        raise DataError(f"unknown triple id {triple_id!r} in corpus {self.name!r}")


def build_corpus(name: str,
                 triples: Sequence[Triple],
                 calibration: float = DEFAULT_CALIBRATION,
                 subword_overrides: dict[tuple[str, str], int] | None = None) -> Corpus:
    """Validate triples and segment every text exactly once."""
    overrides = subword_overrides or {}
    seen: set[str] = set()
    cache: dict[str, tuple[SegmentedDoc, SegmentedDoc, SegmentedDoc]] = {}
    for t in triples:
        if t.id in seen:
            raise DataError(f"duplicate triple id {t.id!r}")
        seen.add(t.id)
        for fname in FIELDS:
            if not getattr(t, fname).strip():
                raise DataError(f"triple {t.id!r}: empty {fname}")
        docs = tuple(
            segment(getattr(t, fname), calibration, overrides.get((t.id, fname)))
            for fname in FIELDS
        )
        cache[t.id] = docs  # type: ignore[assignment]
    unknown = {key for key in overrides if key[0] not in seen}
    if unknown:
        raise DataError(f"subword sidecar names unknown triples: {sorted(unknown)[:5]}")
    return Corpus(name=name, triples=tuple(triples), _segmented=cache)


def load_sidecar(path: str | Path) -> dict[tuple[str, str], int]:
    """Read a subword-count sidecar: JSONL of {id, field, count}."""
    overrides: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}: malformed sidecar line {lineno}: {exc}") from exc
            try:
                tid, fname, count = rec["id"], rec["field"], int(rec["count"])
            except (KeyError, TypeError, ValueError) as exc:
                raise DataError(f"{path}: bad sidecar record on line {lineno}") from exc
            if fname not in FIELDS:
                raise DataError(f"{path}: line {lineno}: unknown field {fname!r}")
            overrides[(tid, fname)] = count
    return overrides


def load_corpus(path: str | Path,
                format: str = "jsonl",
                *,
                name: str | None = None,
                calibration: float = DEFAULT_CALIBRATION,
                sidecar: str | Path | None = None) -> Corpus:
    """Load and validate a JSONL corpus file.

    Each non-blank line is one object with mandatory fields claim/article/
    verdict and optional id, dataset, truth_label. Missing ids become
    "<dataset>-<line number>". Errors name the offending line.
    """
    if format != "jsonl":
        raise DataError(f"unsupported corpus format {format!r}")
    path = Path(path)
    corpus_name = name or path.stem
    triples: list[Triple] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}: malformed JSON on line {lineno}: {exc}") from exc
            if not isinstance(rec, dict):
                raise DataError(f"{path}: line {lineno} is not an object")
            missing = [f for f in FIELDS if f not in rec]
            if missing:
                raise DataError(f"{path}: line {lineno} missing fields {missing}")
            dataset = str(rec.get("dataset") or corpus_name)
            values = {}
            for fname in FIELDS:
                value = rec[fname]
                if not isinstance(value, str) or not value.strip():
                    raise DataError(f"{path}: line {lineno}: empty {fname}")
                values[fname] = value.strip()
            tid = str(rec.get("id") or f"{dataset}-{lineno}")
            label = rec.get("truth_label")
            triples.append(Triple(id=tid, dataset=dataset,
                                  claim=values["claim"], article=values["article"],
                                  verdict=values["verdict"],
                                  truth_label=None if label is None else str(label)))
    overrides = load_sidecar(sidecar) if sidecar else None
    return build_corpus(corpus_name, triples, calibration, overrides)


def split_dataset(corpus: Corpus,
                  ratios: tuple[float, float, float],
                  seed: int) -> tuple[Corpus, Corpus, Corpus]:
    """Deterministic shuffle-split into (train, val, test) corpora.

    Val/test sizes are floored; the remainder goes to train. The same seed
    always produces the same partition.
    """
    train_r, val_r, test_r = ratios
    if min(ratios) <= 0:
        raise ValueError(f"ratios must be positive, got {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    n = len(corpus)
    if n < 3:
        raise DataError(f"corpus {corpus.name!r} too small to split: {n} triples")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    n_val = math.floor(n * val_r)
    n_test = math.floor(n * test_r)
    n_train = n - n_val - n_test
    shuffled = [corpus.triples[i] for i in order]
    parts = (shuffled[:n_train],
             shuffled[n_train:n_train + n_val],
             shuffled[n_train + n_val:])
    out = []
    for suffix, part in zip(("train", "val", "test"), parts):
        cache = {t.id: corpus._segmented[t.id] for t in part}
        out.append(Corpus(name=f"{corpus.name}-{suffix}",
                          triples=tuple(part), _segmented=cache))
    return out[0], out[1], out[2]


def mean_verdict_sentences(corpus: Corpus) -> float:
    """Arithmetic mean of verdict sentence counts across the corpus."""
    if not corpus.triples:
        raise DataError(f"corpus {corpus.name!r} is empty")
    total = sum(corpus.segmented(t.id)[2].sentence_count for t in corpus)
    return total / len(corpus)

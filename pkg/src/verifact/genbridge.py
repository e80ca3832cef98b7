"""Bridge to an external abstractive generator.

Assembles token-budgeted inputs (`article` or `claim+article` mode), talks
to the /generate wire protocol, and scores returned verdicts against gold.
Decoding parameters travel opaquely: the bridge validates shape only and
forwards them as-is.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import requests

from . import rouge
from .corpus import Corpus, DEFAULT_CALIBRATION, SegmentedDoc, estimate_subwords, tokenize
from .errors import BackendError, DataError, ProtocolError
from .extractive import Extract

MODES = ("article", "claim_article")
STRATEGIES = ("beam", "topk", "nucleus", "typical")

CLAIM_MARKER = "claim:"
CONTEXT_MARKER = "context:"


@dataclass(frozen=True)
class DecodingSpec:
    strategy: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown decoding strategy {self.strategy!r}")
        p = self.params
        if self.strategy == "beam" and p.get("beams", 1) < 1:
            raise ValueError("beam width must be >= 1")
        if self.strategy == "topk" and p.get("k", 1) < 1:
            raise ValueError("top-k pool must be >= 1")
        if self.strategy in ("nucleus", "typical"):
            prob = p.get("p", 1.0)
            if not (0.0 < prob <= 1.0):
                raise ValueError(f"sampling probability must be in (0,1], got {prob}")

    def to_wire(self) -> dict:
        return {"strategy": self.strategy, "params": dict(self.params)}


DEFAULT_DECODING = DecodingSpec("beam", {"beams": 5})


@dataclass(frozen=True)
class GenInput:
    """One budget-compliant generator input for one triple."""

    triple_id: str
    mode: str
    text: str
    budget: int
    claim_text: str | None
    context_text: str
    dropped_sentences: int


@dataclass(frozen=True)
class GenResult:
    triple_id: str
    text: str
    decoding: DecodingSpec
    endpoint: str

    @property
    def flagged(self) -> bool:
        """Empty generations are flagged: excluded from means, counted in reports."""
        return not self.text.strip()


def _assembled(mode: str, claim_text: str, kept: list[str]) -> str:
    context = " ".join(kept)
    if mode == "claim_article":
        return f"{CLAIM_MARKER} {claim_text} {CONTEXT_MARKER} {context}"
    return context


def assemble_input(claim: SegmentedDoc, extract: Extract, mode: str, budget: int,
                   *, triple_id: str = "",
                   calibration: float = DEFAULT_CALIBRATION) -> GenInput:
    """Build a generator input that fits the subword budget.

    When over budget, whole sentences are dropped from the END of the
    extract, never reordering what remains and never touching the claim.
    """
    if mode not in MODES:
        raise ValueError(f"unknown input mode {mode!r}")
    if not extract.indices:
        raise ValueError("cannot assemble an input from an empty extract")
    kept = list(extract.sentences)
    text = _assembled(mode, claim.text, kept)
    dropped = 0
    while estimate_subwords(text, calibration) > budget and len(kept) > 1:
        kept.pop()
        dropped += 1
        text = _assembled(mode, claim.text, kept)
    if estimate_subwords(text, calibration) > budget:
        raise DataError(
            f"budget {budget} too small for "
            + ("the claim plus one extract sentence" if mode == "claim_article"
               else "a single extract sentence"))
    return GenInput(triple_id=triple_id, mode=mode, text=text, budget=budget,
                    claim_text=claim.text if mode == "claim_article" else None,
                    context_text=" ".join(kept), dropped_sentences=dropped)


class GenerationClient:
    """Client for the generation wire protocol, mirroring the embed client."""

    def __init__(self, endpoint: str, *, retries: int = 2, backoff: float = 0.5,
                 timeout: float = 120.0, max_in_flight: int = 2,
                 session: requests.Session | None = None):
        self.endpoint = endpoint.rstrip("/")
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout
        self.max_in_flight = max(1, max_in_flight)
        self.session = session or requests.Session()

    def generate(self, gen_input: GenInput, decoding: DecodingSpec, seed: int) -> GenResult:
        url = f"{self.endpoint}/generate"
        body = {
            "claim": gen_input.claim_text,
            "context": gen_input.context_text,
            "mode": gen_input.mode,
            "decoding": decoding.to_wire(),
            "seed": seed,
        }
        last_exc: Exception | None = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                resp = self.session.post(url, json=body, timeout=self.timeout)
                resp.raise_for_status()
                payload = resp.json()
                break
            except (requests.RequestException, ValueError) as exc:
                last_exc = exc
        else:
            raise BackendError(
                f"generation failed for triple {gen_input.triple_id!r} "
                f"after {self.retries} retries: {last_exc}",
                endpoint=self.endpoint) from last_exc
        text = payload.get("text")
        if not isinstance(text, str):
            raise ProtocolError(
                f"generate response for triple {gen_input.triple_id!r} "
                f"carries no text: {payload!r}", endpoint=self.endpoint)
        return GenResult(triple_id=gen_input.triple_id, text=text,
                         decoding=decoding, endpoint=self.endpoint)

    def generate_many(self, inputs: list[GenInput], decoding: DecodingSpec,
                      seed: int) -> list[GenResult]:
        """Generate for many inputs; results come back in input order."""
        if not inputs:
            return []
        if len(inputs) == 1:
            return [self.generate(inputs[0], decoding, seed)]
        with ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
            return list(pool.map(lambda gi: self.generate(gi, decoding, seed), inputs))


def generate(endpoint: str, gen_input: GenInput, decoding: DecodingSpec,
             seed: int, **client_kwargs) -> GenResult:
    return GenerationClient(endpoint, **client_kwargs).generate(gen_input, decoding, seed)


@dataclass(frozen=True)
class ScoreReport:
    means: dict[str, rouge.RougeScore]
    scored: int
    excluded: int


def score_texts(pairs: list[tuple[str, str]], corpus: Corpus) -> ScoreReport:
    """ROUGE of candidate texts against gold verdicts, by triple id."""
    if not pairs:
        raise DataError("nothing to score")
    gold = {t.id: t.verdict for t in corpus}
    per_variant: dict[str, list[rouge.RougeScore]] = {v: [] for v in rouge.VARIANTS}
    for triple_id, text in pairs:
        if triple_id not in gold:
            raise DataError(f"unknown triple id {triple_id!r} in corpus {corpus.name!r}")
        scores = rouge.score_all(tokenize(text), tokenize(gold[triple_id]))
        for name, score in scores.items():
            per_variant[name].append(score)
    means = {name: rouge.aggregate(scores) for name, scores in per_variant.items()}
    return ScoreReport(means=means, scored=len(pairs), excluded=0)


def score_generations(results: list[GenResult], corpus: Corpus) -> ScoreReport:
    """Aggregate ROUGE of generated verdicts vs gold; flagged results excluded."""
    usable = [(r.triple_id, r.text) for r in results if not r.flagged]
    excluded = len(results) - len(usable)
    if not usable:
        raise DataError(f"no scorable generations ({excluded} flagged)")
    report = score_texts(usable, corpus)
    return ScoreReport(means=report.means, scored=report.scored, excluded=excluded)

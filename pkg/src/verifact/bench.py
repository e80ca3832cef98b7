"""Benchmark grid: declaration, expansion, execution, and comparison tables.

Grid files are plain text, one axis per line:

    # comment
    dataset  = ff, lpp
    stage    = extractive_only            # or extractive_plus_generation
    summary  = paper                      # or explicit method:selection[:ordering] tokens
    k        = auto                       # or positive ints
    seed     = 2022
    model    = t5:512, dbart:1024         # generation stage only; label:budget
    finetune = unsupervised, article, claim_article
    decoding = beam:5, topk:40, nucleus:0.9, typical:0.95

`summary = paper` expands to the canonical 10 configurations: truncation
head/tail plus lexrank and claimdriven under top/bottom x article/ranking.
Cells are the Cartesian product of all axes, in declaration-value order
nested as dataset > summary > k > model > finetune > decoding > seed.

The model and finetune axes are opaque labels: the harness books them and
forwards requests to the configured generation endpoint, which owns the
actual checkpoints. finetune=claim_article selects the claim+article input
mode; every other label uses the article mode.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

from . import rouge
from .analysis import config_header
from .corpus import Corpus, load_corpus, tokenize
from .embedder import RemoteEmbedder
from .errors import BackendError, DataError
from .extractive import (AUTO, ExtractConfig, extract, resolve_auto_k)
from .genbridge import DecodingSpec, GenInput, GenerationClient, assemble_input

STAGES = ("extractive_only", "extractive_plus_generation")

PAPER_SUMMARY_TOKENS = (
    "truncation:head", "truncation:tail",
    "lexrank:top:article", "lexrank:top:ranking",
    "lexrank:bottom:article", "lexrank:bottom:ranking",
    "claimdriven:top:article", "claimdriven:top:ranking",
    "claimdriven:bottom:article", "claimdriven:bottom:ranking",
)

_DECODING_DEFAULTS = {"beam": ("beams", 5), "topk": ("k", 40),
                      "nucleus": ("p", 0.9), "typical": ("p", 0.95)}

UNRELIABLE_EXCLUSION_RATE = 0.10


@dataclass(frozen=True)
class RunConfig:
    """One cell of the benchmark grid."""

    dataset: str
    extract: ExtractConfig
    stage: str
    seed: int
    model: str | None = None
    budget: int | None = None
    finetune: str | None = None
    mode: str | None = None
    decoding: DecodingSpec | None = None

    def __post_init__(self):
        if self.stage not in STAGES:
            raise ValueError(f"unknown stage {self.stage!r}")
        gen_fields = (self.model, self.budget, self.finetune, self.mode, self.decoding)
        if self.stage == "extractive_plus_generation":
            if any(f is None for f in gen_fields):
                raise ValueError("generation stage requires model/budget/finetune/mode/decoding")
        elif any(f is not None for f in gen_fields):
            raise ValueError("extractive_only stage must not carry generation fields")


@dataclass
class RunResult:
    config: RunConfig
    fingerprint: str
    means: dict[str, rouge.RougeScore]
    triple_count: int
    excluded: int
    wall_time_s: float
    unreliable: bool


@dataclass
class Backends:
    embedder: RemoteEmbedder | None = None
    generator: GenerationClient | None = None


def _parse_summary_token(token: str) -> tuple[str, str, str]:
    parts = token.split(":")
    method = parts[0]
    if method == "truncation":
        if len(parts) != 2 or parts[1] not in ("head", "tail", "top", "bottom"):
            raise DataError(f"grid: bad summary value {token!r}")
        selection = "top" if parts[1] in ("head", "top") else "bottom"
        return method, selection, "article"
    if method in ("lexrank", "claimdriven"):
        if len(parts) != 3 or parts[1] not in ("top", "bottom") \
                or parts[2] not in ("article", "ranking"):
            raise DataError(f"grid: bad summary value {token!r}")
        return method, parts[1], parts[2]
    raise DataError(f"grid: unknown summary method in {token!r}")


def _parse_decoding_token(token: str) -> DecodingSpec:
    name, _, arg = token.partition(":")
    if name not in _DECODING_DEFAULTS:
        raise DataError(f"grid: unknown decoding {token!r}")
    key, default = _DECODING_DEFAULTS[name]
    if not arg:
        value = default
    else:
        try:
            value = int(arg) if name in ("beam", "topk") else float(arg)
        except ValueError as exc:
            raise DataError(f"grid: bad decoding parameter in {token!r}") from exc
    try:
        return DecodingSpec(name, {key: value})
    except ValueError as exc:
        raise DataError(f"grid: {exc}") from exc


def _parse_model_token(token: str) -> tuple[str, int]:
    label, _, budget = token.partition(":")
    if not label:
        raise DataError(f"grid: bad model value {token!r}")
    if not budget:
        return label, 512
    try:
        return label, int(budget)
    except ValueError as exc:
        raise DataError(f"grid: bad model budget in {token!r}") from exc


def parse_grid(text: str) -> dict[str, list[str]]:
    """Parse a grid file body into axis -> value list."""
    known = ("dataset", "stage", "summary", "k", "seed", "model", "finetune", "decoding")
    axes: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"grid line {lineno}: expected 'key = values', got {raw!r}")
        key, _, rest = line.partition("=")
        key = key.strip()
        if key not in known:
            raise DataError(f"grid line {lineno}: unknown axis {key!r}")
        if key in axes:
            raise DataError(f"grid line {lineno}: duplicate axis {key!r}")
        values = [v.strip() for v in rest.split(",") if v.strip()]
        if not values:
            raise DataError(f"grid line {lineno}: axis {key!r} has no values")
        axes[key] = values
    for required in ("dataset", "stage", "summary"):
        if required not in axes:
            raise DataError(f"grid: missing required axis {required!r}")
    if len(axes["stage"]) != 1:
        raise DataError("grid: stage must be a single value")
    if axes["stage"][0] not in STAGES:
        raise DataError(f"grid: unknown stage {axes['stage'][0]!r}")
    return axes


def expand_grid(spec_path: str | Path, *, embedder_choice: str = "lexical") -> list[RunConfig]:
    """Expand a grid file into RunConfigs, deterministically ordered."""
    axes = parse_grid(Path(spec_path).read_text(encoding="utf-8"))
    stage = axes["stage"][0]

    summaries: list[tuple[str, str, str]] = []
    for token in axes["summary"]:
        if token == "paper":
            summaries.extend(_parse_summary_token(t) for t in PAPER_SUMMARY_TOKENS)
        else:
            summaries.append(_parse_summary_token(token))

    ks: list[int | str] = []
    for token in axes.get("k", [AUTO]):
        if token == AUTO:
            ks.append(AUTO)
        else:
            try:
                value = int(token)
            except ValueError as exc:
                raise DataError(f"grid: bad k value {token!r}") from exc
            if value < 1:
                raise DataError(f"grid: k must be positive, got {token!r}")
            ks.append(value)

    seeds = []
    for token in axes.get("seed", ["0"]):
        try:
            seeds.append(int(token))
        except ValueError as exc:
            raise DataError(f"grid: bad seed {token!r}") from exc

    generation = stage == "extractive_plus_generation"
    gen_axes = [a for a in ("model", "finetune", "decoding") if a in axes]
    if generation and len(gen_axes) != 3:
        raise DataError("grid: generation stage requires model, finetune, and decoding axes")
    if not generation and gen_axes:
        raise DataError(f"grid: extractive_only stage must not declare {gen_axes}")

    if generation:
        models = [_parse_model_token(t) for t in axes["model"]]
        finetunes = []
        for token in axes["finetune"]:
            if token not in ("unsupervised", "article", "claim_article"):
                raise DataError(f"grid: unknown finetune value {token!r}")
            finetunes.append(token)
        decodings = [_parse_decoding_token(t) for t in axes["decoding"]]
    else:
        models, finetunes, decodings = [(None, None)], [None], [None]

    configs: list[RunConfig] = []
    for dataset, summary, k, (model, budget), finetune, decoding, seed in product(
            axes["dataset"], summaries, ks, models, finetunes, decodings, seeds):
        method, selection, ordering = summary
        ec = ExtractConfig(method=method, k=k, selection=selection, ordering=ordering,
                           embedder=embedder_choice)
        mode = None
        if generation:
            mode = "claim_article" if finetune == "claim_article" else "article"
        configs.append(RunConfig(dataset=dataset, extract=ec, stage=stage, seed=seed,
                                 model=model, budget=budget, finetune=finetune,
                                 mode=mode, decoding=decoding))
    return configs


def fingerprint(config: RunConfig) -> str:
    """Stable 12-hex digest of the full effective configuration."""
    payload = {
        "dataset": config.dataset,
        "method": config.extract.method,
        "k": config.extract.k,
        "selection": config.extract.selection,
        "ordering": config.extract.ordering,
        "damping": config.extract.damping,
        "embedder": config.extract.embedder,
        "stage": config.stage,
        "seed": config.seed,
        "model": config.model,
        "budget": config.budget,
        "finetune": config.finetune,
        "mode": config.mode,
        "decoding": config.decoding.to_wire() if config.decoding else None,
    }
    payload.update({h.split(":", 1)[0]: h for h in config_header()[:4]})
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def run(corpus: Corpus, config: RunConfig, backends: Backends | None = None) -> RunResult:
    """Execute one grid cell over a corpus and aggregate its ROUGE scores."""
    backends = backends or Backends()
    mismatched = [t.id for t in corpus if t.dataset != config.dataset]
    if mismatched:
        raise DataError(
            f"corpus {corpus.name!r} carries triples not tagged {config.dataset!r}: "
            f"{mismatched[:3]}")
    if not len(corpus):
        raise DataError(f"corpus {corpus.name!r} is empty")
    started = time.perf_counter()
    auto_k = resolve_auto_k(corpus) if config.extract.k == AUTO else None

    embed_backend = None
    if config.extract.method == "claimdriven" and config.extract.embedder == "remote":
        if backends.embedder is None:
            raise BackendError("config requests the remote embedder but none is configured")
        embed_backend = backends.embedder

    extracts = []
    for t in corpus:
        claim_doc, article_doc, _ = corpus.segmented(t.id)
        extracts.append(extract(article_doc, claim_doc, config.extract,
                                backend=embed_backend, auto_k=auto_k))

    excluded = 0
    candidates: list[tuple[str, str]] = []
    if config.stage == "extractive_only":
        candidates = [(t.id, ex.text) for t, ex in zip(corpus, extracts)]
    else:
        if backends.generator is None:
            raise BackendError("generation stage requires a generation endpoint")
        inputs: list[GenInput] = []
        for t, ex in zip(corpus, extracts):
            claim_doc, _, _ = corpus.segmented(t.id)
            inputs.append(assemble_input(claim_doc, ex, config.mode, config.budget,
                                         triple_id=t.id))
        results = backends.generator.generate_many(inputs, config.decoding, config.seed)
        for res in results:
            if res.flagged:
                excluded += 1
            else:
                candidates.append((res.triple_id, res.text))
    if not candidates:
        raise DataError("run produced no scorable candidates")

    gold = {t.id: t.verdict for t in corpus}
    per_variant: dict[str, list[rouge.RougeScore]] = {v: [] for v in rouge.VARIANTS}
    for triple_id, text in candidates:
        scores = rouge.score_all(tokenize(text), tokenize(gold[triple_id]))
        for name, score in scores.items():
            per_variant[name].append(score)
    means = {name: rouge.aggregate(scores) for name, scores in per_variant.items()}
    total = len(corpus)
    return RunResult(config=config, fingerprint=fingerprint(config), means=means,
                     triple_count=len(candidates), excluded=excluded,
                     wall_time_s=time.perf_counter() - started,
                     unreliable=excluded > UNRELIABLE_EXCLUSION_RATE * total)


CSV_COLUMNS = ("config_fingerprint", "dataset", "method", "selection", "ordering",
               "stage", "R1", "R2", "RL", "R1_recall", "R2_recall", "RL_recall",
               "k", "model", "finetune", "decoding", "mode", "budget", "seed",
               "triples", "excluded", "unreliable")


def _csv_row(res: RunResult) -> list[str]:
    cfg = res.config
    dec = ""
    if cfg.decoding is not None:
        dec = cfg.decoding.strategy + ":" + ",".join(
            f"{k}={v}" for k, v in sorted(cfg.decoding.params.items()))
    return [
        res.fingerprint, cfg.dataset, cfg.extract.method, cfg.extract.selection,
        cfg.extract.ordering, cfg.stage,
        f"{res.means['R1'].f1:.6f}", f"{res.means['R2'].f1:.6f}", f"{res.means['RL'].f1:.6f}",
        f"{res.means['R1'].recall:.6f}", f"{res.means['R2'].recall:.6f}",
        f"{res.means['RL'].recall:.6f}",
        str(cfg.extract.k), cfg.model or "", cfg.finetune or "", dec,
        cfg.mode or "", "" if cfg.budget is None else str(cfg.budget), str(cfg.seed),
        str(res.triple_count), str(res.excluded), str(res.unreliable).lower(),
    ]


def _sort_key(res: RunResult):
    cfg = res.config
    return (cfg.dataset, cfg.extract.method, cfg.extract.selection, cfg.extract.ordering,
            str(cfg.extract.k), cfg.model or "", cfg.finetune or "",
            cfg.decoding.strategy if cfg.decoding else "", cfg.seed)


def compare(results: list[RunResult], out: str | Path) -> tuple[Path, Path]:
    """Write results.csv and tables.md pivot views; byte-stable across reruns."""
    if not results:
        raise DataError("no results to compare")
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    ordered = sorted(results, key=_sort_key)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for res in ordered:
        writer.writerow(_csv_row(res))
    csv_path = out / "results.csv"
    csv_path.write_text(buf.getvalue(), encoding="utf-8")

    lines = ["# Benchmark comparison", ""]
    lines += ["```"] + config_header() + ["```", ""]
    for dataset in sorted({r.config.dataset for r in ordered}):
        ds_rows = [r for r in ordered if r.config.dataset == dataset]
        lines.append(f"## {dataset}")
        lines.append("")
        for ordering, title in (("article", "Article order"), ("ranking", "Ranking order")):
            view = [r for r in ds_rows if r.config.extract.ordering == ordering]
            if not view:
                continue
            lines.append(f"### {title}")
            lines.append("")
            lines.append("| method | selection | model | finetune | decoding | R1 | R2 | RL |")
            lines.append("|---|---|---|---|---|---|---|---|")
            for res in view:
                cfg = res.config
                dec = cfg.decoding.strategy if cfg.decoding else "-"
                flag = " (unreliable)" if res.unreliable else ""
                lines.append(
                    f"| {cfg.extract.method} | {cfg.extract.selection} "
                    f"| {cfg.model or '-'} | {cfg.finetune or '-'} | {dec} "
                    f"| {res.means['R1'].f1:.3f} | {res.means['R2'].f1:.3f} "
                    f"| {res.means['RL'].f1:.3f}{flag} |")
            lines.append("")
    md_path = out / "tables.md"
    md_path.write_text("\n".join(lines), encoding="utf-8")
    return csv_path, md_path


def execute(grid_path: str | Path, corpus_dir: str | Path, out: str | Path,
            *, embed_endpoint: str | None = None, gen_endpoint: str | None = None,
            jobs: int = 1, calibration: float | None = None) -> list[RunResult]:
    """Expand a grid, run every cell against <corpus_dir>/<dataset>.jsonl, compare."""
    corpus_dir = Path(corpus_dir)
    embedder_choice = "remote" if embed_endpoint else "lexical"
    configs = expand_grid(grid_path, embedder_choice=embedder_choice)

    backends = Backends(
        embedder=RemoteEmbedder(embed_endpoint) if embed_endpoint else None,
        generator=GenerationClient(gen_endpoint) if gen_endpoint else None,
    )
    corpora: dict[str, Corpus] = {}
    for cfg in configs:
        if cfg.dataset not in corpora:
            path = corpus_dir / f"{cfg.dataset}.jsonl"
            if not path.exists():
                raise DataError(f"no corpus file for dataset {cfg.dataset!r}: {path}")
            kwargs = {"name": cfg.dataset}
            if calibration is not None:
                kwargs["calibration"] = calibration
            corpora[cfg.dataset] = load_corpus(path, **kwargs)

    def one(cfg: RunConfig) -> RunResult:
        return run(corpora[cfg.dataset], cfg, backends)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, configs))
    else:
        results = [one(cfg) for cfg in configs]
    compare(results, out)
    return results

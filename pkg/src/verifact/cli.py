"""Command-line entry point.

Exit codes: 0 success, 1 usage, 2 data, 3 backend, 4 io. Every subcommand
prints its effective configuration and a fingerprint before doing work, so
any output can be traced back to the exact invocation that produced it.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np
import requests

from . import analysis, bench, genbridge
from .analysis import config_header
from .corpus import load_corpus
from .embedder import RemoteEmbedder
from .errors import BackendError, DataError
from .extractive import AUTO, ExtractConfig, extract, resolve_auto_k

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BACKEND = 3
EXIT_IO = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's 2
        raise UsageError(f"{self.prog}: {message}")


def _print_config(subcommand: str, options: dict) -> None:
    effective = {"subcommand": subcommand, **{k: str(v) for k, v in sorted(options.items())}}
    for line in config_header():
        effective.setdefault(*line.split(": ", 1))
    blob = json.dumps(effective, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]
    print(f"config: {blob}")
    print(f"fingerprint: {digest}")


def _parse_k(value: str) -> int | str:
    if value == AUTO:
        return AUTO
    try:
        k = int(value)
    except ValueError:
        raise UsageError(f"--k must be a positive integer or 'auto', got {value!r}")
    if k < 1:
        raise UsageError(f"--k must be >= 1, got {k}")
    return k


def _cmd_ingest(args) -> int:
    corpus = load_corpus(args.infile, name=args.name)
    datasets = {}
    for t in corpus:
        datasets[t.dataset] = datasets.get(t.dataset, 0) + 1
    print(f"ok: {len(corpus)} triples in {corpus.name}")
    for tag in sorted(datasets):
        print(f"  {tag}: {datasets[tag]}")
    return EXIT_OK


def _cmd_analyze(args) -> int:
    corpus = load_corpus(args.corpus)
    csv_path, md_path = analysis.report(corpus, args.out)
    print(f"wrote {csv_path}")
    print(f"wrote {md_path}")
    return EXIT_OK


def _cmd_extract(args) -> int:
    corpus = load_corpus(args.corpus)
    k = _parse_k(args.k)
    embedder_choice = "remote" if args.embed_endpoint else "lexical"
    config = ExtractConfig(method=args.method, k=k, selection=args.selection,
                           ordering=args.ordering, embedder=embedder_choice)
    run_config = bench.RunConfig(dataset=corpus.name, extract=config,
                                 stage="extractive_only", seed=args.seed)
    fp = bench.fingerprint(run_config)
    backend = RemoteEmbedder(args.embed_endpoint) if args.embed_endpoint else None
    auto_k = resolve_auto_k(corpus) if k == AUTO else None
    out = Path(args.out)
    lines = []
    for t in corpus:
        claim_doc, article_doc, _ = corpus.segmented(t.id)
        ex = extract(article_doc, claim_doc, config, backend=backend, auto_k=auto_k)
        lines.append(json.dumps({"id": t.id, "indices": list(ex.indices),
                                 "text": ex.text, "config_fingerprint": fp},
                                ensure_ascii=False))
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(lines)} extracts, fingerprint {fp})")
    return EXIT_OK


def _cmd_score(args) -> int:
    corpus = load_corpus(args.corpus)
    pairs = []
    with open(args.candidates, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                pairs.append((str(rec["id"]), str(rec["text"])))
            except (json.JSONDecodeError, KeyError) as exc:
                raise DataError(f"{args.candidates}: bad candidate line {lineno}: {exc}")
    report = genbridge.score_texts(pairs, corpus)
    print("variant,precision,recall,f1")
    for name in ("R1", "R2", "RL"):
        mean = report.means[name]
        print(f"{name},{mean.precision:.6f},{mean.recall:.6f},{mean.f1:.6f}")
    print(f"scored: {report.scored}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    embed_endpoint = args.embed_endpoint or os.environ.get("VF_EMBED_ENDPOINT")
    results = bench.execute(args.grid, args.corpus_dir, args.out,
                            embed_endpoint=embed_endpoint,
                            gen_endpoint=args.gen_endpoint, jobs=args.jobs)
    print(f"ran {len(results)} grid cells; outputs in {args.out}")
    return EXIT_OK


def _probe_embed(endpoint: str) -> int:
    client = RemoteEmbedder(endpoint)
    texts = ["probe alpha", "probe beta", "probe alpha"]
    first = client.embed(texts)
    second = client.embed(texts)
    if len(first) != 3:
        raise BackendError(f"expected 3 vectors, got {len(first)}", endpoint=endpoint)
    dims = len(first[0])
    if any(len(v) != dims for v in first):
        raise BackendError("inconsistent vector lengths", endpoint=endpoint)
    if not (np.array_equal(first[0], first[2]) and
            all(np.array_equal(a, b) for a, b in zip(first, second))):
        raise BackendError("embedding endpoint is not deterministic", endpoint=endpoint)
    try:
        resp = requests.post(f"{endpoint.rstrip('/')}/embed", json={"texts": []},
                             timeout=30)
        payload = resp.json()
    except (requests.RequestException, ValueError) as exc:
        raise BackendError(f"empty-list probe failed: {exc}", endpoint=endpoint)
    if resp.status_code != 200 or payload.get("vectors") != []:
        raise BackendError("empty request must yield an empty vector list",
                           endpoint=endpoint)
    return dims


def _probe_generate(endpoint: str) -> None:
    client = genbridge.GenerationClient(endpoint, retries=0)
    gi = genbridge.GenInput(triple_id="probe", mode="claim_article",
                            text="", budget=512, claim_text="Probe claim.",
                            context_text="Probe context sentence one. And two.",
                            dropped_sentences=0)
    decoding = genbridge.DecodingSpec("beam", {"beams": 1})
    first = client.generate(gi, decoding, seed=13)
    second = client.generate(gi, decoding, seed=13)
    if first.flagged:
        raise BackendError("generation endpoint returned empty text", endpoint=endpoint)
    if first.text != second.text:
        raise BackendError("beam generation is not seed-deterministic", endpoint=endpoint)
    resp = requests.post(f"{endpoint.rstrip('/')}/generate", json={
        "claim": None, "context": "x", "mode": "article",
        "decoding": {"strategy": "greedy+", "params": {}}, "seed": 0}, timeout=30)
    if resp.status_code != 422:
        raise BackendError(
            f"unsupported strategy must return 422, got {resp.status_code}",
            endpoint=endpoint)


def _cmd_probe(args) -> int:
    dims = _probe_embed(args.endpoint)
    print(f"embed: ok, dims: {dims}")
    if args.generate:
        _probe_generate(args.endpoint)
        print("generate: ok (beam deterministic, 422 on unsupported strategy)")
    try:
        health = requests.get(f"{args.endpoint.rstrip('/')}/health", timeout=10)
        if health.ok:
            print(f"health: {health.json()}")
    except requests.RequestException:
        pass  # /health is optional for third-party servers
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="verifact",
                     description="Justification-production benchmark toolkit")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("ingest", help="validate a JSONL corpus file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--validate", action="store_true", help="validation is always on")
    p.add_argument("--name", default=None)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("analyze", help="corpus length and overlap statistics")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("extract", help="run one extractive configuration")
    p.add_argument("--corpus", required=True)
    p.add_argument("--method", required=True,
                   choices=["truncation", "lexrank", "claimdriven"])
    p.add_argument("--k", default=AUTO)
    p.add_argument("--selection", default="top", choices=["top", "bottom"])
    p.add_argument("--ordering", default="article", choices=["article", "ranking"])
    p.add_argument("--out", required=True)
    p.add_argument("--embed-endpoint", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("score", help="score candidate texts against gold verdicts")
    p.add_argument("--candidates", required=True)
    p.add_argument("--corpus", required=True)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("bench", help="expand and execute a benchmark grid")
    p.add_argument("--grid", required=True)
    p.add_argument("--corpus-dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--embed-endpoint", default=None)
    p.add_argument("--gen-endpoint", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("probe", help="protocol conformance check for a remote server")
    p.add_argument("--endpoint", required=True)
    p.add_argument("--generate", action="store_true",
                   help="also probe the /generate contract")
    p.set_defaults(func=_cmd_probe)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    options = {k: v for k, v in vars(args).items() if k not in ("func", "subcommand")}
    _print_config(args.subcommand, options)
    try:
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

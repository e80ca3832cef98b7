#!/usr/bin/env python3
"""Independent statistics oracle for the fixture corpora.

Recomputes every length and overlap statistic with its own counting code
(character-scan tokenizer, terminator-based sentence counts, Counter-based
n-gram overlap, full-table LCS) and freezes them into a manifest JSON.
The test suite compares the toolkit's analysis output against these values.

Deliberately imports nothing from the package under test. Relies on the
fixture template constraints: sentences end with exactly one final period
and contain no other . ! ? characters.

Usage: make_manifest.py <fixture.jsonl> <manifest.json>
"""

from __future__ import annotations

import json
import math
import sys
from collections import Counter
from pathlib import Path

CALIBRATION = 1.35
BUDGETS = (512, 1024)
FIELDS = ("claim", "article", "verdict")
# pair name -> (reference field, container/candidate field)
PAIRS = {
    "verdict_article": ("verdict", "article"),
    "claim_verdict": ("claim", "verdict"),
    "claim_article": ("claim", "article"),
}
VARIANTS = ("complete", "no_first", "no_last")


def scan_tokens(text: str) -> list[str]:
    out, cur = [], []
    for ch in text:
        if ch.isalnum():
            cur.append(ch.lower())
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return out


def sentence_count(text: str) -> int:
    return text.count(".")


def split_simple(text: str) -> list[str]:
    pieces = text.split(". ")
    return [p if p.endswith(".") else p + "." for p in pieces]


def subwords(token_count: int) -> int:
    return math.ceil(token_count * CALIBRATION)


def ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(zip(*(tokens[i:] for i in range(n))))


def lcs_table(a: list[str], b: list[str]) -> int:
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[len(a)][len(b)]


def prf(overlap: float, cand_total: int, ref_total: int) -> tuple[float, float, float]:
    p = overlap / cand_total if cand_total else 0.0
    r = overlap / ref_total if ref_total else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def rouge_pair(cand: list[str], ref: list[str]) -> dict[str, tuple[float, float, float]]:
    out = {}
    for n, name in ((1, "R1"), (2, "R2")):
        cg, rg = ngrams(cand, n), ngrams(ref, n)
        overlap = sum((cg & rg).values())
        out[name] = prf(overlap, sum(cg.values()), sum(rg.values()))
    out["RL"] = prf(lcs_table(cand, ref), len(cand), len(ref))
    return out


def main(fixture_path: str, manifest_path: str) -> None:
    records = [json.loads(line) for line in
               Path(fixture_path).read_text(encoding="utf-8").splitlines() if line.strip()]

    per_triple = {}
    for rec in records:
        per_triple[rec["id"]] = {
            f: {"sentences": sentence_count(rec[f]),
                "tokens": len(scan_tokens(rec[f])),
                "subwords": subwords(len(scan_tokens(rec[f])))}
            for f in FIELDS
        }

    n = len(records)
    length = {}
    for f in FIELDS:
        length[f] = {
            "mean_sentences": sum(per_triple[r["id"]][f]["sentences"] for r in records) / n,
            "mean_tokens": sum(per_triple[r["id"]][f]["tokens"] for r in records) / n,
            "mean_subwords": sum(per_triple[r["id"]][f]["subwords"] for r in records) / n,
        }
    length["frac_over"] = {
        str(b): sum(1 for r in records
                    if per_triple[r["id"]]["article"]["subwords"] > b) / n
        for b in BUDGETS
    }

    overlap = {}
    for pair, (ref_field, cand_field) in PAIRS.items():
        overlap[pair] = {}
        for variant in VARIANTS:
            sums = {f"{v}_{m}": 0.0 for v in ("R1", "R2", "RL") for m in ("recall", "f1")}
            excluded = 0
            counted = 0
            for rec in records:
                cand_text = rec[cand_field]
                if variant != "complete":
                    sents = split_simple(cand_text)
                    if len(sents) <= 1:
                        excluded += 1
                        continue
                    kept = sents[1:] if variant == "no_first" else sents[:-1]
                    cand_text = " ".join(kept)
                scores = rouge_pair(scan_tokens(cand_text), scan_tokens(rec[ref_field]))
                for v, (_, r, f) in scores.items():
                    sums[f"{v}_recall"] += r
                    sums[f"{v}_f1"] += f
                counted += 1
            entry = {key: value / counted for key, value in sums.items()}
            entry["excluded"] = excluded
            overlap[pair][variant] = entry

    manifest = {
        "file": Path(fixture_path).name,
        "calibration": CALIBRATION,
        "triples": n,
        "per_triple": per_triple,
        "length": length,
        "overlap": overlap,
    }
    Path(manifest_path).write_text(json.dumps(manifest, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {manifest_path}")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])

"""Corpus characterization: length statistics and pairwise ROUGE overlap.

Overlap pairs are oriented so the contained text is the ROUGE reference:
recall then reads "how much of the shorter text appears in its container".
The no_first/no_last variants drop the first/last sentence of the
container (candidate) text before scoring; triples whose container becomes
empty are excluded and counted.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

from . import rouge
from .corpus import (Corpus, DEFAULT_CALIBRATION, SEGMENTER_ID, SegmentedDoc,
                     TOKENIZER_ID, tokenize)
from .errors import DataError

# pair -> (reference field, candidate/container field)
PAIRS = {
    "verdict_article": ("verdict", "article"),
    "claim_verdict": ("claim", "verdict"),
    "claim_article": ("claim", "article"),
}
VARIANTS = ("complete", "no_first", "no_last")

_FIELD_INDEX = {"claim": 0, "article": 1, "verdict": 2}

DEFAULT_BUDGETS = (512, 1024)


@dataclass(frozen=True)
class ElementLengths:
    mean_sentences: float
    mean_tokens: float
    mean_subwords: float


@dataclass(frozen=True)
class LengthStats:
    article: ElementLengths
    claim: ElementLengths
    verdict: ElementLengths
    # budget -> fraction of articles whose subword estimate exceeds it
    budget_exceeded: dict[int, float]


@dataclass(frozen=True)
class OverlapStats:
    pair: str
    variant: str
    means: dict[str, rouge.RougeScore]
    triple_count: int
    excluded: int


def length_stats(corpus: Corpus, budgets=DEFAULT_BUDGETS) -> LengthStats:
    if not len(corpus):
        raise DataError(f"corpus {corpus.name!r} is empty")
    n = len(corpus)
    sums = {f: [0, 0, 0] for f in _FIELD_INDEX}  # sentences, tokens, subwords
    over = {b: 0 for b in budgets}
    for t in corpus:
        docs = corpus.segmented(t.id)
        for fname, idx in _FIELD_INDEX.items():
            doc = docs[idx]
            sums[fname][0] += doc.sentence_count
            sums[fname][1] += doc.token_count
            sums[fname][2] += doc.subword_estimate
        article = docs[1]
        for b in budgets:
            if article.subword_estimate > b:
                over[b] += 1

    def element(fname: str) -> ElementLengths:
        s = sums[fname]
        return ElementLengths(s[0] / n, s[1] / n, s[2] / n)

    return LengthStats(article=element("article"), claim=element("claim"),
                       verdict=element("verdict"),
                       budget_exceeded={b: over[b] / n for b in budgets})


def ablate(doc: SegmentedDoc, variant: str) -> str | None:
    """Container text under a variant; None when ablation empties it."""
    if variant == "complete":
        return doc.text
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if doc.sentence_count <= 1:
        return None
    kept = doc.sentence_texts()
    kept = kept[1:] if variant == "no_first" else kept[:-1]
    return " ".join(kept)


def overlap_stats(corpus: Corpus, pair: str, variant: str) -> OverlapStats:
    if pair not in PAIRS:
        raise ValueError(f"unknown pair {pair!r}")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if not len(corpus):
        raise DataError(f"corpus {corpus.name!r} is empty")
    ref_field, cand_field = PAIRS[pair]
    per_variant: dict[str, list[rouge.RougeScore]] = {v: [] for v in rouge.VARIANTS}
    excluded = 0
    for t in corpus:
        docs = corpus.segmented(t.id)
        ref_doc = docs[_FIELD_INDEX[ref_field]]
        cand_doc = docs[_FIELD_INDEX[cand_field]]
        cand_text = ablate(cand_doc, variant)
        if cand_text is None:
            excluded += 1
            continue
        cand_tokens = tokenize(cand_text)
        ref_tokens = ref_doc.token_list()
        for name, score in rouge.score_all(cand_tokens, ref_tokens).items():
            per_variant[name].append(score)
    counted = len(corpus) - excluded
    if counted == 0:
        raise DataError(f"all triples excluded for {pair}/{variant}")
    means = {name: rouge.aggregate(scores) for name, scores in per_variant.items()}
    return OverlapStats(pair=pair, variant=variant, means=means,
                        triple_count=counted, excluded=excluded)


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def collect_rows(corpus: Corpus, budgets=DEFAULT_BUDGETS) -> list[tuple[str, str, str, str, str]]:
    """All stats as (table, dataset, variant, metric, value) rows."""
    datasets = sorted({t.dataset for t in corpus})
    rows: list[tuple[str, str, str, str, str]] = []
    for ds in datasets:
        sub_triples = [t for t in corpus if t.dataset == ds]
        sub = Corpus(name=ds, triples=tuple(sub_triples),
                     _segmented={t.id: corpus.segmented(t.id) for t in sub_triples})
        lengths = length_stats(sub, budgets)
        for element in ("article", "claim", "verdict"):
            stats: ElementLengths = getattr(lengths, element)
            rows.append(("length", ds, element, "mean_sentences", _fmt(stats.mean_sentences)))
            rows.append(("length", ds, element, "mean_tokens", _fmt(stats.mean_tokens)))
            rows.append(("length", ds, element, "mean_subwords", _fmt(stats.mean_subwords)))
        for b in budgets:
            rows.append(("length", ds, "article", f"frac_over_{b}",
                         _fmt(lengths.budget_exceeded[b])))
        for pair in PAIRS:
            for variant in VARIANTS:
                stats = overlap_stats(sub, pair, variant)
                for vname in rouge.VARIANTS:
                    mean = stats.means[vname]
                    rows.append((pair, ds, variant, f"{vname}_recall", _fmt(mean.recall)))
                    rows.append((pair, ds, variant, f"{vname}_f1", _fmt(mean.f1)))
                rows.append((pair, ds, variant, "excluded", str(stats.excluded)))
    return rows


def config_header() -> list[str]:
    return [
        f"tokenizer: {TOKENIZER_ID}",
        f"segmenter: {SEGMENTER_ID}",
        f"rouge_lcs: {rouge.LCS_VARIANT_ID}",
        f"subword_calibration: {DEFAULT_CALIBRATION}",
        "recall orientation: contained text is the ROUGE reference "
        "(verdict vs article, claim vs verdict, claim vs article)",
        "ablation: no_first/no_last drop the container's first/last sentence",
    ]


def report(corpus: Corpus, out: str | Path, budgets=DEFAULT_BUDGETS) -> tuple[Path, Path]:
    """Write analysis.csv and summary.md into `out`; returns their paths."""
    out = Path(out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create report directory {out}: {exc}") from exc
    rows = collect_rows(corpus, budgets)

    csv_path = out / "analysis.csv"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["table", "dataset", "variant", "metric", "value"])
    writer.writerows(rows)
    csv_path.write_text(buf.getvalue(), encoding="utf-8")

    md_path = out / "summary.md"
    lines = [f"# Corpus analysis: {corpus.name}", ""]
    lines += ["```"] + config_header() + ["```", ""]
    lines.append("| table | dataset | variant | metric | value |")
    lines.append("|---|---|---|---|---|")
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    md_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return csv_path, md_path

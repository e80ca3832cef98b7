#!/usr/bin/env python3
"""Run the extractive benchmark grid end to end.

With no arguments this stages the shipped fixture corpora and runs the
20-cell extractive grid, writing results.csv and tables.md under out/.
Point --corpus-dir at a directory of <dataset>.jsonl files to run on real
data, and add --embed-endpoint / --gen-endpoint to use remote backends
(e.g. the reference model server).
"""

from __future__ import annotations

import argparse
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from verifact.bench import execute  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"


def stage_fixture_corpora(target: Path) -> Path:
    target.mkdir(parents=True, exist_ok=True)
    for tag in ("ff", "lpp"):
        shutil.copy(FIXTURES / f"{tag}_fixture.jsonl", target / f"{tag}.jsonl")
    return target


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", default=str(ROOT / "grids" / "extractive_paper.grid"))
    parser.add_argument("--corpus-dir", default=None,
                        help="directory of <dataset>.jsonl files; default: shipped fixtures")
    parser.add_argument("--out", default=str(ROOT / "out"))
    parser.add_argument("--embed-endpoint", default=None)
    parser.add_argument("--gen-endpoint", default=None)
    parser.add_argument("--jobs", type=int, default=2)
    args = parser.parse_args()

    out = Path(args.out)
    corpus_dir = Path(args.corpus_dir) if args.corpus_dir \
        else stage_fixture_corpora(out / "corpora")
    results = execute(args.grid, corpus_dir, out,
                      embed_endpoint=args.embed_endpoint,
                      gen_endpoint=args.gen_endpoint, jobs=args.jobs)
    print(f"{len(results)} cells -> {out / 'results.csv'}")
    for res in results:
        cfg = res.config
        print(f"  {cfg.dataset:>4} {cfg.extract.method:>11} {cfg.extract.selection:>6} "
              f"{cfg.extract.ordering:>7}  R1={res.means['R1'].f1:.3f} "
              f"R2={res.means['R2'].f1:.3f} RL={res.means['RL'].f1:.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Frontier of every color as the window grows, for several word/coloring pairs.

Writes one CSV row per (word, coloring, window, color). A saturated color
keeps the same frontier while the window doubles; a growing one tracks it.

    python3 scripts/frontier_study.py --out frontiers.csv
"""

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

from factorcolor.colorings import parse_coloring_spec
from factorcolor.generators import parse_word_spec
from factorcolor.verifier import mono_verdict


@dataclass
class StudyConfig:
    cases: list = field(
        default_factory=lambda: [
            ("fib", "rich3"),
            ("sturmian:pre=[2];per=[1]", "rich3"),
            ("sturmian:pre=[3];per=[1]", "rich3"),
            ("luca", "pipeline:gap=64"),
            ("pf", "prefix2"),
            ("tm", "lastletter"),
            ("ultper:v=;u=ab", "lastletter"),
        ]
    )
    windows: tuple = (6250, 12_500, 25_000, 50_000, 100_000)
    max_block: int | None = None


def run(cfg: StudyConfig, out):
    w = csv.writer(out)
    w.writerow(["word", "coloring", "window", "color", "frontier", "verdict", "seconds"])
    for word_spec, coloring in cfg.cases:
        x = parse_word_spec(word_spec)
        for N in cfg.windows:
            start = time.perf_counter()
            scheme = parse_coloring_spec(coloring, x, N)
            v = mono_verdict(scheme, N, cfg.max_block)
            took = round(time.perf_counter() - start, 3)
            for c, r in v.results.items():
                w.writerow([word_spec, coloring, N, scheme.palette.name(c), r.frontier, r.verdict, took])
            out.flush()


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--max-window", type=int, default=100_000)
    p.add_argument("--max-block", type=int)
    args = p.parse_args(argv)
    cfg = StudyConfig(max_block=args.max_block)
    cfg.windows = tuple(n for n in cfg.windows if n <= args.max_window)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            run(cfg, fh)
    else:
        run(cfg, sys.stdout)


if __name__ == "__main__":
    main()

"""Unbordered prefixes against prefixal factorizations on a few words.

Words with many unbordered prefixes should admit no factorization into
prefixes; words with a prefixal factorization should have few.

    python3 scripts/prefixal_study.py --window 50000
"""

import argparse
from dataclasses import dataclass

from factorcolor.generators import parse_word_spec
from factorcolor.verifier import prefixal_search


@dataclass
class PrefixalConfig:
    words: tuple = ("pf", "thue3", "tm", "fib", "sturmian:pre=[2];per=[1]", "luca")
    window: int = 50_000


def run(cfg: PrefixalConfig):
    print(f"{'word':<28}{'unbordered':>11}{'frontier':>10}  witness  consistent")
    for spec in cfg.words:
        rep = prefixal_search(parse_word_spec(spec), cfg.window)
        found = "yes" if rep.witness is not None else "no"
        print(f"{spec:<28}{len(rep.unbordered):>11}{rep.result.frontier:>10}  {found:<7}  {rep.consistent}")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--window", type=int, default=PrefixalConfig.window)
    args = p.parse_args(argv)
    run(PrefixalConfig(window=args.window))


if __name__ == "__main__":
    main()

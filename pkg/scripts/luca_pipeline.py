"""Walk through the non-uniformly-recurrent pipeline on the word L = W_1 W_2 ...

Prints the blocks W_k, the S-operator steps, the lifted palette, and the
frontier of each color.

    python3 scripts/luca_pipeline.py --window 100000
"""

import argparse
from dataclasses import dataclass

from factorcolor import analysis
from factorcolor.colorings import nonuniform_pipeline
from factorcolor.generators import LucaWord, parse_word_spec
from factorcolor.verifier import mono_verdict


@dataclass
class PipelineConfig:
    window: int = 100_000
    gap_bound: int = 64
    blocks: int = 5


def run(cfg: PipelineConfig):
    gen = LucaWord.blocks()
    for k in range(1, cfg.blocks + 1):
        print(f"W_{k} = {next(gen)}")
    x = parse_word_spec("luca")
    d = analysis.derived_word(x, "a", cfg.window)
    print(f"return words to a: {list(d.table.words)}")
    print(f"derived word:      {d.text[:32]}...")
    for k, o in enumerate(analysis.s_iterate(x, cfg.window, cfg.gap_bound), 1):
        if o.is_z:
            print(f"S^{k}: Z  ({o.reason})")
        else:
            print(f"S^{k}: {o.derived.text[:24]}...  return words {list(o.derived.table.words)}")
    scheme = nonuniform_pipeline(x, cfg.window, cfg.gap_bound)
    print(f"coloring {scheme.label}, palette {list(scheme.palette.names)}")
    v = mono_verdict(scheme)
    for c, r in v.results.items():
        print(f"  {scheme.palette.name(c):>3}: {r.verdict:<9} frontier {r.frontier}")
    print(v.verdict)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--window", type=int, default=PipelineConfig.window)
    p.add_argument("--gap-bound", type=int, default=PipelineConfig.gap_bound)
    args = p.parse_args(argv)
    run(PipelineConfig(window=args.window, gap_bound=args.gap_bound))


if __name__ == "__main__":
    main()

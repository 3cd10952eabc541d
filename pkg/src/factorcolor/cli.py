"""Command-line interface: ``factorcolor gen|analyze|verify``.

Positions printed for humans are 1-based; the library is 0-based.
Exit status: 0 success (for ``verify``: every color saturated), 1 some
color growing, 2 error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, fields
from fractions import Fraction

from factorcolor import __version__, analysis
from factorcolor.colorings import parse_coloring_spec
from factorcolor.errors import FactorColorError, InvalidArgument
from factorcolor.generators import parse_word_spec
from factorcolor.verifier import CAVEAT, mono_verdict

ANALYSES = ("complexity", "specials", "balance", "returns", "derive", "soperator", "freq", "borders")
REPORT_SCHEMA = 1


@dataclass
class RunConfig:
    command: str
    word: str
    window: int = 10_000
    coloring: str | None = None
    max_block: int | None = None
    format: str = "text"
    what: str | None = None
    u: str | None = None
    gap_bound: int = 64
    t: int | None = None
    letter: str | None = None
    M: int | None = None
    up_to: int | None = None
    side: str = "right"
    out: str | None = None
    timing: bool = False

    def to_argv(self) -> list[str]:
        """Command line that parses back to this config."""
        argv = [self.command]
        for f in fields(self):
            if f.name == "command":
                continue
            value = getattr(self, f.name)
            if value is None or value == f.default:
                continue
            flag = "--" + f.name.replace("_", "-")
            if isinstance(value, bool):
                argv.append(flag)
            else:
                argv += [flag, str(value)]
        return argv

    def coloring_spec(self) -> str:
        spec = self.coloring or ""
        if ":" in spec:
            return spec
        if spec == "threshold" and self.t is not None:
            return f"threshold:t={self.t}"
        if spec == "freq4" and self.letter is not None and self.M is not None:
            return f"freq4:a={self.letter};M={self.M}"
        if spec == "pipeline":
            return f"pipeline:gap={self.gap_bound}"
        return spec


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="factorcolor", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, window_default):
        p.add_argument("--word", required=True, help="word spec, e.g. 'fix:a->ab;b->a@a' or 'fib'")
        p.add_argument("--window", "-n", type=int, default=window_default, help="prefix length")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--out", help="also write the report to this file")
        p.add_argument("--timing", action="store_true", help="record runtime_ms in the report")

    common(sub.add_parser("gen", help="print a prefix of a word"), 100)

    p = sub.add_parser("analyze", help="structural analysis of a window")
    common(p, 10_000)
    p.add_argument("--what", choices=ANALYSES, required=True)
    p.add_argument("--u", help="prefix for returns/derive")
    p.add_argument("--gap-bound", type=int, default=64)
    p.add_argument("--letter", help="letter for freq")
    p.add_argument("--up-to", type=int, help="largest factor length for complexity/specials/balance")
    p.add_argument("--side", choices=("left", "right"), default="right")

    p = sub.add_parser("verify", help="search for monochromatic factorizations")
    common(p, 10_000)
    p.add_argument("--coloring", required=True, help="coloring spec, e.g. 'rich3' or 'threshold:t=3'")
    p.add_argument("--max-block", type=int)
    p.add_argument("--gap-bound", type=int, default=64)
    p.add_argument("--t", type=int)
    p.add_argument("--letter")
    p.add_argument("--M", type=int)
    return parser


def parse_config(argv: list[str]) -> RunConfig:
    ns = vars(_build_parser().parse_args(argv))
    known = {f.name for f in fields(RunConfig)}
    return RunConfig(**{k: v for k, v in ns.items() if k in known})


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# commands


def cmd_gen(cfg: RunConfig) -> tuple[dict, int]:
    x = parse_word_spec(cfg.word)
    return {"prefix": x.prefix(cfg.window)}, 0


def cmd_analyze(cfg: RunConfig) -> tuple[dict, int]:
    x = parse_word_spec(cfg.word)
    N = cfg.window
    what = cfg.what
    advisories = []
    if what in ("complexity", "specials", "balance"):
        idx = analysis.build_index(x, N)
        default = {"complexity": 100, "specials": 10, "balance": 60}[what]
        up_to = min(cfg.up_to or default, idx.n_max)
        if what == "complexity":
            payload = {"complexity": [[n, idx.complexity(n)] for n in range(1, up_to + 1)]}
        elif what == "specials":
            payload = {
                "side": cfg.side,
                "specials": [[n, sorted(analysis.special_factors(idx, n, cfg.side))] for n in range(1, up_to + 1)],
            }
        else:
            ok, w = analysis.is_balanced(idx, up_to)
            payload = {"up_to": up_to, "balanced": ok, "witness": None if w is None else [w.u, w.v, w.letter]}
    elif what in ("returns", "derive"):
        u = cfg.u or x.prefix(1)
        d = analysis.derived_word(x, u, N)
        table = d.table
        payload = {
            "u": u,
            "return_words": list(table.words),
            "covered": table.covered,
        }
        if what == "derive":
            payload["derived"] = d.text
        advisories.append("return words first occurring beyond the window are not listed")
    elif what == "soperator":
        outcomes = analysis.s_iterate(x, N, cfg.gap_bound)
        steps = []
        for k, o in enumerate(outcomes, 1):
            if o.is_z:
                steps.append({"step": k, "result": "Z", "witness": [o.witness[0] + 1, o.witness[1]], "reason": o.reason})
            else:
                steps.append({"step": k, "result": "derived", "prefix": o.derived.text[:64], "return_words": list(o.derived.table.words)})
        payload = {"gap_bound": cfg.gap_bound, "steps": steps}
        advisories.append("uniform recurrence is judged from the window (evidence, not proof)")
    elif what == "freq":
        letter = cfg.letter or x.prefix(1)
        est = analysis.frequency(x, letter, N)
        payload = {
            "letter": letter,
            "liminf": _frac(est.liminf),
            "limsup": _frac(est.limsup),
            "liminf_float": float(est.liminf),
            "limsup_float": float(est.limsup),
        }
    else:
        unb = analysis.unbordered_prefixes(x, N)
        pal = analysis.palindromic_prefixes(x, N)
        payload = {"unbordered": unb, "palindromic": [[n, c] for n, c in pal]}
    payload["advisories"] = advisories
    return payload, 0


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    x = parse_word_spec(cfg.word)
    scheme = parse_coloring_spec(cfg.coloring_spec(), x, cfg.window)
    verdict = mono_verdict(scheme, cfg.window, cfg.max_block)
    per_color = []
    advisories = []
    for color, res in verdict.results.items():
        w = res.witness()
        per_color.append(
            {
                "color": scheme.palette.name(color),
                "frontier": res.frontier,
                "verdict": res.verdict,
                "partial": res.partial,
                "curve": res.curve(),
                "witness": {"start": 1, "covered": w.covered, "blocks": list(w.blocks)},
            }
        )
        advisories += [f"{scheme.palette.name(color)}: {a}" for a in res.advisories]
    payload = {
        "coloring": scheme.label,
        "palette": list(scheme.palette.names),
        "max_block": next(iter(verdict.results.values())).max_block,
        "verdict": verdict.verdict,
        "per_color": per_color,
        "advisories": advisories,
        "caveat": CAVEAT,
    }
    return payload, 0 if verdict.all_saturated else 1


COMMANDS = {"gen": cmd_gen, "analyze": cmd_analyze, "verify": cmd_verify}


# --------------------------------------------------------------------------
# rendering


def render(cfg: RunConfig, payload: dict, runtime_ms: float | None) -> str:
    if cfg.command == "gen" and cfg.format == "text":
        return payload["prefix"] + "\n"
    report = {
        "schema": REPORT_SCHEMA,
        "version": __version__,
        "word": cfg.word,
        "window": cfg.window,
        "command": cfg.command if cfg.what is None else f"{cfg.command}:{cfg.what}",
        **payload,
        "runtime_ms": runtime_ms,
    }
    report.setdefault("advisories", [])
    if cfg.format == "json":
        return json.dumps(report, ensure_ascii=False, indent=2) + "\n"
    if cfg.format == "csv":
        return _render_csv(cfg, report)
    return _render_text(cfg, report)


def _render_csv(cfg: RunConfig, report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if cfg.command == "verify":
        w.writerow(["color", "scanned", "frontier"])
        for entry in report["per_color"]:
            for n, f in entry["curve"]:
                w.writerow([entry["color"], n, f])
    elif cfg.command == "gen":
        w.writerow(["position", "letter"])
        for i, c in enumerate(report["prefix"], 1):
            w.writerow([i, c])
    elif cfg.what == "complexity":
        w.writerow(["n", "complexity"])
        w.writerows(report["complexity"])
    else:
        w.writerow(["key", "value"])
        for k, v in report.items():
            if k not in ("schema", "version", "word", "window", "command", "runtime_ms"):
                w.writerow([k, json.dumps(v, ensure_ascii=False)])
    return buf.getvalue()


def _short(block: str, width: int = 16) -> str:
    return block if len(block) <= width else f"{block[:width]}...[{len(block)}]"


def _render_text(cfg: RunConfig, report: dict) -> str:
    lines = [f"word {report['word']}  window {report['window']}  ({report['command']})"]
    if cfg.command == "verify":
        lines.append(f"coloring {report['coloring']}  palette {{{', '.join(report['palette'])}}}  max block {report['max_block']}")
        for entry in report["per_color"]:
            blocks = entry["witness"]["blocks"]
            shown = " ".join(_short(b) for b in blocks[:8]) + (" ..." if len(blocks) > 8 else "")
            lines.append(
                f"  color {entry['color']:>4}: {entry['verdict']:<9} frontier {entry['frontier']}"
                f"  (covers positions 1..{entry['frontier']}; {len(blocks)} blocks: {shown})"
            )
        lines.append(f"verdict {report['verdict']}")
        lines.append(report["caveat"])
    else:
        for k, v in report.items():
            if k in ("schema", "version", "word", "window", "command", "runtime_ms", "advisories"):
                continue
            if isinstance(v, str):
                v = _short(v, 80)
            lines.append(f"{k}: {json.dumps(v, ensure_ascii=False)}")
    for a in report.get("advisories", []):
        lines.append(f"advisory: {a}")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    start = time.perf_counter()
    try:
        if cfg.window < 1:
            raise InvalidArgument(f"window must be positive, got {cfg.window}")
        payload, status = COMMANDS[cfg.command](cfg)
    except FactorColorError as exc:
        message = {"error": {"code": exc.code, "message": str(exc)}}
        if cfg.format == "json":
            sys.stdout.write(json.dumps(message, ensure_ascii=False) + "\n")
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        return 2
    runtime = round((time.perf_counter() - start) * 1000, 1) if cfg.timing else None
    text = render(cfg, payload, runtime)
    sys.stdout.write(text)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Finite search for monochromatic factorizations.

For a scheme on ``x[0:N]`` and a color ``c``, position ``j`` is *reachable*
when ``x[0:j]`` factors into blocks of length at most ``max_block`` that are
all colored ``c``. A color whose reachable frontier stops advancing well
before the window end is reported ``SATURATED``. That is evidence that no
monochromatic factorization in that color exists, not a proof.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from factorcolor import analysis
from factorcolor.colorings import ColoringScheme, PrefixScheme, prefix2, rich3
from factorcolor.errors import InvalidArgument, ProbeError
from factorcolor.generators import InfiniteWord

SATURATED = "SATURATED"
GROWING = "GROWING"
CAVEAT = (
    "SATURATED is evidence from a finite window: no monochromatic chain of blocks "
    "reaches the last quarter of the window. It is not a proof."
)


@dataclass(frozen=True)
class FactorizationWitness:
    """Blocks covering ``x[start:start + covered]`` together with their colors."""

    blocks: tuple[str, ...]
    colors: tuple
    covered: int
    start: int = 0

    def verify(self, scheme: ColoringScheme) -> bool:
        """Re-check concatenation and colors against the scheme."""
        text = scheme.text[self.start:self.start + self.covered]
        if "".join(self.blocks) != text or len(self.blocks) != len(self.colors):
            return False
        return all(scheme.classify(b) == c for b, c in zip(self.blocks, self.colors))


@dataclass
class ReachabilityResult:
    color: object
    window: int
    max_block: int
    reachable: np.ndarray = field(repr=False)  # boolean, index 0..window
    frontier: int
    verdict: str
    partial: bool = False
    advisories: list = field(default_factory=list)
    scheme: ColoringScheme | None = field(default=None, repr=False)

    @property
    def positions(self) -> list[int]:
        return np.flatnonzero(self.reachable).tolist()

    def is_reachable(self, j: int) -> bool:
        return bool(self.reachable[j])

    def curve(self, points: int = 64) -> list[tuple[int, int]]:
        """``(scanned length n, largest reachable position <= n)`` at evenly spaced ``n``."""
        idx = np.arange(self.window + 1)
        running = np.maximum.accumulate(np.where(self.reachable, idx, 0))
        ns = sorted({max(1, self.window * k // points) for k in range(1, points + 1)})
        return [(n, int(running[n])) for n in ns]

    def witness(self, j: int | None = None) -> FactorizationWitness:
        """Blocks reaching ``j`` (default: the frontier).

        Each step back takes the smallest reachable predecessor, so blocks
        are as long as ``max_block`` allows and the witness is reproducible.
        """
        if j is None:
            j = self.frontier
        if not self.reachable[j]:
            raise InvalidArgument(f"position {j} is not reachable in color {self.color!r}")
        scheme = self.scheme
        blocks = []
        while j > 0:
            for i in range(max(0, j - self.max_block), j):
                if self.reachable[i]:
                    try:
                        ok = scheme.block_color(i, j) == self.color
                    except ProbeError:
                        ok = False
                    if ok:
                        break
            else:  # pragma: no cover - reachability guarantees a predecessor
                raise RuntimeError(f"no predecessor for reachable position {j}")
            blocks.append(scheme.text[i:j])
            j = i
        blocks.reverse()
        return FactorizationWitness(tuple(blocks), (self.color,) * len(blocks), sum(map(len, blocks)))


def _verdict(frontier: int, N: int) -> str:
    return SATURATED if frontier <= N - N // 4 else GROWING


def _defaults(scheme: ColoringScheme, N: int | None, max_block: int | None) -> tuple[int, int]:
    N = scheme.window if N is None else N
    if N > scheme.window:
        raise InvalidArgument(f"window {N} exceeds the scheme window {scheme.window}")
    if max_block is None:
        max_block = max(1, N // 8)
    if max_block < 1:
        raise InvalidArgument("max_block must be positive")
    return N, min(max_block, N)


def _reach_prefix(scheme: PrefixScheme, color, N: int, L: int, advisories: list) -> tuple[np.ndarray, bool]:
    partial = False
    try:
        table = scheme.prefix_table(L)
    except ProbeError as exc:
        advisories.append(str(exc))
        partial = True
        table = [None]
        for m in range(1, L + 1):
            try:
                table.append(scheme.prefix_color(m))
            except ProbeError:
                table.append(None)
    lengths = np.array([m for m in range(1, L + 1) if table[m] == color], dtype=np.int64)
    ranged = scheme.nonprefix_color == color
    z = scheme.z
    reach = np.zeros(N + 1, dtype=bool)
    reach[0] = True
    diff = np.zeros(N + 2, dtype=np.int64)
    active = 0
    for i in range(N + 1):
        active += diff[i]
        if not (reach[i] or active > 0):
            continue
        reach[i] = True
        if i == N:
            break
        zi = min(z[i], N - i)
        if len(lengths):
            k = np.searchsorted(lengths, min(zi, L), side="right")
            if k:
                reach[i + lengths[:k]] = True
        if ranged and zi < L:
            lo, hi = i + zi + 1, min(i + L, N)
            if lo <= hi:
                diff[lo] += 1
                diff[hi + 1] -= 1
    return reach, partial


def _reach_generic(scheme: ColoringScheme, color, N: int, L: int, advisories: list) -> tuple[np.ndarray, bool]:
    reach = np.zeros(N + 1, dtype=bool)
    reach[0] = True
    partial = False
    for i in range(N):
        if not reach[i]:
            continue
        for j in range(i + 1, min(i + L, N) + 1):
            if reach[j]:
                continue
            try:
                if scheme.block_color(i, j) == color:
                    reach[j] = True
            except ProbeError as exc:
                if not partial:
                    advisories.append(str(exc))
                partial = True
    return reach, partial


def mono_reachable(scheme: ColoringScheme, color, N: int | None = None, max_block: int | None = None) -> ReachabilityResult:
    """Reachable positions of monochromatic block chains in ``color``."""
    N, L = _defaults(scheme, N, max_block)
    advisories: list = []
    if scheme.prefix_structured:
        reach, partial = _reach_prefix(scheme, color, N, L, advisories)
    else:
        reach, partial = _reach_generic(scheme, color, N, L, advisories)
    frontier = int(np.flatnonzero(reach)[-1])
    return ReachabilityResult(color, N, L, reach, frontier, _verdict(frontier, N), partial, advisories, scheme)


@dataclass
class MonoVerdict:
    scheme: ColoringScheme = field(repr=False)
    results: dict

    @property
    def all_saturated(self) -> bool:
        return all(r.verdict == SATURATED for r in self.results.values())

    @property
    def verdict(self) -> str:
        return "ALL-SATURATED" if self.all_saturated else GROWING

    @property
    def growing(self) -> list:
        return [c for c, r in self.results.items() if r.verdict == GROWING]

    def __getitem__(self, color):
        return self.results[color]


def mono_verdict(scheme: ColoringScheme, N: int | None = None, max_block: int | None = None) -> MonoVerdict:
    return MonoVerdict(scheme, {c: mono_reachable(scheme, c, N, max_block) for c in scheme.palette})


@dataclass
class PrefixalReport:
    result: ReachabilityResult
    unbordered: list[int]
    witness: FactorizationWitness | None

    @property
    def saturated(self) -> bool:
        return self.result.verdict == SATURATED

    @property
    def consistent(self) -> bool:
        """Many unbordered prefixes and a prefixal witness should not go together."""
        return (len(self.unbordered) >= 10) != (self.witness is not None)


def prefixal_search(x: InfiniteWord, N: int, max_block: int | None = None) -> PrefixalReport:
    """Search for a factorization of ``x[0:N]`` into prefixes of ``x``."""
    if N < 2:
        raise InvalidArgument("window must be at least 2")
    scheme = prefix2(x, N)
    result = mono_reachable(scheme, 1, N, max_block)
    witness = result.witness() if result.verdict == GROWING else None
    return PrefixalReport(result, analysis.unbordered_prefixes(x, N), witness)


def equally_rich_search(x: InfiniteWord, N: int, max_block: int | None = None) -> dict:
    """Per letter ``z``: chains of prefixes of ``x`` that are all rich in ``z``."""
    scheme = rich3(x, N)
    return {z: mono_reachable(scheme, z, N, max_block) for z in scheme.letters}


@dataclass(frozen=True)
class RamseyWitness:
    positions: tuple[int, ...]
    color: object
    blocks: tuple[str, ...]

    @property
    def start(self) -> int:
        return self.positions[0]


def ramsey_witness(scheme: ColoringScheme, k: int, N: int | None = None) -> RamseyWitness | None:
    """Positions ``n_1 < ... < n_k`` whose consecutive blocks share one color.

    Iterated pigeonhole: take the smallest remaining position ``n``, color
    every block from ``n`` to a later remaining position, keep the largest
    color class (ties go to the palette order) and record its color for
    ``n``. The recorded colors are then grouped and the largest group gives
    the chain. ``None`` means the window was too short.
    """
    if k < 2:
        raise InvalidArgument("k must be at least 2")
    N = scheme.window if N is None else N
    order = {c: i for i, c in enumerate(scheme.palette)}
    remaining = list(range(N + 1))
    picked: list[tuple[int, object]] = []
    while len(remaining) >= 2:
        n, rest = remaining[0], remaining[1:]
        classes: dict = {}
        for m in rest:
            try:
                classes.setdefault(scheme.block_color(n, m), []).append(m)
            except ProbeError:
                continue
        if not classes:
            break
        color = max(classes, key=lambda c: (len(classes[c]), -order.get(c, len(order))))
        picked.append((n, color))
        remaining = classes[color]
    if remaining:
        picked.append((remaining[0], None))
    counts = Counter(c for _, c in picked[:-1])
    for color, _ in sorted(counts.items(), key=lambda kv: (-kv[1], order.get(kv[0], len(order)))):
        chain = [n for n, c in picked[:-1] if c == color]
        # the block from the last chosen position ends at the next picked position
        nxt = {picked[i][0]: picked[i + 1][0] for i in range(len(picked) - 1)}
        positions = chain + [nxt[chain[-1]]]
        if len(positions) >= k:
            positions = positions[:k]
            blocks = tuple(scheme.text[p:q] for p, q in zip(positions, positions[1:]))
            return RamseyWitness(tuple(positions), color, blocks)
    return None


@dataclass(frozen=True)
class SandwichReport:
    letter: str
    m_a: Fraction
    M_a: Fraction
    f_lo: Fraction  # min of |s_[n]|_a / n over n in [L/2, L]
    f_hi: Fraction
    margin: Fraction

    @property
    def holds(self) -> bool:
        return self.m_a - self.margin <= self.f_lo <= self.f_hi <= self.M_a + self.margin


def block_bound_check(blocks: Sequence[str] | FactorizationWitness, M: int, letters: Iterable[str] | None = None) -> dict:
    """Compare block letter ratios with the running ratios of their concatenation.

    With every block of length at most ``M`` and covered length ``L``, the
    ratios ``|s_[n]|_a / n`` for ``n >= L/2`` lie in ``[m_a, M_a]`` up to
    ``2M/L``.
    """
    if isinstance(blocks, FactorizationWitness):
        blocks = blocks.blocks
    blocks = list(blocks)
    if not blocks:
        raise InvalidArgument("no blocks")
    for b in blocks:
        if not b or len(b) > M:
            raise InvalidArgument(f"block of length {len(b)} outside [1, {M}]")
    text = "".join(blocks)
    L = len(text)
    letters = sorted(set(text)) if letters is None else list(letters)
    margin = Fraction(2 * M, L)
    out = {}
    n = np.arange(1, L + 1)
    lo_n = (L + 1) // 2
    for a in letters:
        ratios = [Fraction(b.count(a), len(b)) for b in blocks]
        counts = np.cumsum(np.frombuffer(text.encode("utf-32-le"), dtype=np.uint32) == ord(a))
        tail = counts[lo_n - 1:] / n[lo_n - 1:]
        i_lo, i_hi = int(np.argmin(tail)) + lo_n, int(np.argmax(tail)) + lo_n
        out[a] = SandwichReport(
            a,
            min(ratios),
            max(ratios),
            Fraction(int(counts[i_lo - 1]), i_lo),
            Fraction(int(counts[i_hi - 1]), i_hi),
            margin,
        )
    return out

"""Window-based structural analysis of infinite words.

Everything here looks at a finite prefix (the *window*) of an infinite word.
Statements about infinite behaviour (recurrence, uniform recurrence,
non-existence of factorizations) are reported as evidence, never as proofs.
Positions are 0-based.
"""

from __future__ import annotations

import itertools
import string
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from factorcolor.core import Morphism, border_array, count_occurrences, is_palindrome, occurrences
from factorcolor.errors import (
    InvalidArgument,
    NotAFactor,
    NotSturmianWindow,
    PrecisionError,
    WindowTooSmall,
)
from factorcolor.generators import (
    Directive,
    EventuallyPeriodic,
    FixedPoint,
    InfiniteWord,
    Splice,
    StandardSturmian,
    Suffix,
    WindowWord,
)

# Letters of derived words: the k-th return word is coded by DERIVED_ALPHABET[k - 1].
DERIVED_ALPHABET = "123456789" + string.ascii_uppercase + string.ascii_lowercase

_SEP = object()


def _codes(text: str) -> np.ndarray:
    return np.frombuffer(text.encode("utf-32-le"), dtype=np.uint32)


class FactorIndex:
    """Factor statistics of the window ``x[0:N]``.

    Factor lengths up to ``n_max = N // 2`` are considered reliable; longer
    queries raise :class:`WindowTooSmall`. Per-length occurrence tables are
    built lazily, one linear scan per length.
    """

    def __init__(self, x: InfiniteWord, N: int):
        if N < 2:
            raise InvalidArgument(f"window length must be at least 2, got {N}")
        self.word = x
        self.text = x.prefix(N)
        self.N = N
        self.n_max = N // 2
        self.letters = "".join(sorted(set(self.text)))
        self._factors: dict[int, dict[str, list[int]]] = {}
        self._prefix_counts: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    def _check_length(self, n: int) -> None:
        if n < 1:
            raise InvalidArgument(f"factor length must be positive, got {n}")
        if n > self.n_max:
            raise WindowTooSmall(f"length {n} exceeds n_max = {self.n_max} for window {self.N}")

    def _table(self, n: int) -> dict[str, list[int]]:
        table = self._factors.get(n)
        if table is None:
            text = self.text
            table = {}
            for i in range(self.N - n + 1):
                table.setdefault(text[i:i + n], []).append(i)
            with self._lock:
                self._factors.setdefault(n, table)
        return table

    def factors(self, n: int) -> dict[str, list[int]]:
        """Map each length-``n`` factor to its sorted occurrence list."""
        self._check_length(n)
        return self._table(n)

    def complexity(self, n: int) -> int:
        if n == 0:
            return 1
        return len(self.factors(n))

    def complexity_table(self, up_to: int) -> list[int]:
        """``[lambda(0), ..., lambda(up_to)]``."""
        return [self.complexity(n) for n in range(up_to + 1)]

    def contains(self, w: str) -> bool:
        if not w:
            return True
        self._check_length(len(w))
        table = self._factors.get(len(w))
        if table is not None:
            return w in table
        return self.text.find(w) != -1

    def occurrences(self, w: str) -> list[int]:
        self._check_length(len(w))
        return list(self._table(len(w)).get(w, ()))

    def prefix_counts(self, letter: str) -> np.ndarray:
        """``P[n]`` = occurrences of ``letter`` in ``text[:n]``."""
        p = self._prefix_counts.get(letter)
        if p is None:
            p = np.zeros(self.N + 1, dtype=np.int64)
            np.cumsum(_codes(self.text) == ord(letter), out=p[1:])
            self._prefix_counts[letter] = p
        return p

    def window_counts(self, n: int, letter: str) -> np.ndarray:
        """Occurrences of ``letter`` in every length-``n`` window of the text."""
        p = self.prefix_counts(letter)
        return p[n:] - p[: self.N + 1 - n]

    def count_range(self, n: int, letter: str) -> tuple[int, int]:
        """Min and max of ``|v|_letter`` over length-``n`` factors ``v``."""
        self._check_length(n)
        counts = self.window_counts(n, letter)
        return int(counts.min()), int(counts.max())


def build_index(x: InfiniteWord, N: int) -> FactorIndex:
    return FactorIndex(x, N)


def special_factors(idx: FactorIndex, n: int, side: str = "right") -> set[str]:
    """Length-``n`` factors with at least two extensions on ``side``."""
    if side not in ("left", "right"):
        raise InvalidArgument(f"side must be 'left' or 'right', got {side!r}")
    idx._check_length(n)
    ext: dict[str, set[str]] = {}
    for w in idx._table(n + 1):
        if side == "right":
            ext.setdefault(w[:-1], set()).add(w[-1])
        else:
            ext.setdefault(w[1:], set()).add(w[0])
    return {w for w, letters in ext.items() if len(letters) >= 2}


@dataclass(frozen=True)
class BalanceWitness:
    u: str
    v: str
    letter: str


def is_balanced(idx: FactorIndex, up_to: int) -> tuple[bool, BalanceWitness | None]:
    """Check ``||u|_z - |v|_z| <= 1`` for all same-length factors up to ``up_to``.

    Returns ``(True, None)`` or ``(False, witness)`` for the shortest failing length.
    """
    if up_to > idx.n_max:
        raise WindowTooSmall(f"up_to = {up_to} exceeds n_max = {idx.n_max}")
    for n in range(1, up_to + 1):
        for z in idx.letters:
            counts = idx.window_counts(n, z)
            hi, lo = int(counts.argmax()), int(counts.argmin())
            if counts[hi] - counts[lo] > 1:
                return False, BalanceWitness(idx.text[hi:hi + n], idx.text[lo:lo + n], z)
    return True, None


def sturmian_type(idx: FactorIndex) -> str:
    """The letter ``z`` such that ``zz`` is a factor of a binary window."""
    if len(idx.letters) != 2:
        raise NotSturmianWindow(f"window is over {idx.letters!r}, not binary")
    found = [z for z in idx.letters if idx.contains(z + z)]
    if len(found) != 1:
        raise NotSturmianWindow(f"squares of letters present: {found}")
    return found[0]


def check_sturmian_window(idx: FactorIndex, up_to: int = 30) -> None:
    """Raise unless the window is binary, balanced and has ``lambda(n) = n + 1``."""
    up_to = min(up_to, idx.n_max)
    if len(idx.letters) != 2:
        raise NotSturmianWindow(f"window is over {idx.letters!r}, not binary")
    ok, witness = is_balanced(idx, up_to)
    if not ok:
        raise NotSturmianWindow(f"unbalanced: {witness}")
    for n in range(1, up_to + 1):
        if idx.complexity(n) != n + 1:
            raise NotSturmianWindow(f"lambda({n}) = {idx.complexity(n)}, expected {n + 1}")


def repetitions(idx: FactorIndex, kind: str, max_root: int) -> list[tuple[str, int]]:
    """Squares ``vv`` or overlaps ``vva`` (``a`` the first letter of ``v``), one per root.

    Returns ``(root, first position)`` sorted by root length then position.
    """
    if kind not in ("square", "overlap"):
        raise InvalidArgument(f"kind must be 'square' or 'overlap', got {kind!r}")
    if 2 * max_root + 1 > idx.N:
        raise WindowTooSmall(f"max_root {max_root} too large for window {idx.N}")
    codes = _codes(idx.text)
    text = idx.text
    out = []
    for r in range(1, max_root + 1):
        span = r if kind == "square" else r + 1
        eq = codes[:-r] == codes[r:]
        if len(eq) < span:
            continue
        s = np.concatenate(([0], np.cumsum(eq)))
        starts = np.nonzero(s[span:] - s[:-span] == span)[0]
        roots: dict[str, int] = {}
        for i in starts.tolist():
            roots.setdefault(text[i:i + r], i)
        out.extend(sorted(roots.items(), key=lambda kv: kv[1]))
    return out


def unbordered_prefixes(x: InfiniteWord, N: int) -> list[int]:
    """Lengths ``1 <= n <= N`` such that ``x[:n]`` is unbordered."""
    f = border_array(x.prefix(N))
    return [n for n in range(1, N + 1) if f[n] == 0]


def palindromic_prefixes(x: InfiniteWord, N: int) -> list[tuple[int, str]]:
    """``(n, x[n])`` for every non-empty palindromic prefix ``x[:n]`` with ``n < N``."""
    text = x.prefix(N)
    seq = list(text) + [_SEP] + list(reversed(text))
    f = border_array(seq)
    out = []
    k = f[len(seq)]
    while k:
        if k < N:
            out.append((k, text[k]))
        k = f[k]
    return sorted(out)


@dataclass(frozen=True)
class RecurrenceGaps:
    occurrences: tuple[int, ...]
    max_gap: int | None  # largest difference of consecutive starts; None below 2 occurrences
    trailing_gap: int  # window length minus the last start


def recurrence_gaps(x: InfiniteWord, u: str, N: int) -> RecurrenceGaps:
    text = x.prefix(N)
    occ = occurrences(text, u)
    if not occ:
        raise NotAFactor(f"{u!r} does not occur in the window of length {N}")
    gaps = [q - p for p, q in zip(occ, occ[1:])]
    return RecurrenceGaps(tuple(occ), max(gaps) if gaps else None, N - occ[-1])


@dataclass(frozen=True)
class RecurrenceEvidence:
    """Why a factor looks non-uniformly recurrent in a window (or why not)."""

    uniform: bool
    witness: tuple[int, int] | None  # (start, next start or window end) with a long gap
    reason: str


def recurrence_evidence(text: str, u: str, gap_bound: int, detect_growth: bool = True) -> RecurrenceEvidence:
    """Evidence about uniform recurrence of ``u`` inside ``text``.

    ``u`` is flagged when some stretch between consecutive starts, or from
    the last start to the window end, exceeds ``gap_bound``; with
    ``detect_growth`` it is also flagged when the largest gap in the whole
    window exceeds the largest gap in its first half.
    """
    N = len(text)
    occ = occurrences(text, u)
    if not occ:
        raise NotAFactor(f"{u!r} does not occur in the window")
    bounds = occ + [N]
    for p, q in zip(bounds, bounds[1:]):
        if q - p > gap_bound:
            return RecurrenceEvidence(False, (p, q), f"gap {q - p} > gap_bound {gap_bound}")
    if detect_growth and len(occ) >= 3:
        half = N // 2
        gaps = [(q - p, p, q) for p, q in zip(occ, occ[1:])]
        first = max((g for g in gaps if g[2] <= half), default=None)
        best = max(gaps, key=lambda g: (g[0], -g[1]))
        if first is not None and best[0] > first[0]:
            return RecurrenceEvidence(
                False, (best[1], best[2]), f"max gap grows from {first[0]} (first half) to {best[0]}"
            )
    return RecurrenceEvidence(True, None, f"all gaps <= {gap_bound}")


@dataclass(frozen=True)
class ReturnWordTable:
    """Return words to a prefix ``u``, in order of first occurrence.

    ``occurrences`` are the starts of ``u`` in the window; the window factors
    as ``words[code[0]] words[code[1]] ...`` up to ``occurrences[-1]``.
    Return words first appearing beyond the window are not seen (advisory).
    """

    u: str
    words: tuple[str, ...]
    occurrences: tuple[int, ...]
    code: tuple[int, ...] = field(repr=False)

    @property
    def complete(self) -> tuple[str, ...]:
        return tuple(v + self.u for v in self.words)

    @property
    def covered(self) -> int:
        return self.occurrences[-1]

    def sigma(self, k: int) -> str:
        """Return word coded by the 1-based index ``k``."""
        return self.words[k - 1]

    def index(self, v: str) -> int:
        try:
            return self.words.index(v) + 1
        except ValueError:
            raise NotAFactor(f"{v!r} is not a return word to {self.u!r} in the window") from None


def return_words(x: InfiniteWord, u: str, N: int) -> ReturnWordTable:
    text = x.prefix(N)
    if not u or not text.startswith(u):
        raise InvalidArgument(f"{u!r} is not a non-empty prefix of the word")
    occ = occurrences(text, u)
    if len(occ) < 3:
        raise WindowTooSmall(f"{u!r} occurs only {len(occ)} times in the window of length {N}")
    words: list[str] = []
    lookup: dict[str, int] = {}
    code = []
    for p, q in zip(occ, occ[1:]):
        v = text[p:q]
        k = lookup.get(v)
        if k is None:
            words.append(v)
            k = lookup[v] = len(words) - 1
        code.append(k)
    return ReturnWordTable(u, tuple(words), tuple(occ), tuple(code))


@dataclass(frozen=True)
class DerivedWord:
    """Window of the derived word together with the return-word table it codes."""

    word: WindowWord
    table: ReturnWordTable

    @property
    def text(self) -> str:
        return self.word.prefix(len(self.word))

    def expand(self, w: str) -> str:
        """Letterwise sigma-expansion of a word over the derived alphabet."""
        return "".join(self.table.sigma(DERIVED_ALPHABET.index(c) + 1) for c in w)


def derived_word(x: InfiniteWord, u: str, N: int) -> DerivedWord:
    table = return_words(x, u, N)
    if len(table.words) > len(DERIVED_ALPHABET):
        raise InvalidArgument(f"{len(table.words)} return words exceed the derived alphabet")
    text = "".join(DERIVED_ALPHABET[k] for k in table.code)
    return DerivedWord(WindowWord(text, f"D[{u}]({x.spec})"), table)


@dataclass(frozen=True)
class SOutcome:
    """Result of one application of the S-operator.

    Either ``derived`` is set (S(x) = D_a(x)) or the outcome is the sink
    ``Z`` with a ``witness`` pair of positions enclosing a long gap.
    """

    derived: DerivedWord | None
    witness: tuple[int, int] | None = None
    reason: str = ""

    @property
    def is_z(self) -> bool:
        return self.derived is None


def _window_length(x: InfiniteWord, N: int) -> int:
    return min(N, len(x)) if x.is_finite else N


def s_operator(x: InfiniteWord, N: int, gap_bound: int, detect_growth: bool = True) -> SOutcome:
    """``D_a(x)`` for the first letter ``a`` if it looks uniformly recurrent, else ``Z``."""
    text = x.prefix(_window_length(x, N))
    a = text[0]
    evidence = recurrence_evidence(text, a, gap_bound, detect_growth)
    if not evidence.uniform:
        return SOutcome(None, evidence.witness, evidence.reason)
    return SOutcome(derived_word(x, a, len(text)), None, evidence.reason)


def s_iterate(x: InfiniteWord, N: int, gap_bound: int, max_steps: int = 8, detect_growth: bool = True) -> list[SOutcome]:
    """``S(x), S^2(x), ...`` until ``Z``, ``max_steps`` outcomes, or a derived
    window too short to derive again (then the last outcome is not ``Z``)."""
    out = []
    cur = x
    for _ in range(max_steps):
        try:
            res = s_operator(cur, N, gap_bound, detect_growth)
        except WindowTooSmall:
            break
        out.append(res)
        if res.is_z:
            break
        cur = res.derived.word
        N = len(cur)
    return out


def richness(idx: FactorIndex, w: str) -> str:
    """The unique letter ``z`` in which ``w`` is rich.

    ``w`` is rich in ``z`` when some factor of the same length has fewer
    ``z``'s; the minimum over window factors decides this.
    """
    if len(idx.letters) != 2:
        raise NotSturmianWindow(f"richness needs a binary window, got {idx.letters!r}")
    if not idx.contains(w):
        raise NotAFactor(f"{w!r} is not a factor of the window")
    n = len(w)
    rich = [z for z in idx.letters if count_occurrences(w, z) > idx.count_range(n, z)[0]]
    if len(rich) != 1:
        raise NotSturmianWindow(f"{w!r} is rich in {rich or 'no letter'}")
    return rich[0]


# --------------------------------------------------------------------------
# letter frequencies


@dataclass(frozen=True)
class FrequencyEstimate:
    letter: str
    points: tuple[int, ...]
    ratios: tuple[Fraction, ...]
    liminf: Fraction  # min of the sampled ratios over the second half of the window
    limsup: Fraction


def frequency(x: InfiniteWord, a: str, N: int, samples: int = 64) -> FrequencyEstimate:
    if samples < 1 or N < samples:
        raise InvalidArgument(f"need 1 <= samples <= N, got samples={samples}, N={N}")
    text = x.prefix(N)
    p = np.zeros(N + 1, dtype=np.int64)
    np.cumsum(_codes(text) == ord(a), out=p[1:])
    points = tuple(sorted({max(1, (N * k) // samples) for k in range(1, samples + 1)}))
    ratios = tuple(Fraction(int(p[n]), n) for n in points)
    tail = [r for n, r in zip(points, ratios) if 2 * n >= N] or [ratios[-1]]
    return FrequencyEstimate(a, points, ratios, min(tail), max(tail))


class FrequencyComparator:
    """Exact order predicate against a letter frequency.

    Calling it with a rational ``r`` returns the sign of ``r - f``.
    """

    def __call__(self, r: Fraction) -> int:
        raise NotImplementedError


class RationalFrequency(FrequencyComparator):
    def __init__(self, value: Fraction):
        self.value = Fraction(value)

    def __call__(self, r):
        r = Fraction(r)
        return (r > self.value) - (r < self.value)

    def __repr__(self):
        return f"RationalFrequency({self.value})"


class IntervalFrequency(FrequencyComparator):
    """Frequency known only to lie in ``[lo, hi]``; refuses rationals inside."""

    def __init__(self, lo: Fraction, hi: Fraction):
        self.lo, self.hi = Fraction(lo), Fraction(hi)

    def __call__(self, r):
        r = Fraction(r)
        if r < self.lo:
            return -1
        if r > self.hi:
            return 1
        raise PrecisionError(f"{r} lies inside the frequency interval [{self.lo}, {self.hi}]")


class SturmianFrequency(FrequencyComparator):
    """Letter frequency of a standard Sturmian word, compared exactly.

    The letter ratios of consecutive standard words ``s_{n-1}, s_n`` bracket
    the (irrational) frequency and the brackets shrink to it, so every
    rational is eventually strictly on one side.
    """

    def __init__(self, directive: Directive, letter: str, letters: str = "ab", max_depth: int = 100_000):
        if letter not in letters:
            raise InvalidArgument(f"{letter!r} not in {letters!r}")
        self.directive = directive
        self.which = letters.index(letter)
        self.max_depth = max_depth

    def brackets(self):
        """Yield ``(c_{n-1}, c_n)`` for ``n = 0, 1, 2, ...``."""
        prev, cur = (0, 1), (1, 0)  # letter counts of s_{-1} = b and s_0 = a
        ratio = lambda v: Fraction(v[self.which], v[0] + v[1])
        yield ratio(prev), ratio(cur)
        for d in self.directive:
            prev, cur = cur, (d * cur[0] + prev[0], d * cur[1] + prev[1])
            yield ratio(prev), ratio(cur)

    def __call__(self, r):
        r = Fraction(r)
        for lo, hi in itertools.islice(self.brackets(), self.max_depth):
            lo, hi = min(lo, hi), max(lo, hi)
            if r < lo:
                return -1
            if r > hi:
                return 1
        raise PrecisionError(f"could not separate {r} from the frequency within {self.max_depth} steps")

    def interval(self, depth: int) -> tuple[Fraction, Fraction]:
        lo, hi = next(itertools.islice(self.brackets(), depth, None))
        return min(lo, hi), max(lo, hi)


class MorphicFrequency(FrequencyComparator):
    """Letter frequency of the fixed point of a primitive morphism.

    The frequency vector is the normalised Perron eigenvector of the
    incidence matrix; comparisons are exact algebraic-number comparisons.
    """

    def __init__(self, m: Morphism, letter: str):
        import sympy

        letters = sorted(m.images)
        if letter not in letters:
            raise InvalidArgument(f"{letter!r} is not a letter of the morphism")
        mat = sympy.Matrix(
            [[count_occurrences(m.images[b], a) if m.images[b] else 0 for b in letters] for a in letters]
        )
        if any(x == 0 for x in (mat ** len(letters))):
            raise InvalidArgument("morphism is not primitive; letter frequencies may not exist")
        lam = sympy.Symbol("lam")
        roots = sympy.Poly(mat.charpoly(lam).as_expr(), lam).real_roots()
        pf = max(roots, key=lambda r: r.evalf(50))
        vec = (mat - pf * sympy.eye(len(letters))).nullspace(simplify=True)[0]
        total = sum(vec)
        self.value = sympy.nsimplify(sympy.simplify(vec[letters.index(letter)] / total))
        self._sympy = sympy

    def __call__(self, r):
        sympy = self._sympy
        diff = sympy.simplify(sympy.Rational(Fraction(r).numerator, Fraction(r).denominator) - self.value)
        if diff == 0:
            return 0
        for prec in (30, 60, 120, 240):
            val = diff.evalf(prec)
            if val.is_comparable and abs(val) > sympy.Float(10) ** (-(prec - 10)):
                return 1 if val > 0 else -1
        raise PrecisionError(f"could not decide the sign of {r} - {self.value}")


def exact_frequency_comparator(d: Directive, a: str, letters: str = "ab") -> SturmianFrequency:
    return SturmianFrequency(d, a, letters)


def frequency_comparator_for(x: InfiniteWord, a: str) -> FrequencyComparator | None:
    """Exact comparator for the frequency of ``a`` when the construction allows one.

    Finite edits (suffix, prepend, splice) do not change frequencies and are
    looked through.
    """
    while isinstance(x, (Suffix, Splice)):
        x = x.base
    if isinstance(x, StandardSturmian):
        return SturmianFrequency(x.directive, a, x.letters)
    if isinstance(x, EventuallyPeriodic):
        return RationalFrequency(Fraction(count_occurrences(x.u, a), len(x.u)))
    if isinstance(x, FixedPoint):
        try:
            return MorphicFrequency(x.morphism, a)
        except InvalidArgument:
            return None
    return None


# --------------------------------------------------------------------------
# shortest non-(uniformly) recurrent prefixes


@dataclass(frozen=True)
class PrefixEvidence:
    prefix: str
    occurrences: tuple[int, ...]
    witness: tuple[int, int] | None
    reason: str


def shortest_nonrecurrent_prefix(x: InfiniteWord, N: int, max_len: int = 64) -> PrefixEvidence | None:
    """Shortest prefix with no occurrence in the second half of the window.

    ``None`` means no candidate was found, which does not prove recurrence.
    """
    text = x.prefix(N)
    for n in range(1, min(max_len, N // 2) + 1):
        occ = occurrences(text, text[:n])
        if occ[-1] < N // 2:
            return PrefixEvidence(
                text[:n], tuple(occ), (occ[-1], N), f"{len(occ)} occurrences, none after position {N // 2}"
            )
    return None


def shortest_non_uniformly_recurrent_prefix(
    x: InfiniteWord, N: int, gap_bound: int, max_len: int = 64, detect_growth: bool = True
) -> PrefixEvidence | None:
    """Shortest prefix whose gaps exceed ``gap_bound`` or keep growing in the window."""
    text = x.prefix(N)
    for n in range(1, min(max_len, N // 2) + 1):
        ev = recurrence_evidence(text, text[:n], gap_bound, detect_growth)
        if not ev.uniform:
            return PrefixEvidence(text[:n], tuple(occurrences(text, text[:n])), ev.witness, ev.reason)
    return None


def is_uniformly_recurrent_prefix(x: InfiniteWord, u: str, N: int, gap_bound: int) -> bool:
    return recurrence_evidence(x.prefix(N), u, gap_bound).uniform


def letter_ratio(w: str, a: str) -> Fraction:
    if not w:
        raise InvalidArgument("letter ratio of the empty word is undefined")
    return Fraction(count_occurrences(w, a), len(w))


__all__ = [name for name in dir() if not name.startswith("_") and name not in {"annotations", "Callable"}]

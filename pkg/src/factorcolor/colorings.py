"""Factor colorings and the combinators that build new ones from old.

A scheme colors the non-empty factors of a fixed window ``x[0:N]``. Most
of the colorings here only look at whether a factor is a prefix of ``x``
and, if so, at its length; those derive from :class:`PrefixScheme`, which
the verifier can search much faster than a general scheme.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

import numpy as np

from factorcolor import analysis
from factorcolor.core import Morphism, border_array, count_occurrences, occurrences, z_array
from factorcolor.errors import (
    InvalidArgument,
    NotAFactor,
    NotApplicable,
    ProbeError,
    SpecParseError,
    WindowTooSmall,
)
from factorcolor.generators import InfiniteWord, MorphicImage, WindowWord, prepend

Color = Hashable

BOTTOM = "⊥"
STAR = "*"
DIAMOND = "◇"
ERASED = "e"


@dataclass(frozen=True)
class Palette:
    """Ordered finite set of colors with display names."""

    colors: tuple
    names: tuple = ()

    def __post_init__(self):
        colors = tuple(self.colors)
        if not colors:
            raise InvalidArgument("a palette needs at least one color")
        if len(set(colors)) != len(colors):
            raise InvalidArgument(f"repeated colors in {colors}")
        names = tuple(self.names) or tuple(_display(c) for c in colors)
        if len(names) != len(colors):
            raise InvalidArgument("one display name per color")
        object.__setattr__(self, "colors", colors)
        object.__setattr__(self, "names", names)

    def __len__(self):
        return len(self.colors)

    def __iter__(self):
        return iter(self.colors)

    def __contains__(self, c):
        return c in self.colors

    def name(self, c: Color) -> str:
        return self.names[self.colors.index(c)]

    def union(self, other: Sequence) -> Palette:
        extra = [c for c in other if c not in self.colors]
        return Palette(self.colors + tuple(extra))


def _display(c) -> str:
    if isinstance(c, tuple):
        return "(" + ",".join(_display(v) for v in c) + ")"
    return str(c)


class ColoringScheme:
    """Base class: a total map from non-empty window factors to a palette.

    Subclasses implement :meth:`classify`, which trusts its argument to be a
    factor; :meth:`color` checks that first.
    """

    prefix_structured = False

    def __init__(self, word: InfiniteWord, window: int, palette: Palette, label: str):
        if window < 2:
            raise InvalidArgument(f"window must be at least 2, got {window}")
        self.word = word
        self.window = window
        self.text = word.prefix(window)
        self.palette = palette
        self.label = label
        self._z = None
        self._index = None

    def __repr__(self):
        return f"<{type(self).__name__} {self.label} on {self.word.spec!r}[:{self.window}]>"

    @property
    def n_max(self) -> int:
        return self.window // 2

    @property
    def z(self) -> list[int]:
        if self._z is None:
            self._z = z_array(self.text)
        return self._z

    @property
    def index(self) -> analysis.FactorIndex:
        if self._index is None:
            self._index = analysis.FactorIndex(self.word, self.window)
        return self._index

    def is_prefix(self, u: str) -> bool:
        if len(u) > self.window:
            raise ProbeError(f"prefix test on a factor of length {len(u)} beyond the window {self.window}")
        return self.text.startswith(u)

    def classify(self, u: str) -> Color:
        raise NotImplementedError

    def color(self, u: str) -> Color:
        if not u:
            raise InvalidArgument("colorings are defined on non-empty factors only")
        if self.text.find(u) == -1:
            raise NotAFactor(f"{u!r} is not a factor of the window")
        return self.classify(u)

    __call__ = color

    def block_color(self, i: int, j: int) -> Color:
        """Color of ``x[i:j]``; blocks are always factors of the window."""
        return self.classify(self.text[i:j])


class FunctionScheme(ColoringScheme):
    """Scheme given by an arbitrary function of the factor string."""

    def __init__(self, word, window, palette, fn: Callable[[str], Color], label="function"):
        super().__init__(word, window, palette, label)
        self.fn = fn

    def classify(self, u):
        return self.fn(u)


def constant(x: InfiniteWord, window: int, color: Color = 0) -> FunctionScheme:
    return FunctionScheme(x, window, Palette((color,)), lambda u: color, "constant")


class PrefixScheme(ColoringScheme):
    """Scheme of the form: prefixes colored by length, all other factors one color."""

    prefix_structured = True

    def __init__(self, word, window, palette, label, nonprefix_color):
        super().__init__(word, window, palette, label)
        self.nonprefix_color = nonprefix_color
        self._table: list = [None]

    def prefix_color(self, m: int) -> Color:
        """Color of the prefix of length ``m >= 1``."""
        raise NotImplementedError

    def _compute_table(self, L: int) -> list:
        return [None] + [self.prefix_color(m) for m in range(1, L + 1)]

    def prefix_table(self, L: int) -> list:
        """``[None, c(x[:1]), ..., c(x[:L])]``, cached."""
        if L >= len(self._table):
            self._table = self._compute_table(L)
        return self._table

    def cached_prefix_color(self, m: int) -> Color:
        return self._table[m] if m < len(self._table) else self.prefix_color(m)

    def classify(self, u):
        if self.is_prefix(u):
            return self.cached_prefix_color(len(u))
        return self.nonprefix_color

    def block_color(self, i, j):
        if self.z[i] >= j - i:
            return self.cached_prefix_color(j - i)
        return self.nonprefix_color


class _Prefix2(PrefixScheme):
    def __init__(self, x, window, colors):
        super().__init__(x, window, Palette(colors), "prefix2", colors[1])
        self.on_prefix = colors[0]

    def prefix_color(self, m):
        return self.on_prefix

    def _compute_table(self, L):
        return [None] + [self.on_prefix] * L


def prefix2(x: InfiniteWord, window: int, colors: tuple = (1, 0)) -> PrefixScheme:
    """Prefixes get ``colors[0]``, other factors ``colors[1]``."""
    if len(colors) != 2 or colors[0] == colors[1]:
        raise InvalidArgument("prefix2 needs two distinct colors")
    return _Prefix2(x, window, tuple(colors))


class _Threshold(PrefixScheme):
    def __init__(self, x, window, t):
        super().__init__(x, window, Palette(tuple(range(t + 2))), f"threshold:t={t}", 0)
        self.t = t

    def prefix_color(self, m):
        return m if m <= self.t else self.t + 1


def threshold(x: InfiniteWord, window: int, t: int) -> PrefixScheme:
    """Prefixes of length ``m <= t`` get ``m``, longer prefixes ``t + 1``, the rest ``0``."""
    if t < 0:
        raise InvalidArgument(f"threshold needs t >= 0, got {t}")
    return _Threshold(x, window, t)


class _LastLetter(PrefixScheme):
    def __init__(self, x, window):
        text = x.prefix(window)
        letters = tuple(sorted(set(text)))
        super().__init__(x, window, Palette(letters + (BOTTOM,)), "lastletter", BOTTOM)

    def prefix_color(self, m):
        return self.text[m - 1]


def last_letter(x: InfiniteWord, window: int) -> PrefixScheme:
    """Prefixes get their last letter, other factors get ``⊥``."""
    return _LastLetter(x, window)


class _Rich3(PrefixScheme):
    def __init__(self, x, window):
        text = x.prefix(window)
        letters = tuple(sorted(set(text)))
        super().__init__(x, window, Palette(letters + (0,)), "rich3", 0)
        analysis.check_sturmian_window(self.index)
        self.letters = letters

    def prefix_color(self, m):
        if m > self.n_max:
            raise ProbeError(f"richness of a prefix of length {m} needs more than the window")
        return analysis.richness(self.index, self.text[:m])

    def _compute_table(self, L):
        if L > self.n_max:
            raise ProbeError(f"richness of prefixes up to {L} needs more than the window")
        a, b = self.letters
        idx = self.index
        p = idx.prefix_counts(a)
        table = [None]
        for m in range(1, L + 1):
            counts = p[m:] - p[: self.window + 1 - m]
            own = int(p[m])
            lo, hi = int(counts.min()), int(counts.max())
            rich = [z for z, ok in ((a, own > lo), (b, own < hi)) if ok]
            if len(rich) != 1:
                raise analysis.NotSturmianWindow(f"prefix of length {m} is rich in {rich or 'no letter'}")
            table.append(rich[0])
        return table


def rich3(x: InfiniteWord, window: int) -> PrefixScheme:
    """Prefixes colored by their richness letter, other factors ``0``."""
    return _Rich3(x, window)


def extendable_prefixes(text: str, tail: str, limit: int) -> np.ndarray:
    """``ok[m]`` is true iff ``text[:m] + tail`` occurs in ``text`` (``m <= limit``).

    ``x[:m] tail`` occurs iff ``x[:m]`` is a suffix of ``text[:q]`` for some
    occurrence ``q`` of ``tail``; those lengths form border chains, which
    are marked once each.
    """
    f = border_array(text)
    seen = np.zeros(len(text) + 1, dtype=bool)
    for q in occurrences(text, tail) if tail else range(len(text) + 1):
        m = q
        while m and not seen[m]:
            seen[m] = True
            m = f[m]
    seen[0] = tail in text
    return seen[: limit + 1]


class _DerivedLift(PrefixScheme):
    def __init__(self, x, window, u, inner):
        text = x.prefix(window)
        if not u or not text.startswith(u):
            raise InvalidArgument(f"{u!r} is not a non-empty prefix of the word")
        self.table = analysis.return_words(x, u, window)
        self.derived = analysis.DerivedWord(
            WindowWord("".join(analysis.DERIVED_ALPHABET[k] for k in self.table.code), f"D[{u}]({x.spec})"),
            self.table,
        )
        if inner.text != self.derived.text[: inner.window]:
            raise InvalidArgument("inner scheme must color the derived word of the same window")
        reserved = [-1, 0] + list(range(1, len(u)))
        if any(c in reserved for c in inner.palette):
            # keep the lifted palette disjoint: inner colors become "D<name>"
            self._relabel = {c: "D" + inner.palette.name(c) for c in inner.palette}
        else:
            self._relabel = {c: c for c in inner.palette}
        lifted = tuple(self._relabel[c] for c in inner.palette)
        names = tuple(map(str, reserved)) + tuple(_display(c) for c in lifted)
        palette = Palette(tuple(reserved) + lifted, names)
        super().__init__(x, window, palette, f"lift:u={u};inner={inner.label}", -1)
        self.u = u
        self.inner = inner
        self._occ = list(self.table.occurrences)
        self._code = self.derived.text
        self._letter = {v: analysis.DERIVED_ALPHABET[k] for k, v in enumerate(self.table.words)}

    def desubstitute(self, z: str) -> str:
        """``sigma^{-1}(z)`` for a word ``z`` starting with ``u`` such that ``zu`` is a factor."""
        zu = z + self.u
        occ = occurrences(zu, self.u)
        out = []
        for p, q in zip(occ, occ[1:]):
            v = zu[p:q]
            if v not in self._letter:
                raise ProbeError(f"return word {v!r} does not occur in the window")
            out.append(self._letter[v])
        return "".join(out)

    def _inner_color(self, w: str) -> Color:
        return self._relabel[self.inner.classify(w)]

    def prefix_color(self, m):
        u = self.u
        if m < len(u):
            return m
        if m + len(u) > self.n_max:
            raise ProbeError(f"membership probe of length {m + len(u)} beyond n_max = {self.n_max}")
        z = self.text[:m]
        if self.text.find(z + u) == -1:
            return 0
        return self._inner_color(self.desubstitute(z))

    def _compute_table(self, L):
        u, text = self.u, self.text
        if L + len(u) > self.n_max:
            raise ProbeError(f"membership probes up to {L + len(u)} beyond n_max = {self.n_max}")
        ok = extendable_prefixes(text, u, L)
        occ, code = self._occ, self._code
        inner = self.inner
        fast_inner = isinstance(inner, PrefixScheme)
        table = [None] + list(range(1, min(len(u), L + 1)))
        k = 0  # occurrences of u fully inside x[:m] are occ[0..k]
        for m in range(len(u), L + 1):
            while k + 1 < len(occ) and occ[k + 1] + len(u) <= m:
                k += 1
            if not ok[m]:
                table.append(0)
                continue
            # sigma^{-1}(x[:m]) = code[:k] followed by the coding of x[occ[k]:m] u
            tail = self.desubstitute(text[occ[k]:m])
            if fast_inner:
                n = k + len(tail)
                if n > inner.window:
                    raise ProbeError(f"derived factor of length {n} beyond the inner window")
                if code.startswith(tail, k):
                    table.append(self._relabel[inner.cached_prefix_color(n)])
                else:
                    table.append(self._relabel[inner.nonprefix_color])
            else:
                table.append(self._inner_color(code[:k] + tail))
        return table


def derived_lift(x: InfiniteWord, window: int, u: str, inner: ColoringScheme) -> PrefixScheme:
    """Lift a coloring of the derived word ``D_u(x)`` to a coloring of ``x``.

    Short prefixes (``|z| < |u|``) get ``|z|``; prefixes with ``zu`` a factor
    get the inner color of ``sigma^{-1}(z)``; other prefixes get ``0`` and
    non-prefixes ``-1``. Inner colors that collide with these reserved
    colors are renamed ``D<name>``.
    """
    return _DerivedLift(x, window, u, inner)


def derived_inner_word(x: InfiniteWord, window: int, u: str) -> WindowWord:
    """Window of ``D_u(x)`` on which inner schemes for :func:`derived_lift` are built."""
    return analysis.derived_word(x, u, window).word


class _Pullback(ColoringScheme):
    def __init__(self, x, window, h, inner):
        palette = inner.palette.union([ERASED]) if ERASED not in inner.palette else None
        if palette is None:
            raise InvalidArgument(f"inner palette already uses the color {ERASED!r}")
        super().__init__(x, window, palette, f"pullback:h={h.rules()};inner={inner.label}")
        self.h = h
        self.inner = inner

    def classify(self, u):
        image = self.h(u)
        if not image:
            return ERASED
        if len(image) > self.inner.window:
            raise ProbeError(f"image of length {len(image)} escapes the inner window {self.inner.window}")
        return self.inner.classify(image)


def pullback(x: InfiniteWord, window: int, h: Morphism, inner: ColoringScheme) -> ColoringScheme:
    """``c(U) = inner(h(U))`` when ``h(U)`` is non-empty, ``e`` otherwise.

    ``inner`` colors the word ``h(x)``; see :func:`pullback_target`.
    """
    image = h(x.prefix(window))
    if not inner.text.startswith(image[: inner.window]) or not image.startswith(inner.text[: len(image)]):
        raise InvalidArgument("inner scheme does not color h(x)")
    return _Pullback(x, window, h, inner)


def pullback_target(x: InfiniteWord, h: Morphism) -> MorphicImage:
    return MorphicImage(h, x)


class _PrependTransfer(PrefixScheme):
    def __init__(self, a, x, inner, window):
        ax = prepend(a, x)
        clash = [c for c in (STAR, DIAMOND) if c in inner.palette]
        if clash:
            raise InvalidArgument(f"inner palette already uses {clash}")
        super().__init__(ax, window, inner.palette.union([STAR, DIAMOND]), f"prepend:{a};inner={inner.label}", DIAMOND)
        self.a = a
        self.inner = inner

    def prefix_color(self, m):
        u = self.text[:m]
        if m + 1 > self.n_max:
            raise ProbeError(f"membership probe of length {m + 1} beyond n_max = {self.n_max}")
        if self.text.find(u + self.a) == -1:
            return STAR
        return self.inner.classify(u[1:] + self.a)

    def _compute_table(self, L):
        if L + 1 > self.n_max:
            raise ProbeError(f"membership probes up to {L + 1} beyond n_max = {self.n_max}")
        ok = extendable_prefixes(self.text, self.a, L)
        inner = self.inner
        table = [None]
        for m in range(1, L + 1):
            if not ok[m]:
                table.append(STAR)
            elif isinstance(inner, PrefixScheme):
                # a^{-1} u a = x[:m-1] a is a prefix of x iff x[m-1] == a
                if m > inner.window:
                    raise ProbeError(f"inner classification of length {m} beyond its window")
                table.append(inner.cached_prefix_color(m) if inner.text[m - 1] == self.a else inner.nonprefix_color)
            else:
                table.append(inner.classify(self.text[1:m] + self.a))
        return table


def prepend_transfer(a: str, x: InfiniteWord, inner: ColoringScheme, window: int | None = None) -> PrefixScheme:
    """Coloring of ``ax`` from a coloring ``inner`` of ``x``."""
    if inner.word is not x:
        raise InvalidArgument("inner scheme must color x")
    return _PrependTransfer(a, x, inner, window or inner.window)


class _StripTransfer(PrefixScheme):
    def __init__(self, x, window, inner):
        pairs = []
        for a in sorted(inner):
            for c in inner[a].palette:
                pairs.append((a, c))
        palette = Palette(tuple(pairs) + (STAR,))
        super().__init__(x, window, palette, "strip", STAR)
        self.inner = dict(inner)

    def prefix_color(self, m):
        a = self.text[m - 1]
        scheme = self.inner.get(a)
        if scheme is None:
            raise InvalidArgument(f"no scheme for the letter {a!r}")
        return (a, scheme.classify(a + self.text[: m - 1]))


def strip_transfer(x: InfiniteWord, window: int, inner: Mapping[str, ColoringScheme]) -> PrefixScheme:
    """Coloring of ``x`` from colorings of ``ax``, one for each letter ``a``.

    A prefix ``u`` ending in ``a`` gets ``(a, c_a(a u a^{-1}))``; other factors ``*``.
    """
    for a, scheme in inner.items():
        if not scheme.text.startswith(a + x.prefix(min(window, scheme.window - 1))[: scheme.window - 1]):
            raise InvalidArgument(f"scheme for {a!r} does not color {a}x")
    return _StripTransfer(x, window, inner)


class _Freq4(PrefixScheme):
    def __init__(self, x, window, a, M, comparator):
        super().__init__(x, window, Palette((0, 1, 2, 3)), f"freq4:a={a};M={M}", 0)
        self.a, self.M, self.comparator = a, M, comparator
        self._counts = None

    def prefix_color(self, m):
        if m >= self.M:
            return 3
        ratio = Fraction(count_occurrences(self.text[:m], self.a), m) if self.a in self.text[:m] else Fraction(0)
        return 1 if self.comparator(ratio) > 0 else 2


def freq4(
    x: InfiniteWord,
    window: int,
    a: str,
    M: int,
    comparator: analysis.FrequencyComparator | None = None,
) -> PrefixScheme:
    """Four colors from a block bound ``M`` and the lower frequency of ``a``.

    Non-prefixes get 0; prefixes shorter than ``M`` get 1 or 2 according to
    whether their ``a``-ratio lies above the lower frequency; longer ones 3.
    Without an explicit comparator one is derived from the word's
    construction, falling back to an interval estimate that refuses
    rationals it cannot separate.
    """
    if M < 1:
        raise InvalidArgument(f"M must be positive, got {M}")
    if comparator is None:
        comparator = analysis.frequency_comparator_for(x, a)
    if comparator is None:
        est = analysis.frequency(x, a, window)
        slack = Fraction(2 * M, window)
        comparator = analysis.IntervalFrequency(est.liminf - slack, est.liminf + slack)
    return _Freq4(x, window, a, M, comparator)


def nonuniform_pipeline(x: InfiniteWord, window: int, gap_bound: int, max_steps: int = 8) -> PrefixScheme:
    """Coloring of a word that looks non-uniformly recurrent in the window.

    Iterates the S-operator until it reaches ``Z`` at step ``n``. For
    ``n = 1`` the prefix coloring of ``x`` is returned. Otherwise
    ``S^{n-1}(x) = D_u(x)`` for the prefix ``u`` obtained by the chain
    ``u_1 = x_1``, ``u_{k+1} = sigma_k(1) u_k``, and the result lifts the
    prefix coloring of ``D_u(x)`` (colors ``W``/``B``) through ``u``.
    """
    outcomes = analysis.s_iterate(x, window, gap_bound, max_steps)
    if not outcomes or not outcomes[-1].is_z:
        raise NotApplicable(f"S-iteration did not reach Z within {max_steps} steps; the word may be uniformly recurrent")
    n = len(outcomes)
    if n == 1:
        return prefix2(x, window)
    text = x.prefix(window)
    u = text[0]
    for _ in range(n - 2):
        occ = occurrences(text, u)
        if len(occ) < 2:
            raise WindowTooSmall(f"{u!r} occurs only once in the window")
        u = text[: occ[1] + len(u)]
    d = analysis.derived_word(x, u, window).word
    inner = prefix2(d, len(d), colors=("W", "B"))
    return derived_lift(x, window, u, inner)


# --------------------------------------------------------------------------
# coloring-spec grammar

_NAMES = ("prefix2", "threshold", "lastletter", "rich3", "lift", "pullback", "freq4", "pipeline")


def _split_params(body: str, spec: str, offset: int) -> dict[str, str]:
    """Split ``k=v;k=v``; the value of ``inner`` runs to the end (it may contain ``;``)."""
    out = {}
    pos = 0
    while pos < len(body):
        m = re.match(r"(\w+)=", body[pos:])
        if not m:
            raise SpecParseError("expected key=value", spec, offset + pos)
        key = m.group(1)
        start = pos + m.end()
        if key == "inner":
            out[key] = (body[start:], offset + start)
            break
        if key == "h":
            # rules contain ';' themselves: stop at ';inner='
            end = body.find(";inner=", start)
            end = len(body) if end == -1 else end
        else:
            end = body.find(";", start)
            end = len(body) if end == -1 else end
        if key in out:
            raise SpecParseError(f"repeated key {key!r}", spec, offset + pos)
        out[key] = (body[start:end], offset + start)
        pos = end + 1
    return out


def _int_param(params, key, spec, offset):
    if key not in params:
        raise SpecParseError(f"missing parameter {key!r}", spec, offset)
    value, pos = params[key]
    try:
        return int(value)
    except ValueError:
        raise SpecParseError(f"{key} must be an integer, got {value!r}", spec, pos) from None


def parse_coloring_spec(spec: str, x: InfiniteWord, window: int, _offset: int = 0, _full: str | None = None) -> ColoringScheme:
    """Build a scheme on ``x[0:window]`` from a coloring spec string."""
    full = _full if _full is not None else spec
    name, _, body = spec.partition(":")
    name = name.strip()
    if name not in _NAMES:
        raise SpecParseError(f"unknown coloring {name!r}", full, _offset)
    params = _split_params(body, full, _offset + len(name) + 1) if body else {}
    if name == "prefix2":
        return prefix2(x, window)
    if name == "threshold":
        return threshold(x, window, _int_param(params, "t", full, _offset))
    if name == "lastletter":
        return last_letter(x, window)
    if name == "rich3":
        return rich3(x, window)
    if name == "lift":
        if "u" not in params or "inner" not in params:
            raise SpecParseError("lift needs u= and inner=", full, _offset)
        u = params["u"][0]
        d = derived_inner_word(x, window, u)
        inner_spec, pos = params["inner"]
        inner = parse_coloring_spec(inner_spec, d, len(d), pos, full)
        return derived_lift(x, window, u, inner)
    if name == "pullback":
        if "h" not in params or "inner" not in params:
            raise SpecParseError("pullback needs h= and inner=", full, _offset)
        rules, pos = params["h"]
        try:
            h = Morphism.parse(rules)
        except InvalidArgument as exc:
            raise SpecParseError(str(exc), full, pos) from None
        t = pullback_target(x, h)
        t_window = len(h(x.prefix(window)))
        inner_spec, pos = params["inner"]
        inner = parse_coloring_spec(inner_spec, t, t_window, pos, full)
        return pullback(x, window, h, inner)
    if name == "freq4":
        if "a" not in params:
            raise SpecParseError("freq4 needs a=", full, _offset)
        return freq4(x, window, params["a"][0], _int_param(params, "M", full, _offset))
    return nonuniform_pipeline(x, window, _int_param(params, "gap", full, _offset))

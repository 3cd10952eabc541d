"""Infinite words as lazy, memoized symbol streams.

Every word is an :class:`InfiniteWord`: symbols are produced on demand into a
buffer that only grows, so repeated or out-of-order reads agree. Positions
are 0-based. Each handle carries a ``spec`` string; handles built by the
constructors here have specs that :func:`parse_word_spec` turns back into an
equivalent handle.
"""

from __future__ import annotations

import itertools
import re
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from factorcolor.core import (
    FIBONACCI,
    PERIOD_DOUBLING,
    TERNARY_THUE,
    THUE_MORSE,
    Morphism,
    complement,
    reversal,
)
from factorcolor.errors import (
    DesubstitutionError,
    InvalidArgument,
    InvalidRule,
    SpecParseError,
    WindowTooSmall,
)

_MIN_CHUNK = 64


class InfiniteWord:
    """Base class: subclasses implement :meth:`_produce`."""

    def __init__(self, spec: str):
        self.spec = spec
        self._buf = ""
        self._lock = threading.Lock()

    def _produce(self, n: int) -> str:
        """Return a prefix of length at least ``n`` (finite words may stop short)."""
        raise NotImplementedError

    def _ensure(self, n: int) -> None:
        if n <= len(self._buf):
            return
        with self._lock:
            if n > len(self._buf):
                target = max(n, 2 * len(self._buf), _MIN_CHUNK)
                try:
                    out = self._produce(target)
                except WindowTooSmall:
                    # finite underlying data: retry without over-allocating
                    out = self._produce(n)
                if len(out) > len(self._buf):
                    self._buf = out
        if n > len(self._buf):
            raise WindowTooSmall(f"{self.spec}: only {len(self._buf)} symbols available, {n} requested")

    def prefix(self, n: int) -> str:
        if n < 0:
            raise InvalidArgument("negative prefix length")
        self._ensure(n)
        return self._buf[:n]

    def __getitem__(self, key):
        if isinstance(key, slice):
            if key.stop is None or key.stop < 0 or (key.start or 0) < 0:
                raise InvalidArgument("infinite words support only bounded, non-negative slices")
            return self.prefix(key.stop)[key]
        if key < 0:
            raise InvalidArgument("negative index into an infinite word")
        self._ensure(key + 1)
        return self._buf[key]

    def __iter__(self) -> Iterator[str]:
        for i in itertools.count():
            yield self[i]

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec!r}>"

    @property
    def is_finite(self) -> bool:
        return False


class WindowWord(InfiniteWord):
    """A handle backed by a fixed finite window; reads past its end fail."""

    def __init__(self, text: str, spec: str):
        super().__init__(spec)
        self._text = text

    def _produce(self, n):
        return self._text

    def __len__(self):
        return len(self._text)

    @property
    def is_finite(self) -> bool:
        return True


class StreamWord(InfiniteWord):
    """Wraps a factory of letter iterators, e.g. for test fixtures."""

    def __init__(self, factory: Callable[[], Iterable[str]], spec: str):
        super().__init__(spec)
        self._iter = iter(factory())
        self._chars: list[str] = []

    def _produce(self, n):
        need = n - len(self._chars)
        if need > 0:
            self._chars.extend(itertools.islice(self._iter, need))
        return "".join(self._chars)


class FixedPoint(InfiniteWord):
    def __init__(self, m: Morphism, a: str):
        image = m.images.get(a)
        if image is None:
            raise InvalidRule(f"seed {a!r} is not a source letter")
        if not image.startswith(a) or len(image) < 2:
            raise InvalidRule(f"m({a}) = {image!r} must start with {a!r} and have length >= 2")
        seen, todo = {a}, [a]
        while todo:
            for c in m.images.get(todo.pop(), ""):
                if c not in m.images:
                    raise InvalidRule(f"letter {c!r} has no image")
                if c not in seen:
                    seen.add(c)
                    todo.append(c)
        erasing = sorted(c for c in seen if not m.images[c])
        if erasing:
            raise InvalidRule(f"letters {erasing} reachable from {a!r} are erased")
        super().__init__(f"fix:{m.rules()}@{a}")
        self.morphism = m
        self.seed = a
        self._chars = list(image)
        self._ptr = 1

    def _produce(self, n):
        images, chars = self.morphism.images, self._chars
        ptr = self._ptr
        while len(chars) < n:
            chars.extend(images[chars[ptr]])
            ptr += 1
        self._ptr = ptr
        return "".join(chars)


def fixed_point(m: Morphism, a: str) -> FixedPoint:
    return FixedPoint(m, a)


@dataclass(frozen=True)
class Directive:
    """Eventually periodic sequence ``pre + per + per + ...`` (``per`` non-empty)."""

    pre: tuple
    per: tuple

    def __post_init__(self):
        object.__setattr__(self, "pre", tuple(self.pre))
        object.__setattr__(self, "per", tuple(self.per))
        if not self.per:
            raise InvalidRule("directive needs a non-empty periodic part")

    def __getitem__(self, k: int):
        if k < len(self.pre):
            return self.pre[k]
        return self.per[(k - len(self.pre)) % len(self.per)]

    def __iter__(self):
        yield from self.pre
        yield from itertools.cycle(self.per)


class StandardSturmian(InfiniteWord):
    """Characteristic word of ``s_n = s_{n-1}^{d_n} s_{n-2}``, ``s_{-1}=b``, ``s_0=a``.

    ``d_1 = 0`` is allowed and swaps the roles of the letters.
    """

    def __init__(self, directive: Directive, letters: str = "ab"):
        for k, d in enumerate(itertools.islice(directive, len(directive.pre) + len(directive.per))):
            if not isinstance(d, int) or d < (0 if k == 0 else 1):
                raise InvalidRule(f"directive entry {k + 1} = {d!r} out of range")
        if len(letters) != 2 or letters[0] == letters[1]:
            raise InvalidRule("standard Sturmian words need two distinct letters")
        pre = ",".join(map(str, directive.pre))
        per = ",".join(map(str, directive.per))
        spec = f"sturmian:pre=[{pre}];per=[{per}]"
        if letters != "ab":
            spec += f";letters={letters}"
        super().__init__(spec)
        self.directive = directive
        self.letters = letters

    def standard_words(self) -> Iterator[str]:
        """Yield ``s_1, s_2, ...``."""
        prev, cur = self.letters[1], self.letters[0]
        for d in self.directive:
            prev, cur = cur, cur * d + prev
            yield cur

    def _produce(self, n):
        for s in self.standard_words():
            if len(s) >= n:
                return s


def standard_sturmian(d: Directive, letters: str = "ab") -> StandardSturmian:
    return StandardSturmian(d, letters)


class EpisturmianStandard(InfiniteWord):
    """Iterated palindromic closure, generated with Justin's formula.

    If ``x = d_n`` has not been seen, ``u_{n+1} = u_n x u_n``; otherwise
    ``u_{n+1} = u_n u_k^{-1} u_n`` where ``k`` is the last step that used ``x``.
    """

    def __init__(self, directive: Directive, alphabet: str | None = None):
        letters = set(directive.pre) | set(directive.per)
        if any(not isinstance(c, str) or len(c) != 1 for c in letters):
            raise InvalidRule("episturmian directives are sequences of letters")
        if alphabet is not None and letters - set(alphabet):
            raise InvalidArgument(f"directive letters {sorted(letters - set(alphabet))} not in {alphabet!r}")
        super().__init__(f"epi:pre={''.join(directive.pre)};per={''.join(directive.per)}")
        self.directive = directive

    def palindromic_prefixes(self) -> Iterator[str]:
        """Yield ``u_1, u_2, ...``; ``u_{n+1}`` is the closure of ``u_n d_n``."""
        u = ""
        last: dict[str, str] = {}
        for x in self.directive:
            if x in last:
                nxt = u + u[len(last[x]):]
            else:
                nxt = u + x + u
            last[x] = u
            u = nxt
            yield u

    def _produce(self, n):
        for u in self.palindromic_prefixes():
            if len(u) >= n:
                return u


def episturmian_standard(d: Directive, alphabet: str | None = None) -> EpisturmianStandard:
    return EpisturmianStandard(d, alphabet)


class Paperfolding(InfiniteWord):
    """Limit of ``w_1 = 0``, ``w_{n+1} = w_n 0 reversal(complement(w_n))``."""

    def __init__(self):
        super().__init__("pf")

    @staticmethod
    def blocks() -> Iterator[str]:
        w = "0"
        while True:
            yield w
            w = w + "0" + reversal(complement(w))

    def _produce(self, n):
        for w in self.blocks():
            if len(w) >= n:
                return w


def paperfolding() -> Paperfolding:
    return Paperfolding()


class LucaWord(InfiniteWord):
    """``L = W_1 W_2 ...`` with ``W_1 = ab`` and ``W_k = W_1 ... W_{k-1} a``."""

    def __init__(self):
        super().__init__("luca")

    @staticmethod
    def blocks() -> Iterator[str]:
        """Yield ``W_1, W_2, ...``."""
        w = "ab"
        prod = w
        while True:
            yield w
            w = prod + "a"
            prod += w

    def _produce(self, n):
        prod = ""
        for w in self.blocks():
            prod += w
            if len(prod) >= n:
                return prod


def luca_word() -> LucaWord:
    return LucaWord()


class EventuallyPeriodic(InfiniteWord):
    def __init__(self, v: str, u: str):
        if not u:
            raise InvalidRule("the periodic part of v u^omega must be non-empty")
        super().__init__(f"ultper:v={v};u={u}")
        self.v, self.u = v, u

    def _produce(self, n):
        reps = max(0, -(-(n - len(self.v)) // len(self.u)))
        return self.v + self.u * reps


def eventually_periodic(v: str, u: str) -> EventuallyPeriodic:
    return EventuallyPeriodic(v, u)


class Suffix(InfiniteWord):
    def __init__(self, x: InfiniteWord, k: int):
        if k < 0:
            raise InvalidArgument("suffix offset must be non-negative")
        super().__init__(f"{x.spec}|suffix:{k}")
        self.base, self.k = x, k

    def _produce(self, n):
        return self.base.prefix(self.k + n)[self.k:]


class Splice(InfiniteWord):
    """The word ``v x``."""

    def __init__(self, v: str, x: InfiniteWord, spec: str | None = None):
        super().__init__(spec or f"{x.spec}|splice:{v}")
        self.base, self.v = x, v

    def _produce(self, n):
        return self.v + self.base.prefix(max(0, n - len(self.v)))


def suffix(x: InfiniteWord, k: int) -> Suffix:
    return Suffix(x, k)


def prepend(a: str, x: InfiniteWord) -> Splice:
    if len(a) != 1:
        raise InvalidArgument("prepend takes a single letter")
    return Splice(a, x, f"{x.spec}|prepend:{a}")


def splice(v: str, x: InfiniteWord) -> Splice:
    return Splice(v, x)


class Desubstituted(InfiniteWord):
    """Lazy preimage of ``x`` under ``L`` (code ``{a, ab}``) or ``R`` (code ``{a, ba}``).

    The L-code is parsed greedily with one symbol of lookahead, the R-code is
    a prefix code and needs none.
    """

    def __init__(self, x: InfiniteWord, which: str, letters: str = "ab"):
        if which not in ("L", "R"):
            raise InvalidArgument(f"unknown code {which!r}, expected 'L' or 'R'")
        super().__init__(f"{x.spec}|desub:{which}")
        self.base, self.which = x, which
        self.a, self.b = letters
        self._out: list[str] = []
        self._pos = 0

    def _produce(self, n):
        x, a, b = self.base, self.a, self.b
        out, pos = self._out, self._pos
        while len(out) < n:
            c = x[pos]
            if self.which == "L":
                if c != a:
                    raise DesubstitutionError(f"{c!r} cannot start an L-image", pos)
                if x[pos + 1] == b:
                    out.append(b)
                    pos += 2
                else:
                    out.append(a)
                    pos += 1
            else:
                if c == a:
                    out.append(a)
                    pos += 1
                elif c == b and x[pos + 1] == a:
                    out.append(b)
                    pos += 2
                else:
                    raise DesubstitutionError(f"{x[pos:pos + 2]!r} cannot start an R-image", pos)
            self._pos = pos
        return "".join(out)


def desubstitute(x: InfiniteWord, which: str) -> Desubstituted:
    return Desubstituted(x, which)


class MorphicImage(InfiniteWord):
    """The word ``h(x)``; ``h`` may erase letters.

    For erasing morphisms the image of a long prefix can stay short, so
    reads give up once ``max_ratio * n`` letters of ``x`` produced fewer than
    ``n`` letters.
    """

    def __init__(self, h: Morphism, x: InfiniteWord, max_ratio: int = 64):
        super().__init__(f"{x.spec}|image:{h.rules()}")
        self.morphism, self.base, self.max_ratio = h, x, max_ratio
        self._consumed = 0
        self._parts: list[str] = []
        self._length = 0

    def _produce(self, n):
        limit = max(64, self.max_ratio * n)
        images = self.morphism.images
        while self._length < n and self._consumed < limit:
            want = self._consumed + 256
            if self.base.is_finite:
                want = min(want, len(self.base))
                if want == self._consumed:
                    break
            chunk = self.base.prefix(want)[self._consumed:]
            for c in chunk:
                if c not in images:
                    raise InvalidArgument(f"letter {c!r} outside the source alphabet {self.morphism.source!r}")
                self._parts.append(images[c])
                self._length += len(images[c])
            self._consumed += len(chunk)
        if self._length < n:
            raise WindowTooSmall(f"image has only {self._length} letters after reading {self._consumed}")
        text = "".join(self._parts)
        self._parts = [text]
        return text


def image(h: Morphism, x: InfiniteWord) -> MorphicImage:
    return MorphicImage(h, x)


# --------------------------------------------------------------------------
# word-spec grammar

ALIASES = {
    "fib": f"fix:{FIBONACCI.rules()}@a",
    "tm": f"fix:{THUE_MORSE.rules()}@a",
    "pd": f"fix:{PERIOD_DOUBLING.rules()}@0",
    "thue3": f"fix:{TERNARY_THUE.rules()}@a",
    "trib": "epi:pre=;per=abc",
}

_KV = re.compile(r"(\w+)=([^;]*)")


def _parse_kv(body: str, spec: str, offset: int, allowed: set[str]) -> dict[str, str]:
    out = {}
    pos = 0
    for part in body.split(";"):
        m = _KV.fullmatch(part)
        if m is None or m.group(1) not in allowed:
            raise SpecParseError(f"bad field {part!r}", spec, offset + pos)
        out[m.group(1)] = m.group(2)
        pos += len(part) + 1
    return out


def _parse_int_list(text: str, spec: str, offset: int) -> tuple[int, ...]:
    inner = text.strip()
    if inner.startswith("[") and inner.endswith("]"):
        inner = inner[1:-1]
    if not inner.strip():
        return ()
    try:
        return tuple(int(t) for t in inner.split(","))
    except ValueError:
        raise SpecParseError(f"expected integers, got {text!r}", spec, offset) from None


def _parse_base(base: str, spec: str) -> InfiniteWord:
    base = ALIASES.get(base, base)
    if base == "pf":
        return Paperfolding()
    if base == "luca":
        return LucaWord()
    head, sep, body = base.partition(":")
    off = len(head) + 1
    try:
        if head == "fix" and sep:
            rules, at, seed = body.rpartition("@")
            if not at or len(seed) != 1:
                raise SpecParseError("expected '<rules>@<seed letter>'", spec, off + len(rules))
            return FixedPoint(Morphism.parse(rules), seed)
        if head == "sturmian" and sep:
            kv = _parse_kv(body, spec, off, {"pre", "per", "letters"})
            d = Directive(_parse_int_list(kv.get("pre", ""), spec, off), _parse_int_list(kv.get("per", ""), spec, off))
            return StandardSturmian(d, kv.get("letters", "ab"))
        if head == "epi" and sep:
            kv = _parse_kv(body, spec, off, {"pre", "per"})
            return EpisturmianStandard(Directive(tuple(kv.get("pre", "")), tuple(kv.get("per", ""))))
        if head == "ultper" and sep:
            kv = _parse_kv(body, spec, off, {"v", "u"})
            return EventuallyPeriodic(kv.get("v", ""), kv.get("u", ""))
    except (InvalidRule, InvalidArgument) as exc:
        raise SpecParseError(str(exc), spec, off) from None
    raise SpecParseError(f"unknown word {head!r}", spec, 0)


def parse_word_spec(spec: str) -> InfiniteWord:
    """Build a word from a spec such as ``"fix:a->ab;b->a@a|splice:baabaa"``."""
    parts = spec.strip().split("|")
    word = _parse_base(parts[0], spec)
    pos = len(parts[0])
    for mod in parts[1:]:
        pos += 1
        name, _, arg = mod.partition(":")
        try:
            if name == "suffix":
                word = Suffix(word, int(arg))
            elif name == "prepend":
                word = prepend(arg, word)
            elif name == "splice":
                word = splice(arg, word)
            elif name == "desub":
                word = Desubstituted(word, arg)
            elif name == "image":
                word = MorphicImage(Morphism.parse(arg), word)
            else:
                raise SpecParseError(f"unknown modifier {name!r}", spec, pos)
        except (ValueError, InvalidArgument, InvalidRule) as exc:
            if isinstance(exc, SpecParseError):
                raise
            raise SpecParseError(str(exc), spec, pos) from None
        pos += len(mod)
    return word

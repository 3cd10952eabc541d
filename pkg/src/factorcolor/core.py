"""Finite-word primitives.

Words are plain ``str`` objects and letters are single characters. The
empty word is ``""``. All functions here are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Sequence

from factorcolor.errors import InvalidArgument

# Marker placed between concatenated sequences in border computations; it can
# never equal a letter because letters are strings.
_SEP = object()


def border_array(seq: Sequence) -> list[int]:
    """Failure function: ``f[q]`` is the longest border length of ``seq[:q]``.

    ``f`` has ``len(seq) + 1`` entries and ``f[0] == 0``.
    """
    n = len(seq)
    f = [0] * (n + 1)
    k = 0
    for q in range(1, n):
        while k and seq[q] != seq[k]:
            k = f[k]
        if seq[q] == seq[k]:
            k += 1
        f[q + 1] = k
    return f


def z_array(text: str) -> list[int]:
    """``z[i]`` = length of the longest common prefix of ``text`` and ``text[i:]``."""
    n = len(text)
    z = [0] * n
    if n == 0:
        return z
    z[0] = n
    left = right = 0
    for i in range(1, n):
        if i < right:
            k = min(right - i, z[i - left])
        else:
            k = 0
        while i + k < n and text[k] == text[i + k]:
            k += 1
        z[i] = k
        if i + k > right:
            left, right = i, i + k
    return z


def longest_border(u: str) -> str:
    if not u:
        raise InvalidArgument("longest_border of the empty word")
    return u[: border_array(u)[len(u)]]


def is_unbordered(u: str) -> bool:
    return longest_border(u) == ""


def is_lyndon(u: str, order: Sequence[str] | None = None) -> bool:
    """Strictly smaller than each of its ``|u| - 1`` nontrivial conjugates.

    ``order`` lists the letters from smallest to largest; by default letters
    compare by code point.
    """
    if not u:
        raise InvalidArgument("is_lyndon of the empty word")
    if order is None:
        key = list(u)
    else:
        rank = {c: i for i, c in enumerate(order)}
        missing = set(u) - rank.keys()
        if missing:
            raise InvalidArgument(f"letters {sorted(missing)} missing from order")
        key = [rank[c] for c in u]
    return all(key < key[i:] + key[:i] for i in range(1, len(key)))


def count_occurrences(u: str, v: str) -> int:
    """Number of (possibly overlapping) occurrences of ``v`` in ``u``."""
    if not v:
        raise InvalidArgument("cannot count occurrences of the empty word")
    count = 0
    i = u.find(v)
    while i != -1:
        count += 1
        i = u.find(v, i + 1)
    return count


def occurrences(text: str, v: str) -> list[int]:
    """Sorted 0-based start positions of ``v`` in ``text`` (overlapping)."""
    if not v:
        raise InvalidArgument("cannot locate the empty word")
    out = []
    i = text.find(v)
    while i != -1:
        out.append(i)
        i = text.find(v, i + 1)
    return out


def reversal(u: str) -> str:
    return u[::-1]


def complement(u: str, alphabet: str = "01") -> str:
    """Letterwise exchange of the two letters of a binary alphabet."""
    if len(alphabet) != 2 or alphabet[0] == alphabet[1]:
        raise InvalidArgument(f"complement needs a binary alphabet, got {alphabet!r}")
    if set(u) - set(alphabet):
        raise InvalidArgument(f"{u!r} is not over the alphabet {alphabet!r}")
    return u.translate(str.maketrans(alphabet, alphabet[::-1]))


def is_palindrome(u: str) -> bool:
    return u == u[::-1]


def longest_palindromic_suffix(u: str) -> int:
    if not u:
        return 0
    seq = list(reversed(u)) + [_SEP] + list(u)
    return border_array(seq)[len(seq)]


def palindromic_closure(u: str) -> str:
    """Shortest palindrome having ``u`` as a prefix."""
    k = longest_palindromic_suffix(u)
    return u + u[: len(u) - k][::-1]


@dataclass(frozen=True)
class Morphism:
    """A map from letters to words, extended to a monoid morphism.

    ``images`` must give exactly one image per source letter; empty images
    make the morphism erasing.
    """

    images: Mapping[str, str]
    target: str | None = None

    def __post_init__(self):
        for letter, image in self.images.items():
            if not isinstance(letter, str) or len(letter) != 1:
                raise InvalidArgument(f"source letters must be single characters, got {letter!r}")
            if not isinstance(image, str):
                raise InvalidArgument(f"image of {letter!r} must be a word")
        object.__setattr__(self, "images", MappingProxyType(dict(self.images)))
        if self.target is None:
            letters = "".join(sorted(set("".join(self.images.values()))))
            object.__setattr__(self, "target", letters)

    def __hash__(self):
        return hash(tuple(sorted(self.images.items())))

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return dict(self.images) == dict(other.images)

    @classmethod
    def parse(cls, rules: str) -> Morphism:
        """Parse ``"a->ab;b->a"``; an empty right-hand side is allowed."""
        images = {}
        for part in rules.split(";"):
            part = part.strip()
            if not part:
                continue
            if "->" not in part:
                raise InvalidArgument(f"bad rule {part!r}, expected 'x->word'")
            left, right = part.split("->", 1)
            left = left.strip()
            if len(left) != 1:
                raise InvalidArgument(f"bad rule {part!r}: source must be one letter")
            if left in images:
                raise InvalidArgument(f"letter {left!r} has two images")
            images[left] = right.strip()
        if not images:
            raise InvalidArgument("empty morphism")
        return cls(images)

    @property
    def source(self) -> str:
        return "".join(self.images)

    @property
    def non_erasing(self) -> bool:
        return all(self.images.values())

    def rules(self) -> str:
        return ";".join(f"{a}->{w}" for a, w in self.images.items())

    def __call__(self, u: str) -> str:
        return apply(self, u)


def apply(m: Morphism, u: str) -> str:
    images = m.images
    try:
        return "".join([images[c] for c in u])
    except KeyError as exc:
        raise InvalidArgument(f"letter {exc.args[0]!r} outside the source alphabet {m.source!r}") from None


# Morphisms that appear throughout the package.
THUE_MORSE = Morphism({"a": "ab", "b": "ba"})
FIBONACCI = Morphism({"a": "ab", "b": "a"})
PERIOD_DOUBLING = Morphism({"0": "01", "1": "00"})
TERNARY_THUE = Morphism({"a": "abc", "b": "ac", "c": "b"})
L_MORPHISM = Morphism({"a": "a", "b": "ab"})
R_MORPHISM = Morphism({"a": "a", "b": "ba"})

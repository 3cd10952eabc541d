import pytest
from hypothesis import given, strategies as st

from factorcolor.core import (
    FIBONACCI,
    R_MORPHISM,
    THUE_MORSE,
    Morphism,
    apply,
    border_array,
    complement,
    count_occurrences,
    is_lyndon,
    is_palindrome,
    is_unbordered,
    longest_border,
    occurrences,
    palindromic_closure,
    reversal,
    z_array,
)
from factorcolor.errors import InvalidArgument

import oracles

binary = st.text(alphabet="ab", max_size=40)
binary1 = st.text(alphabet="ab", min_size=1, max_size=40)


@pytest.mark.parametrize("u, expected", [("ababa", "aba"), ("ababb", ""), ("aa", "a"), ("a", "")])
def test_longest_border(u, expected):
    assert longest_border(u) == expected


def test_longest_border_rejects_empty():
    with pytest.raises(InvalidArgument):
        longest_border("")


@pytest.mark.parametrize("u, expected", [("ababb", True), ("aa", False), ("ba", False), ("a", True), ("aab", True)])
def test_is_lyndon(u, expected):
    assert is_lyndon(u, "ab") is expected


def test_lyndon_respects_order():
    assert is_lyndon("ba", order="ba")
    assert not is_lyndon("ab", order="ba")


@pytest.mark.parametrize("u, v, expected", [("aaa", "aa", 2), ("ababaa", "a", 4), ("ab", "ba", 0)])
def test_count_occurrences(u, v, expected):
    assert count_occurrences(u, v) == expected


def test_count_occurrences_rejects_empty():
    with pytest.raises(InvalidArgument):
        count_occurrences("ab", "")


def test_apply_examples():
    assert apply(THUE_MORSE, "ab") == "abba"
    assert apply(R_MORPHISM, "ba") == "baa"
    assert apply(Morphism({"a": "", "b": "b"}), "aba") == "b"


def test_apply_unknown_letter():
    with pytest.raises(InvalidArgument):
        apply(FIBONACCI, "abc")


def test_morphism_parse_and_flags():
    m = Morphism.parse("a->ab; b->")
    assert m.images == {"a": "ab", "b": ""}
    assert not m.non_erasing
    assert Morphism.parse(m.rules()) == m
    for bad in ("a-ab", "ab->a", "a->b;a->c", ""):
        with pytest.raises(InvalidArgument):
            Morphism.parse(bad)


@pytest.mark.parametrize("u, expected", [("ab", "aba"), ("aba", "aba"), ("abab", "ababa"), ("", "")])
def test_palindromic_closure(u, expected):
    assert palindromic_closure(u) == expected


def test_reversal_and_complement():
    assert reversal("abb") == "bba"
    assert reversal("") == ""
    assert complement("001") == "110"
    with pytest.raises(InvalidArgument):
        complement("abc", "abc")
    with pytest.raises(InvalidArgument):
        complement("012")


@given(binary1)
def test_border_matches_brute_force(u):
    b = longest_border(u)
    assert b == oracles.longest_border(u)
    assert len(b) < len(u) and u.startswith(b) and u.endswith(b)


@given(binary1)
def test_lyndon_words_are_unbordered(u):
    assert is_lyndon(u, "ab") == oracles.is_lyndon(u, "ab")
    if is_lyndon(u, "ab"):
        assert is_unbordered(u)


@given(binary, binary)
def test_apply_is_a_morphism(u, v):
    for m in (THUE_MORSE, FIBONACCI, Morphism({"a": "", "b": "ba"})):
        assert apply(m, u + v) == apply(m, u) + apply(m, v)


@given(st.text(alphabet="ab", max_size=12))
def test_palindromic_closure_is_shortest(u):
    assert palindromic_closure(u) == oracles.palindromic_closure(u, "ab")


@given(binary)
def test_involutions(u):
    assert reversal(reversal(u)) == u
    assert complement(complement(u, "ab"), "ab") == u


@given(binary, binary1)
def test_occurrences_match_scan(u, v):
    occ = occurrences(u, v)
    assert occ == [i for i in range(len(u)) if u.startswith(v, i)]
    assert count_occurrences(u, v) == oracles.count_overlapping(u, v) == len(occ)


@given(binary1)
def test_border_array_and_z_array(u):
    f = border_array(u)
    assert all(f[q] == len(oracles.longest_border(u[:q])) for q in range(1, len(u) + 1))
    z = z_array(u)
    for i in range(len(u)):
        k = 0
        while i + k < len(u) and u[k] == u[i + k]:
            k += 1
        assert z[i] == k


@given(st.text(alphabet="abc", max_size=20))
def test_palindrome_predicate(u):
    assert is_palindrome(u) == (u == u[::-1])
    assert is_palindrome(palindromic_closure(u))

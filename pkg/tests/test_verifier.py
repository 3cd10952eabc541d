import pytest
from hypothesis import given, settings, strategies as st

from factorcolor.colorings import FunctionScheme, Palette, last_letter, prefix2, rich3, threshold
from factorcolor.errors import InvalidArgument
from factorcolor.generators import WindowWord, parse_word_spec
from factorcolor.verifier import (
    GROWING,
    SATURATED,
    FactorizationWitness,
    block_bound_check,
    equally_rich_search,
    mono_reachable,
    mono_verdict,
    prefixal_search,
    ramsey_witness,
)

import oracles


def _dfs(scheme, color, N, L):
    return oracles.reachable(scheme.text[:N], scheme.classify, color, L)


@pytest.mark.parametrize("spec", ["fib", "tm", "pf", "luca", "thue3", "ultper:v=;u=ab"])
@pytest.mark.parametrize("L", [3, 7, 60])
def test_prefix_fast_path_matches_dfs(spec, L):
    x = parse_word_spec(spec)
    for scheme in (prefix2(x, 60), threshold(x, 60, 2), last_letter(x, 60)):
        for c in scheme.palette:
            res = mono_reachable(scheme, c, 60, L)
            assert set(res.positions) == _dfs(scheme, c, 60, L)


@settings(max_examples=40, deadline=None)
@given(st.text(alphabet="ab", min_size=4, max_size=40), st.integers(1, 12))
def test_generic_dp_matches_dfs(text, L):
    w = WindowWord(text, "w")
    scheme = FunctionScheme(w, len(text), Palette((0, 1, 2)), lambda u: (u.count("a") * 3 + len(u)) % 3)
    for c in scheme.palette:
        res = mono_reachable(scheme, c, len(text), L)
        assert set(res.positions) == oracles.reachable(text, scheme.classify, c, L)


@settings(max_examples=40, deadline=None)
@given(st.text(alphabet="ab", min_size=4, max_size=40), st.integers(1, 12))
def test_prefix_dp_on_random_windows(text, L):
    scheme = prefix2(WindowWord(text, "w"), len(text))
    for c in scheme.palette:
        res = mono_reachable(scheme, c, len(text), L)
        assert set(res.positions) == oracles.reachable(text, scheme.classify, c, L)


@pytest.mark.parametrize("spec", ["fib", "tm", "luca"])
def test_witnesses_verify(spec):
    x = parse_word_spec(spec)
    scheme = threshold(x, 2000, 3)
    for c in scheme.palette:
        res = mono_reachable(scheme, c)
        w = res.witness()
        assert w.covered == res.frontier
        assert w.verify(scheme)
        assert all(len(b) <= res.max_block for b in w.blocks)


def test_witness_of_unreachable_position(fib):
    res = mono_reachable(prefix2(fib, 100), 0, max_block=1)
    assert res.positions == [0]
    with pytest.raises(InvalidArgument):
        res.witness(5)


def test_witness_verify_rejects_tampering(fib):
    scheme = prefix2(fib, 100)
    good = mono_reachable(scheme, 1).witness()
    assert good.verify(scheme)
    bad = FactorizationWitness(good.blocks, (0,) * len(good.blocks), good.covered)
    assert not bad.verify(scheme)


def test_verdict_thresholds():
    periodic = parse_word_spec("ultper:v=;u=ab")
    v = mono_verdict(prefix2(periodic, 1000))
    assert v[1].verdict == GROWING and v[1].frontier == 1000
    assert v.verdict == "GROWING"
    assert v.growing == [1]


def test_curve_is_monotone(fib):
    res = mono_reachable(rich3(fib, 5000), "a")
    ys = [y for _, y in res.curve()]
    assert ys == sorted(ys)
    assert res.curve()[-1] == (5000, res.frontier)


def test_bad_arguments(fib):
    s = prefix2(fib, 100)
    with pytest.raises(InvalidArgument):
        mono_reachable(s, 1, N=101)
    with pytest.raises(InvalidArgument):
        mono_reachable(s, 1, max_block=0)
    with pytest.raises(InvalidArgument):
        ramsey_witness(s, 1)


def test_prefixal_search_pf_and_fib(fib):
    pf = prefixal_search(parse_word_spec("pf"), 20_000)
    assert pf.saturated and pf.witness is None and len(pf.unbordered) >= 10 and pf.consistent
    fr = prefixal_search(fib, 20_000)
    assert not fr.saturated and fr.witness is not None and fr.consistent
    text = fib.prefix(20_000)
    assert all(text.startswith(b) for b in fr.witness.blocks)


@pytest.mark.parametrize("spec, n", [("fib", 40), ("tm", 40), ("ultper:v=b;u=a", 30)])
def test_prefixal_matches_exhaustive_search(spec, n):
    x = parse_word_spec(spec)
    res = prefixal_search(x, n, max_block=n).result
    text = x.prefix(n)
    for j in range(n + 1):
        assert res.is_reachable(j) == oracles.prefixal_factorizations_exist(text, j)


def test_equally_rich_on_fibonacci(fib):
    out = equally_rich_search(fib, 20_000)
    assert set(out) == {"a", "b"}
    assert all(r.verdict == SATURATED for r in out.values())


@pytest.mark.parametrize("spec", ["fib", "tm", "ultper:v=a;u=b"])
@pytest.mark.parametrize("k", [3, 5])
def test_ramsey_witness_is_monochromatic(spec, k):
    x = parse_word_spec(spec)
    scheme = threshold(x, 400, 2)
    rw = ramsey_witness(scheme, k)
    assert rw is not None and len(rw.positions) == k
    ps = rw.positions
    for i in range(k):
        for j in range(i + 1, k):
            assert scheme.block_color(ps[i], ps[j]) == rw.color


def test_ramsey_on_eventually_periodic():
    rw = ramsey_witness(prefix2(parse_word_spec("ultper:v=a;u=b"), 50), 5)
    assert rw.positions == (1, 2, 3, 4, 5) and rw.color == 0


def test_ramsey_window_too_short(fib):
    assert ramsey_witness(prefix2(fib, 4), 50) is None


def test_block_bound_check_simple():
    rep = block_bound_check(["ab", "aab", "b"], 3)
    assert set(rep) == {"a", "b"}
    assert all(r.holds for r in rep.values())
    with pytest.raises(InvalidArgument):
        block_bound_check(["abcd"], 3)
    with pytest.raises(InvalidArgument):
        block_bound_check([], 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.text(alphabet="ab", min_size=1, max_size=6), min_size=1, max_size=60))
def test_block_bound_sandwich_property(blocks):
    rep = block_bound_check(blocks, 6, letters="ab")
    assert all(r.holds for r in rep.values())

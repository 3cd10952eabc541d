import itertools

import pytest

from factorcolor.generators import StreamWord, parse_word_spec


def champernowne_binary():
    """All binary strings in length-lexicographic order, concatenated."""
    for n in itertools.count(1):
        for bits in itertools.product("01", repeat=n):
            yield from bits


@pytest.fixture
def champernowne():
    return StreamWord(champernowne_binary, "champernowne2")


@pytest.fixture
def fib():
    return parse_word_spec("fib")


@pytest.fixture
def tm():
    return parse_word_spec("tm")


@pytest.fixture
def luca():
    return parse_word_spec("luca")


@pytest.fixture
def thue3():
    # square-free word over {a, b, c}
    return parse_word_spec("thue3")


@pytest.fixture
def spliced():
    return parse_word_spec("fib|splice:baabaa")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        entry = results[n]
        if isinstance(entry, list):
            ok = all(e[1] for e in entry) and len(entry) == 5
            worst = max(e[3] for e in entry)
            detail = "; ".join(e[2] for e in entry)
            entry = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail} [slowest {worst:.2f}s / 60s per word]"
        terminalreporter.write_line(entry)

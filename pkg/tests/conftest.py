import itertools

import pytest

from wildmatch.core import WILDCARD, Alphabet, Pattern, Text, correspond

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def ab():
    return Alphabet(("a", "b"))


def P(s, alphabet=None):
    return Pattern.parse(s, alphabet or Alphabet(("a", "b")))


def T(s, alphabet=None):
    return Text.parse(s, alphabet or Alphabet(("a", "b")))


def brute_occurrences(tc, xc):
    """Independent per-alignment check on raw code sequences."""
    n, m = len(tc), len(xc)
    return [i for i in range(n - m + 1) if all(correspond(tc[i + y], xc[y]) for y in range(m))]


def brute_grams(q, sigma, include_wildcard):
    symbols = list(range(sigma)) + ([WILDCARD] if include_wildcard else [])
    return itertools.product(symbols, repeat=q)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

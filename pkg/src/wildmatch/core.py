"""Alphabet, wildcard correspondence, the naive oracle and window verification.

Symbols are stored as integer codes: ordinary letters carry their rank in
``[0, sigma)`` and the wildcard is :data:`WILDCARD`.
"""
from __future__ import annotations

import string
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

WILDCARD = -1
WILDCARD_CHAR = "?"

# Filler letters for alphabets that are only known by size.
_DEFAULT_LETTERS = string.ascii_lowercase + string.ascii_uppercase + string.digits


class WildmatchError(Exception):
    """Base class for errors raised by this package."""


class InputError(WildmatchError, ValueError):
    """Invalid pattern, text or parameter."""


class CapacityError(WildmatchError):
    """A table or enumeration would exceed its configured budget."""


class OracleMismatch(WildmatchError):
    """An engine disagreed with the naive oracle."""


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of ordinary letters; position in ``letters`` is the rank."""

    letters: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.letters) < 2:
            raise InputError(f"alphabet needs at least 2 letters, got {len(self.letters)}")
        if len(set(self.letters)) != len(self.letters):
            raise InputError("alphabet letters must be distinct")
        if WILDCARD_CHAR in self.letters:
            raise InputError(f"{WILDCARD_CHAR!r} is reserved for the wildcard")

    @classmethod
    def from_symbols(cls, symbols: Iterable[str], sigma: int | None = None) -> Alphabet:
        """Alphabet of the distinct non-wildcard symbols, in sorted order.

        When ``sigma`` is given the alphabet is padded with unused filler
        letters up to that size.
        """
        seen = sorted({c for c in symbols if c != WILDCARD_CHAR})
        if sigma is None:
            sigma = max(len(seen), 2)
        if sigma < len(seen):
            raise InputError(f"sigma={sigma} is smaller than the {len(seen)} distinct letters in the input")
        fillers = (c for c in _DEFAULT_LETTERS if c not in seen)
        letters = list(seen)
        while len(letters) < sigma:
            try:
                letters.append(next(fillers))
            except StopIteration:
                raise InputError(f"cannot pad alphabet to sigma={sigma}") from None
        return cls(tuple(letters))

    @classmethod
    def of_size(cls, sigma: int) -> Alphabet:
        if sigma < 2:
            raise InputError(f"sigma must be >= 2, got {sigma}")
        if sigma > len(_DEFAULT_LETTERS):
            raise InputError(f"of_size supports sigma <= {len(_DEFAULT_LETTERS)}")
        return cls(tuple(_DEFAULT_LETTERS[:sigma]))

    @property
    def sigma(self) -> int:
        return len(self.letters)

    @cached_property
    def _ranks(self) -> dict[str, int]:
        return {c: r for r, c in enumerate(self.letters)}

    def rank(self, letter: str) -> int:
        if letter == WILDCARD_CHAR:
            return WILDCARD
        try:
            return self._ranks[letter]
        except KeyError:
            raise InputError(f"symbol {letter!r} is not in the alphabet") from None

    def encode(self, s: str) -> tuple[int, ...]:
        return tuple(self.rank(c) for c in s)

    def decode(self, codes: Iterable[int]) -> str:
        return "".join(WILDCARD_CHAR if c == WILDCARD else self.letters[c] for c in codes)


@dataclass(frozen=True)
class SymbolString:
    """A sequence of symbol codes over an alphabet; shared base of Text and Pattern."""

    codes: tuple[int, ...]
    alphabet: Alphabet

    def __post_init__(self) -> None:
        sigma = self.alphabet.sigma
        for c in self.codes:
            if c != WILDCARD and not 0 <= c < sigma:
                raise InputError(f"symbol code {c} outside alphabet of size {sigma}")

    @classmethod
    def parse(cls, s: str, alphabet: Alphabet | None = None):
        """Build from the textual syntax: one symbol per character, ``?`` is the wildcard."""
        if alphabet is None:
            alphabet = Alphabet.from_symbols(s)
        return cls(alphabet.encode(s), alphabet)

    @classmethod
    def from_codes(cls, codes: Iterable[int], alphabet: Alphabet | int):
        if isinstance(alphabet, int):
            alphabet = Alphabet.of_size(alphabet)
        return cls(tuple(int(c) for c in codes), alphabet)

    def __len__(self) -> int:
        return len(self.codes)

    def __str__(self) -> str:
        return self.alphabet.decode(self.codes)

    @property
    def sigma(self) -> int:
        return self.alphabet.sigma

    @cached_property
    def wildcard_mask(self) -> tuple[bool, ...]:
        return tuple(c == WILDCARD for c in self.codes)

    @cached_property
    def g(self) -> int:
        return sum(self.wildcard_mask)

    @property
    def has_wildcards(self) -> bool:
        return self.g > 0

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.codes, dtype=np.int16)


class Text(SymbolString):
    @property
    def n(self) -> int:
        return len(self.codes)


class Pattern(SymbolString):
    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.codes:
            raise InputError("pattern must be non-empty")

    @property
    def m(self) -> int:
        return len(self.codes)

    @cached_property
    def solid(self) -> tuple[tuple[int, int], ...]:
        """``(offset, code)`` for every non-wildcard position."""
        return tuple((y, c) for y, c in enumerate(self.codes) if c != WILDCARD)


@dataclass(frozen=True)
class SearchReport:
    occurrences: tuple[int, ...]
    inspected_chars: int = 0
    windows: int = 0
    verifications: int = 0
    used_fallback: bool = False
    effective_q: int = 0
    engine: str = field(default="naive", compare=False)


def correspond(a: int, b: int) -> bool:
    return a == b or a == WILDCARD or b == WILDCARD


def matches_at(t: SymbolString, x: SymbolString, i: int) -> bool:
    n, m = len(t), len(x)
    if not 0 <= i <= n - m:
        raise IndexError(f"start {i} outside [0, {n - m}]")
    tc, xc = t.codes, x.codes
    return all(correspond(tc[i + y], xc[y]) for y in range(m))


def verify_range(tc: Sequence[int], x: Pattern, lo: int, hi: int) -> tuple[list[int], int]:
    """Check every start in ``[lo, hi]``; return matches and comparisons made.

    Only non-wildcard pattern offsets are compared, each start stops at its
    first mismatch.
    """
    found = []
    comparisons = 0
    solid = x.solid
    for j in range(lo, hi + 1):
        for y, c in solid:
            comparisons += 1
            s = tc[j + y]
            if s != c and s != WILDCARD:
                break
        else:
            found.append(j)
    return found, comparisons


def ver(t: Text, x: Pattern, i: int) -> list[int]:
    """Occurrences starting in the window ``[i, i+m-1]`` (clipped to ``n-m``)."""
    found, _ = verify_range(t.codes, x, i, min(i + x.m - 1, len(t) - x.m))
    return found


def naive_search(t: Text, x: Pattern) -> SearchReport:
    """Ground-truth matcher, checking all alignments column by column.

    For each non-wildcard pattern offset, every still-alive start is compared
    once; ``inspected_chars`` is the total number of such comparisons.
    """
    n, m = len(t), x.m
    if m > n:
        return SearchReport(occurrences=())
    span = n - m + 1
    alive = np.ones(span, dtype=bool)
    ta = t.array
    text_wild = ta == WILDCARD
    comparisons = 0
    for y, c in x.solid:
        comparisons += int(np.count_nonzero(alive))
        alive &= (ta[y:y + span] == c) | text_wild[y:y + span]
        if not alive.any():
            break
    occ = tuple(int(p) for p in np.flatnonzero(alive))
    return SearchReport(occurrences=occ, inspected_chars=comparisons, windows=span)

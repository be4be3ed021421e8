"""q-gram dictionaries over a pattern.

``QBasicIndex`` answers "does this gram (possibly containing wildcards)
correspond to some length-q factor of the pattern?".  ``QWeakIndex`` records,
for each wildcard-free gram, every pattern position where it corresponds,
and answers next-match-at-or-after queries used by the weak order query.

Both come in two layouts with identical answers:

``dense``
    the explicit tables, ``(sigma+1)**q`` membership bits for q-Basic and a
    ``sigma**q x m`` 0/1 matrix plus a successor table for q-Weak.
``bitmask``
    one ``m``-bit integer per query symbol, marking the pattern positions
    that symbol corresponds to.  A gram's match positions are the AND of
    the shifted symbol masks.  Memory is ``O(sigma * m)`` bits, so ``q`` is
    not limited by table size.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .core import WILDCARD, CapacityError, InputError, Pattern

DEFAULT_TABLE_BUDGET = 2**30
# "auto" picks the dense layout only below this many cells.
AUTO_DENSE_CELLS = 2**18

LAYOUTS = ("auto", "dense", "bitmask")


def rho(gram: Sequence[int], sigma: int, include_wildcard: bool = False) -> int:
    """Big-endian positional rank of ``gram``; the wildcard is digit ``sigma``."""
    base = sigma + 1 if include_wildcard else sigma
    value = 0
    for c in gram:
        if c == WILDCARD:
            if not include_wildcard:
                raise InputError("wildcard not allowed in this gram")
            d = sigma
        elif 0 <= c < sigma:
            d = c
        else:
            raise InputError(f"symbol code {c} outside alphabet of size {sigma}")
        value = value * base + d
    return value


def unrho(value: int, q: int, sigma: int, include_wildcard: bool = False) -> tuple[int, ...]:
    base = sigma + 1 if include_wildcard else sigma
    if not 0 <= value < base**q:
        raise InputError(f"rank {value} outside [0, {base}**{q})")
    digits = []
    for _ in range(q):
        value, d = divmod(value, base)
        digits.append(WILDCARD if d == sigma else d)
    return tuple(reversed(digits))


def _symbol_masks(x: Pattern) -> tuple[int, ...]:
    """Per query symbol, the bitmask of pattern positions it corresponds to.

    Index ``sigma`` holds the wildcard's mask (every position).
    """
    sigma, m = x.sigma, x.m
    masks = [0] * (sigma + 1)
    wild = 0
    for i, c in enumerate(x.codes):
        if c == WILDCARD:
            wild |= 1 << i
        else:
            masks[c] |= 1 << i
    full = (1 << m) - 1
    return tuple(mk | wild for mk in masks[:sigma]) + (full,)


def _factor_matches(masks: tuple[int, ...], starts: int, gram: Sequence[int]) -> int:
    """Bitmask of factor starts where ``gram`` corresponds."""
    acc = starts
    sigma = len(masks) - 1
    for k, c in enumerate(gram):
        acc &= masks[sigma if c == WILDCARD else c] >> k
        if not acc:
            break
    return acc


def _gram_ranks(allowed: Sequence[Sequence[int]], base: int) -> np.ndarray:
    vals = np.zeros(1, dtype=np.int64)
    for digits in allowed:
        vals = (vals[:, None] * base + np.asarray(digits, dtype=np.int64)[None, :]).ravel()
    return vals


def _resolve_layout(layout: str, cells: int, table_budget: int) -> str:
    if layout not in LAYOUTS:
        raise InputError(f"unknown layout {layout!r}")
    if layout == "auto":
        return "dense" if cells <= min(table_budget, AUTO_DENSE_CELLS) else "bitmask"
    if layout == "dense" and cells > table_budget:
        raise CapacityError(f"dense table needs {cells} cells, budget is {table_budget}")
    return layout


def _check_q(x: Pattern, q: int) -> None:
    if not 1 <= q <= x.m:
        raise InputError(f"q must be in [1, m={x.m}], got {q}")


@dataclass(frozen=True, eq=False)
class QBasicIndex:
    q: int
    sigma: int
    m: int
    layout: str
    member: np.ndarray | None
    _masks: tuple[int, ...]
    _starts: int

    def lookup(self, gram: Sequence[int]) -> bool:
        if len(gram) != self.q:
            raise InputError(f"gram length {len(gram)} != q={self.q}")
        if self.member is not None:
            return bool(self.member[rho(gram, self.sigma, include_wildcard=True)])
        return _factor_matches(self._masks, self._starts, gram) != 0


def build_q_basic(
    x: Pattern, q: int, table_budget: int = DEFAULT_TABLE_BUDGET, layout: str = "auto"
) -> QBasicIndex:
    _check_q(x, q)
    sigma, m = x.sigma, x.m
    cells = (sigma + 1) ** q
    layout = _resolve_layout(layout, cells, table_budget)
    masks = _symbol_masks(x)
    starts = (1 << (m - q + 1)) - 1
    member = None
    if layout == "dense":
        member = np.zeros(cells, dtype=bool)
        everything = list(range(sigma + 1))
        for i in range(m - q + 1):
            # a gram symbol may be the factor's letter or the wildcard (digit sigma)
            allowed = [everything if c == WILDCARD else (c, sigma) for c in x.codes[i:i + q]]
            member[_gram_ranks(allowed, sigma + 1)] = True
    return QBasicIndex(q, sigma, m, layout, member, masks, starts)


NONE = None


@dataclass(frozen=True, eq=False)
class QWeakIndex:
    q: int
    sigma: int
    m: int
    layout: str
    M: np.ndarray | None
    next_table: np.ndarray | None
    _masks: tuple[int, ...]
    _starts: int

    def next_match(self, gram: Sequence[int], p: int) -> int | None:
        """Smallest ``h >= p`` where ``gram`` corresponds to the factor at ``h``."""
        if len(gram) != self.q:
            raise InputError(f"gram length {len(gram)} != q={self.q}")
        if p >= self.m:
            return NONE
        if p < 0:
            raise InputError(f"position {p} is negative")
        if self.next_table is not None:
            h = int(self.next_table[rho(gram, self.sigma), p])
            return NONE if h < 0 else h
        acc = _factor_matches(self._masks, self._starts, gram) >> p
        if not acc:
            return NONE
        return p + (acc & -acc).bit_length() - 1

    def weak_order_query(self, grams: Sequence[Sequence[int]]) -> bool:
        """True iff the grams can be placed left to right with gaps of at least q.

        Each gram takes the leftmost admissible position, which is optimal
        for every later gram.
        """
        p = 0
        for gram in grams:
            j = self.next_match(gram, p)
            if j is None:
                return False
            p = j + self.q
        return True


def build_q_weak(
    x: Pattern, q: int, table_budget: int = DEFAULT_TABLE_BUDGET, layout: str = "auto"
) -> QWeakIndex:
    _check_q(x, q)
    sigma, m = x.sigma, x.m
    cells = sigma**q * m
    layout = _resolve_layout(layout, cells, table_budget)
    masks = _symbol_masks(x)
    starts = (1 << (m - q + 1)) - 1
    M = next_table = None
    if layout == "dense":
        rows = sigma**q
        M = np.ones((rows, m), dtype=np.uint8)
        letters = list(range(sigma))
        for i in range(m - q + 1):
            allowed = [letters if c == WILDCARD else (c,) for c in x.codes[i:i + q]]
            M[_gram_ranks(allowed, sigma), i] = 0
        next_table = np.full((rows, m + 1), -1, dtype=np.int32)
        for p in range(m - 1, -1, -1):
            next_table[:, p] = np.where(M[:, p] == 0, p, next_table[:, p + 1])
    return QWeakIndex(q, sigma, m, layout, M, next_table, masks, starts)

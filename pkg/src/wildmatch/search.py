"""Sliding-window filtering engines and the greedy-scheme block matcher.

Every engine returns the same occurrence set as :func:`core.naive_search`;
they differ only in how many text symbols they inspect.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import WILDCARD, InputError, Pattern, SearchReport, Text, naive_search, verify_range
from .inspection import InspectionScheme, greedy_scheme
from .qgram_index import (
    AUTO_DENSE_CELLS,
    DEFAULT_TABLE_BUDGET,
    LAYOUTS,
    QBasicIndex,
    QWeakIndex,
    build_q_basic,
    build_q_weak,
)


class Problem(enum.Enum):
    WT = "wt"  # wildcards in the text
    WP = "wp"  # wildcards in the pattern


def _ceil(v: float) -> int:
    # absorb float noise such as log(125, 5) == 3.0000000000000004
    return math.ceil(v - 1e-9)


def log_base(v: float, base: float) -> float:
    return math.log(v) / math.log(base)


@dataclass(frozen=True)
class SearchParams:
    problem: Problem
    q_theory: int
    q_eff: int
    ell: int = 1
    layout: str = "bitmask"
    table_budget: int = DEFAULT_TABLE_BUDGET
    allow_fallback: bool = True
    fallback_reason: str | None = None

    @property
    def fallback(self) -> bool:
        return self.fallback_reason is not None


def _dense_q_limit(problem: Problem, m: int, sigma: int, budget: int) -> int:
    q = 0
    while True:
        cells = (sigma + 1) ** (q + 1) if problem is Problem.WT else sigma ** (q + 1) * m
        if cells > budget:
            return q
        q += 1


def choose_params(
    m: int,
    g: int,
    sigma: int,
    problem: Problem,
    table_budget: int = DEFAULT_TABLE_BUDGET,
    layout: str = "auto",
    allow_fallback: bool = True,
    q: int | None = None,
) -> SearchParams:
    """Gram length, gram count and table layout for a pattern shape.

    ``q`` overrides the theoretical gram length (still clamped to ``m``).
    A returned ``SearchParams`` with ``fallback`` set tells the engines to
    run the naive matcher instead.
    """
    if m < 1 or sigma < 2:
        raise InputError(f"need m >= 1 and sigma >= 2, got m={m}, sigma={sigma}")
    if layout not in LAYOUTS:
        raise InputError(f"unknown layout {layout!r}")
    if problem is Problem.WT:
        q_theory = _ceil(3 * log_base(m, (sigma + 1) / 2))
    else:
        q_theory = _ceil(3 * log_base(m, sigma))
    q_eff = min(q_theory if q is None else q, m)
    if layout == "dense":
        q_eff = min(q_eff, _dense_q_limit(problem, m, sigma, table_budget))
    reason = None
    ell = 1
    if q_eff < 1:
        reason = f"gram length {q_eff} < 1"
    elif problem is Problem.WP:
        ell = _ceil(g / q_eff) + 1
        if not m > 2 * (g + 3 * log_base(m, sigma)):
            reason = f"wildcard ratio condition m > 2(g + 3 log_sigma m) fails for m={m}, g={g}"
        elif m - ell * q_eff < 1:
            reason = f"minimum shift m - ell*q = {m - ell * q_eff} < 1"
    if layout == "auto" and reason is None:
        cells = (sigma + 1) ** q_eff if problem is Problem.WT else sigma**q_eff * m
        layout = "dense" if cells <= min(table_budget, AUTO_DENSE_CELLS) else "bitmask"
    return SearchParams(
        problem=problem,
        q_theory=q_theory,
        q_eff=q_eff,
        ell=ell,
        layout=layout,
        table_budget=table_budget,
        allow_fallback=allow_fallback,
        fallback_reason=reason,
    )


def _check_pair(t: Text, x: Pattern) -> None:
    if t.sigma != x.sigma:
        raise InputError(f"text alphabet size {t.sigma} != pattern alphabet size {x.sigma}")


def _fallback(t: Text, x: Pattern, params: SearchParams, engine: str) -> SearchReport:
    if not params.allow_fallback:
        raise InputError(f"no filtering parameters: {params.fallback_reason}")
    r = naive_search(t, x)
    return SearchReport(
        occurrences=r.occurrences,
        inspected_chars=r.inspected_chars,
        windows=0,
        verifications=0,
        used_fallback=True,
        effective_q=0,
        engine=engine,
    )


def search_wt(
    t: Text, x: Pattern, params: SearchParams | None = None, index: QBasicIndex | None = None
) -> SearchReport:
    """Wildcards in the text: suffix-gram filter over windows of length m.

    A window whose suffix gram corresponds to no pattern factor cannot hold
    an occurrence starting in ``[i, i+m-q]``.
    """
    _check_pair(t, x)
    if x.has_wildcards:
        raise InputError("search_wt needs a pattern without wildcards")
    n, m = len(t), x.m
    if params is None:
        params = choose_params(m, 0, x.sigma, Problem.WT)
    if n < m:
        return SearchReport(occurrences=(), effective_q=params.q_eff, engine="wt")
    if params.fallback:
        return _fallback(t, x, params, "wt")
    q = params.q_eff
    if index is None:
        index = build_q_basic(x, q, params.table_budget, params.layout)
    tc = t.codes
    shift_miss = max(m - q, 1)
    occ: list[int] = []
    inspected = windows = verifications = 0
    i = 0
    while i + m <= n:
        windows += 1
        inspected += q
        if index.lookup(tc[i + m - q:i + m]):
            verifications += 1
            found, cmp = verify_range(tc, x, i, min(i + m - 1, n - m))
            occ.extend(found)
            inspected += cmp
            i += m
        else:
            i += shift_miss
    found, cmp = verify_range(tc, x, i, n - m)
    occ.extend(found)
    inspected += cmp
    return SearchReport(tuple(occ), inspected, windows, verifications, False, q, "wt")


def search_wp(
    t: Text, x: Pattern, params: SearchParams | None = None, index: QWeakIndex | None = None
) -> SearchReport:
    """Wildcards in the pattern: weak order query on ell grams ending the window.

    The ``ell*q`` symbols ``t[i+m-ell*q .. i+m-1]`` lie inside every
    occurrence starting in ``[i, i+m-ell*q]``, so a failed query rules all
    of those starts out.
    """
    _check_pair(t, x)
    if t.has_wildcards:
        raise InputError("search_wp needs a text without wildcards")
    n, m = len(t), x.m
    if params is None:
        params = choose_params(m, x.g, x.sigma, Problem.WP)
    if n < m:
        return SearchReport(occurrences=(), effective_q=params.q_eff, engine="wp")
    if params.fallback:
        return _fallback(t, x, params, "wp")
    q, ell = params.q_eff, params.ell
    span = ell * q
    if index is None:
        index = build_q_weak(x, q, params.table_budget, params.layout)
    tc = t.codes
    shift_miss = m - span
    occ: list[int] = []
    inspected = windows = verifications = 0
    i = 0
    while i + m <= n:
        windows += 1
        inspected += span
        base = i + m - span
        grams = [tc[base + k * q:base + (k + 1) * q] for k in range(ell)]
        if index.weak_order_query(grams):
            verifications += 1
            found, cmp = verify_range(tc, x, i, min(i + m - 1, n - m))
            occ.extend(found)
            inspected += cmp
            i += m
        else:
            i += shift_miss
    found, cmp = verify_range(tc, x, i, n - m)
    occ.extend(found)
    inspected += cmp
    return SearchReport(tuple(occ), inspected, windows, verifications, False, q, "wp")


def search_greedy(t: Text, x: Pattern, scheme: InspectionScheme | None = None) -> SearchReport:
    """Probe blocks of length 2m (overlapping by m) in greedy-scheme order.

    After the scheme's probes, any candidate still alive is resolved by
    probing its remaining non-wildcard positions, lowest candidate first.
    ``verifications`` counts blocks that needed this resolution phase.
    """
    _check_pair(t, x)
    if scheme is None:
        scheme = greedy_scheme(x, x.sigma)
    elif scheme.wildcard_mask != x.wildcard_mask or scheme.sigma != x.sigma:
        raise InputError("inspection scheme was built for a different pattern shape")
    n, m = len(t), x.m
    if n < m:
        return SearchReport(occurrences=(), engine="greedy")

    sigma = x.sigma
    full = (1 << m) - 1
    # rev[a] has bit m-1-y set when pattern offset y is a letter other than a;
    # candidate c meets offset z-c at block position z, so shifting rev[a] by
    # z-m+1 lines those offsets up with candidate bits.
    rev = [0] * sigma
    solid_bits = 0
    for y, c in x.solid:
        solid_bits |= 1 << y
        for a in range(sigma):
            if a != c:
                rev[a] |= 1 << (m - 1 - y)
    kill = []
    for z in range(2 * m):
        d = z - m + 1
        kill.append([((r << d) if d >= 0 else (r >> -d)) & full for r in rev])
    probes = scheme.probes

    tc = t.codes
    occ: list[int] = []
    inspected = blocks = resolved_blocks = 0
    b = 0
    while b <= n - m:
        blocks += 1
        ncand = min(m, n - m - b + 1)
        alive = (1 << ncand) - 1
        probed = 0
        for z in probes:
            if b + z >= n:
                continue
            s = tc[b + z]
            inspected += 1
            probed |= 1 << z
            if s != WILDCARD:
                alive &= ~kill[z][s]
            if not alive:
                break
        if alive:
            pending = alive
            used_extra = False
            while pending:
                c = (pending & -pending).bit_length() - 1
                need = (solid_bits << c) & ~probed
                if not need:
                    pending &= ~(1 << c)
                    continue
                z = (need & -need).bit_length() - 1
                s = tc[b + z]
                inspected += 1
                used_extra = True
                probed |= 1 << z
                if s != WILDCARD:
                    alive &= ~kill[z][s]
                    pending &= alive
            resolved_blocks += used_extra
            while alive:
                low = alive & -alive
                occ.append(b + low.bit_length() - 1)
                alive ^= low
        b += m
    return SearchReport(tuple(occ), inspected, blocks, resolved_blocks, False, 0, "greedy")

"""Block-access model of a 2m text block and probe schedules over it.

Candidates are the starts ``0..m-1`` of a block; probing block position ``z``
can only rule out candidate ``c`` when pattern offset ``z-c`` is not a
wildcard.  Under uniformly random text each such probe leaves ``c`` alive
with probability ``1/sigma``, so after probes that intersected ``c`` a
``a_c`` times the expected number of survivors is ``sum(sigma**-a_c)``.
"""
from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .core import CapacityError, InputError, Pattern

EXHAUSTIVE_MAX_M = 6
_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BlockModel:
    m: int
    sigma: int
    wildcard_mask: tuple[bool, ...]
    intersect: tuple[frozenset[int], ...]

    @property
    def block_len(self) -> int:
        return 2 * self.m

    @property
    def g(self) -> int:
        return sum(self.wildcard_mask)

    def incidence(self) -> np.ndarray:
        """``(2m, m)`` 0/1 matrix, row ``z`` marks the candidates in ``B_z``."""
        inc = np.zeros((2 * self.m, self.m), dtype=np.float64)
        for z, cands in enumerate(self.intersect):
            inc[z, list(cands)] = 1.0
        return inc


def build_block_model(x: Pattern, sigma: int | None = None) -> BlockModel:
    sigma = x.sigma if sigma is None else sigma
    m = x.m
    mask = x.wildcard_mask
    intersect = tuple(
        frozenset(c for c in range(max(0, z - m + 1), min(z, m - 1) + 1) if not mask[z - c])
        for z in range(2 * m)
    )
    return BlockModel(m, sigma, mask, intersect)


def expected_remaining(a: Sequence[int], sigma: int) -> float:
    return float(sum(sigma ** -float(k) for k in a))


@dataclass(frozen=True, eq=False)
class InspectionScheme:
    probes: tuple[int, ...]
    trajectory: tuple[float, ...]
    gains: tuple[float, ...]
    terminated_early: bool
    m: int
    sigma: int
    wildcard_mask: tuple[bool, ...]

    @property
    def k(self) -> int:
        """Probes needed to expect at most one surviving candidate."""
        return len(self.probes)


def greedy_scheme(x: Pattern, sigma: int | None = None) -> InspectionScheme:
    """Probe order that greedily minimises the expected surviving candidates.

    Each step takes the unprobed position with the largest drop
    ``sum_{c in B_z} (sigma**-a_c - sigma**-(a_c+1))``, smallest position on
    ties.  Stops once the expectation is at most one, or when no remaining
    probe can lower it (``terminated_early`` is then False).
    """
    model = build_block_model(x, sigma)
    sigma, m = model.sigma, model.m
    inc = model.incidence()
    a = np.zeros(m, dtype=np.int64)
    unused = np.ones(2 * m, dtype=bool)
    weight = np.ones(m)  # sigma**-a_c
    e = float(m)
    probes: list[int] = []
    traj = [e]
    gains: list[float] = []
    done = e <= 1 + _TOL
    while not done and unused.any():
        gain = inc @ (weight * (1 - 1 / sigma))
        gain[~unused] = -1.0
        best = float(gain.max())
        if best <= _TOL:
            break
        z = int(np.flatnonzero(gain >= best * (1 - _TOL))[0])
        unused[z] = False
        hit = inc[z] > 0
        a[hit] += 1
        weight = np.power(float(sigma), -a.astype(np.float64))
        e = float(weight.sum())
        probes.append(z)
        gains.append(float(gain[z]))
        traj.append(e)
        done = e <= 1 + _TOL
    return InspectionScheme(tuple(probes), tuple(traj), tuple(gains), done, m, sigma, model.wildcard_mask)


def greedy_prefix_expectations(model: BlockModel, probes: Sequence[int]) -> list[float]:
    """Expected survivors after each prefix of ``probes`` (length ``len+1``)."""
    a = [0] * model.m
    out = [expected_remaining(a, model.sigma)]
    for z in probes:
        for c in model.intersect[z]:
            a[c] += 1
        out.append(expected_remaining(a, model.sigma))
    return out


def exhaustive_min_expected(x: Pattern, sigma: int | None, k: int) -> float:
    """Minimum expected survivors over every set of k distinct probes."""
    model = build_block_model(x, sigma)
    m = model.m
    if m > EXHAUSTIVE_MAX_M:
        raise CapacityError(f"exhaustive search limited to m <= {EXHAUSTIVE_MAX_M}, got {m}")
    if not 0 <= k <= 2 * m:
        raise InputError(f"k must be in [0, {2 * m}], got {k}")
    if k == 0:
        return float(m)
    inc = model.incidence().astype(np.int64)
    combos = np.array(list(itertools.combinations(range(2 * m), k)), dtype=np.int64)
    counts = inc[combos].sum(axis=1)  # (subsets, m)
    values = np.power(float(model.sigma), -counts.astype(np.float64)).sum(axis=1)
    return float(values.min())


def lower_bound_k(m: int, g: int, sigma: int) -> float:
    """Probes per block below which more than one candidate is expected to survive."""
    if not 0 <= g < m:
        raise InputError(f"lower bound needs 0 <= g < m, got g={g}, m={m}")
    return m * math.log(m) / math.log(sigma) / (m - g)


def lower_bound_text(n: int, m: int, g: int, sigma: int) -> float:
    """Per-text lower bound: ``n/2m`` disjoint blocks times the block bound."""
    return n / (2 * m) * lower_bound_k(m, g, sigma)


@dataclass(frozen=True)
class DenseCover:
    rounds: tuple[tuple[int, ...], ...]
    densities: tuple[float, ...]
    partial: bool

    @property
    def total(self) -> int:
        return sum(len(r) for r in self.rounds)


def default_cover_rounds(m: int, sigma: int) -> int:
    return math.floor(3 * math.log(m) / math.log(sigma) + 1e-9) + 1


def dense_cover_schedule(model: BlockModel, rounds: int | None = None) -> DenseCover:
    """Repeated greedy set covers of the candidates by disjoint probe sets.

    Each round covers all ``m`` candidates with positions unused by earlier
    rounds, so after ``r`` full rounds every candidate has been intersected
    at least ``r`` times.  ``densities[i]`` is the mean fraction of the
    ``2m`` positions that intersect a candidate when round ``i`` starts.
    A round that cannot cover everything sets ``partial`` and ends the
    schedule.
    """
    m = model.m
    if rounds is None:
        rounds = default_cover_rounds(m, model.sigma)
    if rounds < 1:
        raise InputError(f"rounds must be >= 1, got {rounds}")
    inc = model.incidence().astype(np.int64)
    available = np.ones(2 * m, dtype=bool)
    out: list[tuple[int, ...]] = []
    densities: list[float] = []
    partial = False
    for _ in range(rounds):
        densities.append(float(inc[available].sum()) / (m * 2 * m))
        uncovered = np.ones(m, dtype=np.int64)
        chosen: list[int] = []
        while uncovered.any():
            gain = inc @ uncovered
            gain[~available] = 0
            z = int(np.argmax(gain))  # first maximum, i.e. smallest position
            if gain[z] == 0:
                partial = True
                break
            available[z] = False
            uncovered[inc[z] > 0] = 0
            chosen.append(z)
        out.append(tuple(chosen))
        if partial:
            break
    return DenseCover(tuple(out), tuple(densities), partial)


@dataclass(frozen=True)
class RecurrenceBounds:
    F: float
    D: float
    G: float


def recurrence_bounds(m: int, g: float, i: int) -> RecurrenceBounds | None:
    """Values ``F_i, D_i, G_i`` of the repeated dense-cover recurrences.

    ``G_i = sum_{j<i} log2(m)/F_j``, ``F_i = log2(2m/(m+g+G_i))`` and
    ``D_i = (m-g-G_i)/2m``.  Returns None once ``g + G_j`` reaches ``m`` for
    some ``j <= i``: the density is gone and ``F`` is no longer positive.
    """
    if m < 2 or g < 0 or i < 0:
        raise InputError(f"need m >= 2, g >= 0, i >= 0; got m={m}, g={g}, i={i}")
    lg = math.log2(m)
    G = 0.0
    for j in range(i + 1):
        if g + G >= m:
            return None
        F = math.log2(2 * m / (m + g + G))
        if j == i:
            return RecurrenceBounds(F=F, D=(m - g - G) / (2 * m), G=G)
        G += lg / F
    raise AssertionError("unreachable")

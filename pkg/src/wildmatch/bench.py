"""Instance generators, Monte Carlo checks and the oracle-gated trial harness."""
from __future__ import annotations

import csv
import enum
import io
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import TextIO

import numpy as np

from .core import WILDCARD, Alphabet, InputError, OracleMismatch, Pattern, SearchReport, Text, naive_search
from .search import search_greedy, search_wp, search_wt

RNG_NAME = f"numpy.random.PCG64 (numpy {np.__version__})"

CSV_COLUMNS = (
    "trial",
    "engine",
    "n",
    "m",
    "sigma",
    "g",
    "q_eff",
    "inspected_chars",
    "windows",
    "verifications",
    "occurrences",
    "fallback",
    "seed",
)


class Placement(enum.Enum):
    UNIFORM = "uniform"
    CLUSTERED = "clustered"


class Engine(enum.Enum):
    WT = "wt"
    WP = "wp"
    GREEDY = "greedy"
    NAIVE = "naive"


class LemmaKind(enum.Enum):
    LEMMA_TEXT = "text"
    LEMMA_PATTERN = "pattern"


def make_rng(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def _alphabet(sigma: int, alphabet: Alphabet | None) -> Alphabet:
    if alphabet is None:
        return Alphabet.of_size(sigma)
    if alphabet.sigma != sigma:
        raise InputError(f"alphabet has {alphabet.sigma} letters, sigma={sigma}")
    return alphabet


def gen_random_text(
    n: int,
    sigma: int,
    wildcard_rate: float = 0.0,
    seed: int | np.random.Generator = 0,
    alphabet: Alphabet | None = None,
) -> Text:
    """i.i.d. symbols: wildcard with probability ``wildcard_rate``, else a uniform letter."""
    if not 0.0 <= wildcard_rate <= 1.0:
        raise InputError(f"wildcard_rate must be in [0, 1], got {wildcard_rate}")
    rng = make_rng(seed)
    codes = rng.integers(0, sigma, size=n)
    if wildcard_rate > 0:
        codes[rng.random(n) < wildcard_rate] = WILDCARD
    return Text(tuple(codes.tolist()), _alphabet(sigma, alphabet))


def gen_random_pattern(
    m: int,
    sigma: int,
    g: int = 0,
    placement: Placement | str = Placement.UNIFORM,
    seed: int | np.random.Generator = 0,
    alphabet: Alphabet | None = None,
) -> Pattern:
    """Uniform letters with exactly ``g`` wildcards, scattered or in one run."""
    if not 0 <= g <= m:
        raise InputError(f"need 0 <= g <= m, got g={g}, m={m}")
    placement = Placement(placement)
    rng = make_rng(seed)
    codes = rng.integers(0, sigma, size=m)
    if placement is Placement.UNIFORM:
        codes[rng.choice(m, size=g, replace=False)] = WILDCARD
    else:
        start = int(rng.integers(0, m - g + 1))
        codes[start:start + g] = WILDCARD
    return Pattern(tuple(codes.tolist()), _alphabet(sigma, alphabet))


def _adversarial_layout(probe_order: Sequence[int], m: int, g: int) -> tuple[list[int], int]:
    """Pattern offsets forced to be wildcards, and the candidate they shield."""
    if sorted(probe_order) != list(range(2 * m)):
        raise InputError("probe_order must be a permutation of range(2m)")
    if not 0 <= g < m:
        raise InputError(f"need 0 <= g < m, got g={g}, m={m}")
    first = probe_order[:g]
    # position 2m-1 lies outside every candidate's span
    relevant = [z for z in first if z < 2 * m - 1]
    if relevant:
        lo = max(0, max(relevant) - m + 1)
        hi = min(min(relevant), m - 1)
        if lo <= hi:
            return [z - lo for z in relevant], lo
    return [z for z in first if z < m], 0


def gen_adversarial_fixed_pattern(
    probe_order: Sequence[int],
    m: int,
    g: int,
    sigma: int,
    seed: int | np.random.Generator = 0,
    alphabet: Alphabet | None = None,
) -> Pattern:
    """Pattern whose wildcards blind the first ``g`` probes of a fixed order.

    Some candidate (see :func:`shielded_candidate`) meets only wildcards
    at those probes, so a fixed algorithm needs at least ``g+1`` probes
    before it can rule that candidate out.
    """
    forced, _ = _adversarial_layout(probe_order, m, g)
    rng = make_rng(seed)
    codes = rng.integers(0, sigma, size=m)
    codes[forced] = WILDCARD
    free = np.flatnonzero(codes != WILDCARD)
    extra = g - len(forced)
    if extra > 0:
        codes[rng.choice(free, size=extra, replace=False)] = WILDCARD
    return Pattern(tuple(codes.tolist()), _alphabet(sigma, alphabet))


def shielded_candidate(probe_order: Sequence[int], m: int, g: int) -> int:
    return _adversarial_layout(probe_order, m, g)[1]


@dataclass(frozen=True)
class ProbabilityResult:
    kind: LemmaKind
    m: int
    sigma: int
    g: int
    length: int
    trials: int
    hits: int
    bound: float

    @property
    def observed(self) -> float:
        return self.hits / self.trials


def _count_factor_hits(u: np.ndarray, v: np.ndarray) -> int:
    """Rows of ``u`` that correspond to at least one length-``r`` factor of ``v``."""
    rows, r = u.shape
    starts = len(v) - r + 1
    # strided column order so a run of wildcards in v cannot stall elimination
    order = [k for s in range(8) for k in range(s, r, 8)]
    # dense phase: a few columns kill most (row, start) pairs
    dense_cols = min(r, 4)
    alive = np.ones((rows, starts), dtype=bool)
    v_wild = v == WILDCARD
    for k in order[:dense_cols]:
        col = u[:, k:k + 1]
        vk = v[k:k + starts]
        alive &= (col == vk) | (col == WILDCARD) | v_wild[k:k + starts]
    ri, ci = np.nonzero(alive)
    for k in order[dense_cols:]:
        if ri.size == 0:
            break
        a = u[ri, k]
        b = v[ci + k]
        keep = (a == b) | (a == WILDCARD) | (b == WILDCARD)
        ri, ci = ri[keep], ci[keep]
    return int(np.unique(ri).size)


def lemma_length(kind: LemmaKind, m: int, sigma: int, g: int = 0, x_factor: float = 3) -> int:
    if kind is LemmaKind.LEMMA_TEXT:
        return math.ceil(x_factor * math.log(m) / math.log((sigma + 1) / 2) - 1e-9)
    return g + math.ceil(x_factor * math.log(m) / math.log(sigma) - 1e-9)


def probability_trial(
    kind: LemmaKind | str,
    m: int,
    sigma: int,
    x_factor: float = 3,
    trials: int = 10**6,
    seed: int = 0,
    g: int | None = None,
    chunk: int = 50_000,
) -> ProbabilityResult:
    """Monte Carlo rate at which a random string corresponds to a factor of a fixed string.

    ``LEMMA_TEXT``: the random string is drawn over letters and wildcard,
    the fixed string is a random letter string of length ``m``.
    ``LEMMA_PATTERN``: the random string is over letters only; the fixed
    string carries ``g`` wildcards in one run, the worst placement
    (``g`` defaults to ``m // 4``).  The bound reported is
    ``1/m**(x_factor-1)``.
    """
    kind = LemmaKind(kind)
    if trials < 1:
        raise InputError("trials must be >= 1")
    rng = make_rng(seed)
    if kind is LemmaKind.LEMMA_TEXT:
        g = 0
        v = rng.integers(0, sigma, size=m)
        symbols = sigma + 1
    else:
        g = m // 4 if g is None else g
        if not m > g + math.log(m) / math.log(sigma):
            raise InputError(f"need m > g + log_sigma m, got m={m}, g={g}")
        v = np.asarray(gen_random_pattern(m, sigma, g, Placement.CLUSTERED, rng).codes)
        symbols = sigma
    r = lemma_length(kind, m, sigma, g, x_factor)
    if r > m:
        raise InputError(f"random string length {r} exceeds m={m}")
    v = v.astype(np.int8)
    hits = 0
    done = 0
    while done < trials:
        rows = min(chunk, trials - done)
        u = rng.integers(0, symbols, size=(rows, r)).astype(np.int8)
        if kind is LemmaKind.LEMMA_TEXT:
            u[u == sigma] = WILDCARD
        hits += _count_factor_hits(u, v)
        done += rows
    return ProbabilityResult(kind, m, sigma, g, r, trials, hits, 1.0 / m ** (x_factor - 1))


def single_symbol_match_rate(sigma: int, samples: int = 10**7, seed: int = 0) -> float:
    """Fraction of draws over letters+wildcard that correspond to a fixed letter."""
    rng = make_rng(seed)
    draws = rng.integers(0, sigma + 1, size=samples)
    # letter 0 is the fixed letter, draw value sigma is the wildcard
    return float(np.count_nonzero((draws == 0) | (draws == sigma))) / samples


@dataclass(frozen=True)
class TrialConfig:
    n: int
    m: int
    sigma: int = 2
    g: int = 0
    wildcard_rate: float = 0.0
    engine: Engine = Engine.NAIVE
    trials: int = 1
    seed: int = 0
    placement: Placement = Placement.UNIFORM
    plant: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "engine", Engine(self.engine))
        object.__setattr__(self, "placement", Placement(self.placement))
        if self.trials < 1:
            raise InputError("trials must be >= 1")
        if self.sigma < 2 or self.m < 1 or self.n < 0:
            raise InputError("need sigma >= 2, m >= 1, n >= 0")
        if not 0 <= self.g <= self.m:
            raise InputError(f"need 0 <= g <= m, got g={self.g}")
        if not 0.0 <= self.wildcard_rate <= 1.0:
            raise InputError("wildcard_rate must be in [0, 1]")
        if self.engine is Engine.WT and self.g:
            raise InputError("engine wt needs g = 0")
        if self.engine in (Engine.WP, Engine.GREEDY) and self.wildcard_rate:
            raise InputError(f"engine {self.engine.value} needs wildcard_rate = 0")

    @classmethod
    def from_mapping(cls, values: dict[str, str]) -> TrialConfig:
        kinds = {f.name: f.type for f in fields(cls)}
        unknown = set(values) - set(kinds)
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(sorted(unknown))}")
        parsed: dict[str, object] = {}
        for key, raw in values.items():
            try:
                if key == "wildcard_rate":
                    parsed[key] = float(raw)
                elif key in ("engine", "placement"):
                    parsed[key] = raw.strip().lower()
                else:
                    parsed[key] = int(raw)
            except ValueError:
                raise InputError(f"bad value for {key}: {raw!r}") from None
        try:
            return cls(**parsed)  # type: ignore[arg-type]
        except (TypeError, ValueError) as e:
            raise InputError(str(e)) from None


def load_config(path: str | Path) -> TrialConfig:
    """Read ``key=value`` lines; blank lines and ``#`` comments are ignored."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value")
        k, v = line.split("=", 1)
        values[k.strip()] = v.strip()
    return TrialConfig.from_mapping(values)


@dataclass
class TrialResult:
    config: TrialConfig
    reports: list[SearchReport] = field(default_factory=list)

    @property
    def inspected_per_char(self) -> list[float]:
        n = self.config.n
        return [r.inspected_chars / n if n else 0.0 for r in self.reports]

    @property
    def mean_inspected_per_char(self) -> float:
        return float(np.mean(self.inspected_per_char))

    @property
    def max_inspected_per_char(self) -> float:
        return float(np.max(self.inspected_per_char))

    @property
    def windows(self) -> int:
        return sum(r.windows for r in self.reports)

    @property
    def verifications(self) -> int:
        return sum(r.verifications for r in self.reports)

    @property
    def inspected_chars(self) -> int:
        return sum(r.inspected_chars for r in self.reports)

    @property
    def verification_rate(self) -> float:
        w = self.windows
        return self.verifications / w if w else 0.0

    @property
    def inspected_per_window(self) -> float:
        w = self.windows
        return self.inspected_chars / w if w else 0.0

    @property
    def occurrences(self) -> int:
        return sum(len(r.occurrences) for r in self.reports)

    @property
    def fallbacks(self) -> int:
        return sum(r.used_fallback for r in self.reports)


def make_instance(config: TrialConfig, trial: int) -> tuple[Text, Pattern]:
    rng = make_rng(config.seed + trial)
    x = gen_random_pattern(config.m, config.sigma, config.g, config.placement, rng)
    t = gen_random_text(config.n, config.sigma, config.wildcard_rate, rng)
    if config.plant and config.n >= config.m:
        codes = list(t.codes)
        for p in rng.integers(0, config.n - config.m + 1, size=config.plant).tolist():
            for y, c in x.solid:
                codes[p + y] = c
        t = Text(tuple(codes), t.alphabet)
    return t, x


def run_engine(engine: Engine, t: Text, x: Pattern) -> SearchReport:
    if engine is Engine.WT:
        return search_wt(t, x)
    if engine is Engine.WP:
        return search_wp(t, x)
    if engine is Engine.GREEDY:
        return search_greedy(t, x)
    return naive_search(t, x)


def run_trials(config: TrialConfig) -> tuple[TrialResult, list[dict[str, object]]]:
    """Run every trial, check it against the naive oracle and build CSV rows.

    Trial ``k`` draws its pattern and text from seed ``config.seed + k``.
    Raises :class:`OracleMismatch` naming the failing seed.
    """
    result = TrialResult(config)
    rows: list[dict[str, object]] = []
    for trial in range(config.trials):
        t, x = make_instance(config, trial)
        report = run_engine(config.engine, t, x)
        expected = naive_search(t, x).occurrences
        if report.occurrences != expected:
            raise OracleMismatch(
                f"engine {config.engine.value} disagrees with oracle at trial {trial} "
                f"(seed {config.seed + trial})"
            )
        result.reports.append(report)
        rows.append(_row(trial, config, report, config.seed + trial))
    rows.append(
        {
            "trial": -1,
            "engine": config.engine.value,
            "n": config.n,
            "m": config.m,
            "sigma": config.sigma,
            "g": config.g,
            "q_eff": max(r.effective_q for r in result.reports),
            "inspected_chars": result.inspected_chars,
            "windows": result.windows,
            "verifications": result.verifications,
            "occurrences": result.occurrences,
            "fallback": result.fallbacks,
            "seed": config.seed,
        }
    )
    return result, rows


def _row(trial: int, config: TrialConfig, r: SearchReport, seed: int) -> dict[str, object]:
    return {
        "trial": trial,
        "engine": config.engine.value,
        "n": config.n,
        "m": config.m,
        "sigma": config.sigma,
        "g": config.g,
        "q_eff": r.effective_q,
        "inspected_chars": r.inspected_chars,
        "windows": r.windows,
        "verifications": r.verifications,
        "occurrences": len(r.occurrences),
        "fallback": int(r.used_fallback),
        "seed": seed,
    }


def write_csv(rows: Iterable[dict[str, object]], out: TextIO) -> None:
    out.write(f"# rng: {RNG_NAME}\n")
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in sorted(rows, key=lambda r: (r["trial"] == -1, r["trial"])):
        writer.writerow(row)


def csv_text(rows: Iterable[dict[str, object]]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()

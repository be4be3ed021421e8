"""Average-case filtering algorithms for pattern matching with wildcards."""
from .core import (
    WILDCARD,
    Alphabet,
    CapacityError,
    InputError,
    OracleMismatch,
    Pattern,
    SearchReport,
    Text,
    WildmatchError,
    correspond,
    matches_at,
    naive_search,
    ver,
)
from .inspection import (
    build_block_model,
    dense_cover_schedule,
    exhaustive_min_expected,
    expected_remaining,
    greedy_scheme,
    lower_bound_k,
    recurrence_bounds,
)
from .qgram_index import build_q_basic, build_q_weak, rho, unrho
from .search import Problem, SearchParams, choose_params, search_greedy, search_wp, search_wt

__all__ = [
    "WILDCARD",
    "Alphabet",
    "CapacityError",
    "InputError",
    "OracleMismatch",
    "Pattern",
    "Problem",
    "SearchParams",
    "SearchReport",
    "Text",
    "WildmatchError",
    "build_block_model",
    "build_q_basic",
    "build_q_weak",
    "choose_params",
    "correspond",
    "dense_cover_schedule",
    "exhaustive_min_expected",
    "expected_remaining",
    "greedy_scheme",
    "lower_bound_k",
    "matches_at",
    "naive_search",
    "recurrence_bounds",
    "rho",
    "search_greedy",
    "search_wp",
    "search_wt",
    "unrho",
    "ver",
]

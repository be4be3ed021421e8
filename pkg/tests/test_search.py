import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P, T, brute_occurrences
from wildmatch.bench import gen_random_pattern, gen_random_text, make_rng
from wildmatch.core import WILDCARD, Alphabet, InputError, Pattern, Text, naive_search
from wildmatch.inspection import greedy_scheme
from wildmatch.qgram_index import build_q_basic, build_q_weak
from wildmatch.search import Problem, SearchParams, choose_params, search_greedy, search_wp, search_wt


def test_choose_params_gram_lengths():
    # ceil(3 log_{1.5} 64) = ceil(30.77), ceil(3 log_2 64) = 18
    assert choose_params(64, 0, 2, Problem.WT).q_theory == 31
    assert choose_params(64, 0, 2, Problem.WP).q_theory == 18
    # exact powers must not round up on float noise: 3 log_5 125 = 9
    assert choose_params(125, 0, 5, Problem.WP).q_theory == 9


def test_choose_params_clamps_and_overrides():
    p = choose_params(8, 0, 2, Problem.WT)
    assert p.q_eff == 8 and p.q_theory > 8
    assert choose_params(64, 0, 2, Problem.WT, q=5).q_eff == 5


def test_choose_params_ell_and_ratio_condition():
    p = choose_params(256, 20, 4, Problem.WP)
    assert p.q_eff == 12 and p.ell == math.ceil(20 / 12) + 1
    assert not p.fallback
    # 256 > 2 * (200 + 12) fails
    assert choose_params(256, 200, 4, Problem.WP).fallback


def test_choose_params_dense_cap():
    p = choose_params(64, 0, 2, Problem.WP, layout="dense", table_budget=2**10)
    assert 2**p.q_eff * 64 <= 2**10


def test_wt_example():
    r = search_wt(T("a?bab"), P("ab"))
    assert r.occurrences == (0, 1, 3)


def test_wt_miss_skips_verification():
    params = SearchParams(Problem.WT, q_theory=2, q_eff=2)
    r = search_wt(T("bbbbbbbb"), P("aa"), params)
    assert r.occurrences == () and r.verifications == 0


def test_wp_ratio_failure_falls_back():
    r = search_wp(T("ababa"), P("a?a"))
    assert r.occurrences == (0, 2)
    assert r.used_fallback


def test_fallback_can_be_disabled():
    params = choose_params(3, 1, 2, Problem.WP, allow_fallback=False)
    with pytest.raises(InputError):
        search_wp(T("ababa"), P("a?a"), params)


def test_engines_reject_wrong_side_wildcards():
    with pytest.raises(InputError):
        search_wt(T("abab"), P("a?"))
    with pytest.raises(InputError):
        search_wp(T("a?ab"), P("ab"))


def test_alphabet_mismatch_rejected():
    t = Text.parse("abab", Alphabet(("a", "b", "c")))
    with pytest.raises(InputError):
        search_wt(t, P("ab"))


def test_pattern_longer_than_text():
    for engine in (search_wt, search_wp, search_greedy):
        assert engine(T("ab"), P("abab")).occurrences == ()


def test_greedy_rejects_foreign_scheme():
    scheme = greedy_scheme(P("a?ab"))
    with pytest.raises(InputError):
        search_greedy(T("abababab"), P("abab"), scheme)


def instance(data, text_wild, pattern_wild, sigma=2):
    alpha = Alphabet.of_size(sigma)
    lo = -1 if pattern_wild else 0
    xc = data.draw(st.lists(st.integers(lo, sigma - 1), min_size=1, max_size=12))
    lo = -1 if text_wild else 0
    tc = data.draw(st.lists(st.integers(lo, sigma - 1), min_size=0, max_size=80))
    return Text(tuple(tc), alpha), Pattern(tuple(xc), alpha)


@settings(max_examples=150)
@given(st.data(), st.sampled_from([2, 3]))
def test_wt_exact_for_every_q(data, sigma):
    t, x = instance(data, True, False, sigma)
    q = data.draw(st.integers(1, x.m))
    layout = data.draw(st.sampled_from(["dense", "bitmask"]))
    params = SearchParams(Problem.WT, q_theory=q, q_eff=q, layout=layout)
    assert list(search_wt(t, x, params).occurrences) == brute_occurrences(t.codes, x.codes)


@settings(max_examples=150)
@given(st.data(), st.sampled_from([2, 3]))
def test_wp_exact_for_every_q_and_ell(data, sigma):
    t, x = instance(data, False, True, sigma)
    if x.m < 2:
        return
    q = data.draw(st.integers(1, x.m - 1))
    ell = data.draw(st.integers(1, (x.m - 1) // q))
    layout = data.draw(st.sampled_from(["dense", "bitmask"]))
    params = SearchParams(Problem.WP, q_theory=q, q_eff=q, ell=ell, layout=layout)
    assert list(search_wp(t, x, params).occurrences) == brute_occurrences(t.codes, x.codes)


@settings(max_examples=150)
@given(st.data(), st.booleans())
def test_greedy_exact_with_wildcards_anywhere(data, text_wild):
    t, x = instance(data, text_wild, True)
    assert list(search_greedy(t, x).occurrences) == brute_occurrences(t.codes, x.codes)


@settings(max_examples=60)
@given(st.data())
def test_default_params_exact(data):
    t, x = instance(data, False, True)
    assert search_wp(t, x).occurrences == naive_search(t, x).occurrences
    xs = Pattern(tuple(0 if c == WILDCARD else c for c in x.codes), x.alphabet)
    tw, _ = instance(data, True, False)
    assert search_wt(tw, xs).occurrences == naive_search(tw, xs).occurrences


@pytest.mark.parametrize("seed", range(5))
def test_wt_shift_soundness_by_planting(seed):
    # every start in [i, i+m-q] puts a full occurrence over the window's suffix gram
    rng = make_rng(seed)
    m, q = 12, 4
    x = gen_random_pattern(m, 2, 0, seed=rng)
    idx = build_q_basic(x, q)
    for s in range(0, m - q + 1):
        t = list(gen_random_text(2 * m, 2, 1 / 3, rng).codes)
        t[s:s + m] = x.codes
        assert idx.lookup(tuple(t[m - q:m]))


@pytest.mark.parametrize("seed", range(5))
def test_wp_shift_soundness_by_planting(seed):
    rng = make_rng(seed)
    m, g, q = 24, 5, 3
    ell = math.ceil(g / q) + 1
    x = gen_random_pattern(m, 2, g, seed=rng)
    idx = build_q_weak(x, q)
    for s in range(0, m - ell * q + 1):
        t = list(gen_random_text(2 * m, 2, 0, rng).codes)
        for y, c in x.solid:
            t[s + y] = c
        base = m - ell * q
        assert idx.weak_order_query([tuple(t[base + k * q:base + (k + 1) * q]) for k in range(ell)])


def test_instrumentation_consistency():
    rng = make_rng(11)
    x = gen_random_pattern(64, 2, 6, seed=rng)
    t = gen_random_text(5000, 2, 0, rng)
    r = search_wp(t, x)
    params = choose_params(64, 6, 2, Problem.WP)
    assert not r.used_fallback and r.effective_q == params.q_eff
    assert r.windows >= 1 and r.verifications <= r.windows
    assert r.inspected_chars >= r.windows * params.ell * params.q_eff
    # every window inspects ell*q symbols; rare verifications add the rest
    assert r.inspected_chars < r.windows * params.ell * params.q_eff + (r.verifications + 1) * 64 * 64


def test_reports_are_deterministic():
    rng = make_rng(5)
    x = gen_random_pattern(40, 2, 4, seed=rng)
    t = gen_random_text(3000, 2, 0, rng)
    assert search_wp(t, x) == search_wp(t, x)
    assert search_greedy(t, x) == search_greedy(t, x)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wildmatch import bench
from wildmatch.bench import (
    CSV_COLUMNS,
    Engine,
    LemmaKind,
    Placement,
    TrialConfig,
    _count_factor_hits,
    csv_text,
    gen_adversarial_fixed_pattern,
    gen_random_pattern,
    gen_random_text,
    lemma_length,
    load_config,
    make_instance,
    probability_trial,
    run_trials,
    shielded_candidate,
    single_symbol_match_rate,
)
from wildmatch.core import WILDCARD, InputError, OracleMismatch, SearchReport, correspond


def test_text_wildcard_frequency():
    t = gen_random_text(10**5, 2, 1 / 3, seed=1)
    freq = sum(c == WILDCARD for c in t.codes) / 10**5
    sd = math.sqrt((1 / 3) * (2 / 3) / 10**5)
    assert abs(freq - 1 / 3) < 3 * sd


def test_text_letters_roughly_uniform():
    codes = np.array(gen_random_text(40_000, 4, 0, seed=2).codes)
    counts = np.bincount(codes, minlength=4)
    # chi-square with 3 dof; 16.27 is the 0.001 upper quantile
    assert ((counts - 10_000) ** 2 / 10_000).sum() < 16.27


def test_generators_are_seeded():
    assert gen_random_text(100, 3, 0.2, seed=9) == gen_random_text(100, 3, 0.2, seed=9)
    assert gen_random_pattern(30, 2, 5, seed=9) != gen_random_pattern(30, 2, 5, seed=10)


@given(st.integers(1, 60), st.data(), st.sampled_from(list(Placement)))
def test_pattern_has_exactly_g_wildcards(m, data, placement):
    g = data.draw(st.integers(0, m))
    x = gen_random_pattern(m, 3, g, placement, seed=data.draw(st.integers(0, 99)))
    assert x.g == g
    if placement is Placement.CLUSTERED and g:
        idx = [i for i, w in enumerate(x.wildcard_mask) if w]
        assert idx == list(range(idx[0], idx[0] + g))


@settings(max_examples=100)
@given(st.integers(2, 20), st.data())
def test_adversarial_pattern_blinds_first_g_probes(m, data):
    g = data.draw(st.integers(0, m - 1))
    order = data.draw(st.permutations(range(2 * m)))
    x = gen_adversarial_fixed_pattern(order, m, g, 2, seed=0)
    w = shielded_candidate(order, m, g)
    assert x.g == g and 0 <= w < m
    for z in order[:g]:
        y = z - w
        assert not (0 <= y < m) or x.wildcard_mask[y]
    # so candidate w is still undecided after g probes: a fixed order needs g+1 or more
    assert any(not x.wildcard_mask[y] for y in range(m))


def test_count_factor_hits_matches_definition():
    rng = np.random.default_rng(4)
    v = rng.integers(-1, 2, size=12).astype(np.int8)
    u = rng.integers(-1, 2, size=(300, 3)).astype(np.int8)
    want = sum(
        any(all(correspond(int(a), int(b)) for a, b in zip(row, v[s:s + 3])) for s in range(10)) for row in u
    )
    assert _count_factor_hits(u, v) == want


def test_lemma_lengths():
    assert lemma_length(LemmaKind.LEMMA_TEXT, 64, 2) == 31
    assert lemma_length(LemmaKind.LEMMA_PATTERN, 64, 2, g=16) == 16 + 18


def test_probability_trial_small():
    r = probability_trial("text", 32, 2, trials=20_000, seed=3)
    assert r.bound == pytest.approx(1 / 1024) and r.length == lemma_length(LemmaKind.LEMMA_TEXT, 32, 2)
    assert 0 <= r.hits <= r.trials
    assert probability_trial("text", 32, 2, trials=20_000, seed=3) == r
    with pytest.raises(InputError):
        probability_trial("text", 16, 2, trials=10)
    r = probability_trial(LemmaKind.LEMMA_PATTERN, 32, 2, trials=5000, seed=3)
    assert r.g == 8


def test_single_symbol_rate():
    assert single_symbol_match_rate(2, samples=10**6, seed=5) == pytest.approx(2 / 3, abs=3e-3)


def test_trial_config_validation():
    with pytest.raises(InputError):
        TrialConfig(n=10, m=4, g=1, engine="wt")
    with pytest.raises(InputError):
        TrialConfig(n=10, m=4, wildcard_rate=0.1, engine="wp")
    with pytest.raises(InputError):
        TrialConfig(n=10, m=4, g=5)
    with pytest.raises(ValueError):
        TrialConfig(n=10, m=4, engine="fast")


def test_load_config(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("# demo\nn = 500\nm=16\ng=2\nengine=WP\nplacement=clustered\n\ntrials=2\n")
    c = load_config(f)
    assert (c.n, c.m, c.g, c.engine, c.placement, c.trials) == (500, 16, 2, Engine.WP, Placement.CLUSTERED, 2)
    f.write_text("n=5\nbogus=1\n")
    with pytest.raises(InputError):
        load_config(f)
    f.write_text("n=five\nm=2\n")
    with pytest.raises(InputError):
        load_config(f)


def test_planting_creates_occurrences():
    c = TrialConfig(n=2000, m=40, g=4, engine="wp", plant=3, seed=8)
    t, x = make_instance(c, 0)
    assert len(bench.naive_search(t, x).occurrences) >= 1


@pytest.mark.parametrize("engine", ["wt", "wp", "greedy", "naive"])
def test_run_trials_rows_and_csv(engine):
    g = 0 if engine == "wt" else 3
    rate = 0.2 if engine in ("wt", "naive") else 0.0
    c = TrialConfig(n=3000, m=32, g=g, wildcard_rate=rate, engine=engine, trials=3, seed=21, plant=2)
    result, rows = run_trials(c)
    assert len(result.reports) == 3 and len(rows) == 4
    assert [r["seed"] for r in rows[:3]] == [21, 22, 23]
    summary = rows[-1]
    assert summary["trial"] == -1 and summary["inspected_chars"] == sum(r["inspected_chars"] for r in rows[:3])
    text = csv_text(rows)
    lines = text.splitlines()
    assert lines[0].startswith("# rng: numpy.random.PCG64")
    assert lines[1] == ",".join(CSV_COLUMNS)
    assert text == csv_text(run_trials(c)[1])


def test_result_aggregates():
    c = TrialConfig(n=20_000, m=256, g=4, engine="wp", trials=2, seed=1)
    result, _ = run_trials(c)
    assert result.fallbacks == 0
    assert result.verification_rate == result.verifications / result.windows
    assert result.mean_inspected_per_char <= result.max_inspected_per_char < 1


def test_oracle_mismatch_names_seed(monkeypatch):
    monkeypatch.setattr(bench, "run_engine", lambda e, t, x: SearchReport(occurrences=(-1,)))
    with pytest.raises(OracleMismatch, match="seed 40"):
        run_trials(TrialConfig(n=100, m=4, seed=40))

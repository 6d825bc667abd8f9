import math
import statistics

import pytest

import oracles
from taulab.matgroup import GeneratorSystem, Mat2K, sanov
from taulab.numberfield import NumberField
from taulab.reduction import primes_between
from taulab.verify import (
    CSV_COLUMNS,
    FreenessViolation,
    girth_bound,
    run_girth_experiment,
    run_mu_growth_check,
    run_nested_check,
    word_growth,
)

QS2 = NumberField([-2, 0, 1])


def toy(b_entry=(0, 1)):
    a = Mat2K.from_rows(QS2, [[1, [0, 1]], [0, 1]])
    b = Mat2K.from_rows(QS2, [[1, 0], [list(b_entry), 1]])
    return GeneratorSystem.build(a, b)


@pytest.fixture(scope="module")
def sanov_scan(sanov_gs):
    return run_girth_experiment(sanov_gs, sanov_gs.field, 3, 61, sampler_trials=32, seed=5)


def test_sanov_scan_rows(sanov_scan):
    rows = sanov_scan.rows
    assert [r.p for r in rows] == primes_between(3, 61)
    assert sanov_scan.passed and not sanov_scan.failures
    for r in rows:
        assert r.surjective and r.girth_ok
        assert r.bound == pytest.approx(math.log(r.p) / math.log(6), rel=1e-12)
        assert r.bound <= math.log(r.p) / math.log(6)
        assert r.girth == oracles.girth_bfs(oracles.sanov_mod(r.p), r.p) if r.p <= 23 else r.girth >= r.bound
        assert r.gap > 0 and r.spectral_converged
        assert r.c_sampled > 0
    assert sanov_scan.min_gap == min(r.gap for r in rows)
    assert sanov_scan.M == 2 and sanov_scan.C == sanov_scan_C()
    assert sanov_scan.relations.startswith("no relation")


def sanov_scan_C():
    return sanov().C


def test_girth_grows(sanov_scan):
    rows = sanov_scan.rows
    med = statistics.median(r.p for r in rows)
    assert max(r.girth for r in rows if r.p > med) >= max(r.girth for r in rows if r.p <= med)


def test_rows_are_deterministic(sanov_gs, sanov_scan):
    again = run_girth_experiment(sanov_gs, sanov_gs.field, 3, 61, sampler_trials=32, seed=5)
    assert again.to_dict() == sanov_scan.to_dict()


def test_parallel_jobs_match_serial(sanov_gs):
    kw = dict(sampler_trials=16, seed=1, relation_depth=0)
    serial = run_girth_experiment(sanov_gs, sanov_gs.field, 3, 23, **kw)
    par = run_girth_experiment(sanov_gs, sanov_gs.field, 3, 23, jobs=2, **kw)
    assert par.to_dict() == serial.to_dict()


def test_toy_field_aborts_on_relation():
    with pytest.raises(FreenessViolation, match="aBaB"):
        run_girth_experiment(toy(), QS2, 3, 50)


def test_toy_field_split_rows():
    rep = run_girth_experiment(toy(), QS2, 3, 50, relation_depth=0, spectral=False, expansion=False)
    assert [r.p for r in rep.rows] == [7, 17, 23, 31, 41, 47]
    assert [r.p for r in rep.rows] == oracles.split_primes([-2, 0, 1], primes_between(3, 50))
    assert all(r.surjective for r in rep.rows)
    assert any("p=3: not completely split" in n for n in rep.notes)


def test_free_sqrt2_system():
    gs = toy((0, 2))
    assert gs.M == pytest.approx(2 * math.sqrt(2), rel=1e-15)
    rep = run_girth_experiment(gs, QS2, 3, 50, spectral=False, expansion=False)
    assert rep.passed
    assert [r.p for r in rep.rows] == [7, 17, 23, 31, 41, 47]


def test_empty_admissible_set():
    rep = run_girth_experiment(toy((0, 2)), QS2, 3, 4)
    assert rep.rows == [] and rep.passed


def test_excluded_rows():
    nf = NumberField([-3, 0, 1])
    a = Mat2K.from_rows(nf, [[1, [0, 1]], [0, 1]])
    b = Mat2K.from_rows(nf, [["1/5", 0], [0, 5]])
    rep = run_girth_experiment(GeneratorSystem.build(a, b), nf, 3, 13, relation_depth=0, spectral=False, expansion=False)
    reasons = {r.p: r.excluded_reason for r in rep.rows}
    assert reasons == {3: "p divides disc(minpoly)", 5: "p divides a generator denominator", 11: None, 13: None}


def test_budget_exclusion(sanov_gs):
    rep = run_girth_experiment(sanov_gs, sanov_gs.field, 3, 13, vertex_budget=1000, spectral=False, expansion=False)
    assert [r.p for r in rep.rows if r.admissible] == [3, 5, 7]
    assert all(r.excluded_reason == "group order exceeds vertex budget" for r in rep.rows if r.p > 7)
    assert rep.passed


def test_csv_columns():
    assert CSV_COLUMNS == ("p", "root", "surjective", "girth", "bound", "girth_ok", "lambda2", "gap", "c_sampled", "excluded_reason")


def test_girth_bound():
    assert girth_bound(1 / math.log(6), 6) == pytest.approx(1.0)


def test_mu_growth(sanov_gs):
    assert word_growth(sanov_gs, "ab")[0] == 5
    assert word_growth(sanov_gs, "a")[0] == 2
    res = run_mu_growth_check(sanov_gs, 12, 200, seed=7)
    assert res.passed and res.words_checked == 2400
    assert res.worst_ratio == 0.5  # single letters: house 2 against 2M = 4
    assert run_mu_growth_check(sanov_gs, 12, 200, seed=7) == res
    with pytest.raises(ValueError):
        run_mu_growth_check(sanov_gs, 0, 10, seed=0)


def test_mu_growth_with_denominators():
    a = Mat2K.from_rows(QS2, [[1, [0, 1]], [0, 1]])
    b = Mat2K.from_rows(QS2, [["1/2", 0], [[0, 1], 2]])
    res = run_mu_growth_check(GeneratorSystem.build(a, b), 10, 100, seed=3)
    assert res.passed and res.worst_denominator_ratio <= 1


def test_nested(sanov_gs):
    rep = run_nested_check(sanov_gs, [3, 5])
    assert [(lv.closure_size, lv.full_order) for lv in rep.levels] == [(24, 24), (2880, 2880)]
    rep = run_nested_check(sanov_gs, [5, 7])
    assert rep.levels[-1].closure_size == 40320 and rep.passed
    rep = run_nested_check(sanov_gs, [3, 5, 7], vertex_budget=5000)
    assert rep.truncated and len(rep.levels) == 2 and "level 3" in rep.note
    with pytest.raises(ValueError):
        run_nested_check(sanov_gs, [5, 3])

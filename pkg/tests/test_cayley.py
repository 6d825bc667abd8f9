import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from taulab.cayley import (
    CapacityError,
    NonConvergence,
    ProductSL2,
    TooLarge,
    VertexSetMismatch,
    abelian_cayley_graph,
    build_graph,
    check_edge_monotonicity,
    complete_graph_k4,
    cycle_graph,
    dense_spectrum,
    expansion_exact,
    expansion_sampled,
    girth,
    single_edge_graph,
    sl2_order,
    spectral_gap,
)
from taulab.reduction import IdealProduct, ModpMatrix, PrimeSite, crt_generators, reduce_generators

# girths of the Sanov graphs mod p, from the pure-Python BFS oracle in oracles.girth_bfs
SANOV_GIRTH = {3: 3, 5: 5, 7: 6, 11: 9, 13: 10, 17: 10, 19: 10, 23: 12, 29: 10, 31: 14, 37: 14}


def nbrs_of(graph):
    return [[int(v) for v in row] for row in graph.adjacency]


# ---------------------------------------------------------------- group and graph


@pytest.mark.parametrize("p", [3, 5, 7])
def test_order_matches_enumeration(p):
    elems = oracles.enumerate_sl2(p)
    assert len(elems) == sl2_order(p) == {3: 24, 5: 120, 7: 336}[p]
    group = ProductSL2([p])
    idx = group.index(np.array(elems, dtype=np.int64))
    assert sorted(idx.tolist()) == list(range(sl2_order(p)))


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_sanov_graph_matches_oracle(sanov_graph, p):
    g = sanov_graph(p)
    assert g.vertex_count == len(oracles.closure(oracles.sanov_mod(p), p)) == sl2_order(p)
    assert g.surjective and g.k_reg == 4
    assert g.check_symmetry()
    assert g.elements[0].tolist() == [1, 0, 0, 1]
    # each slot applies the labelled generator
    gens = oracles.sanov_mod(p)
    elems = [tuple(int(x) for x in e) for e in g.elements]
    for s, lab in enumerate(g.labels):
        for u in range(0, g.vertex_count, max(1, g.vertex_count // 50)):
            assert elems[g.adjacency[u, s]] == oracles.mul(elems[u], gens[lab], p)


def test_product_group_closure(sanov_gs):
    Q = sanov_gs.field
    ideal = IdealProduct((PrimeSite(3, 0, Q), PrimeSite(5, 0, Q)))
    g = build_graph(crt_generators(ideal, sanov_gs))
    assert g.vertex_count == 2880 == g.group_order
    assert g.surjective and g.check_symmetry()


def test_non_surjective_subgroup():
    # the unipotent pair generates only the upper triangular unipotent group of order p
    p = 7
    a = ModpMatrix(p, (1, 1, 0, 1))
    g = build_graph({"a": a, "A": a.inverse(), "b": a, "B": a.inverse()})
    assert g.vertex_count == 7 and not g.surjective
    assert girth(g).girth == 2  # a and b coincide, so the word aB closes


def test_capacity_and_inverse_checks(sanov_gs):
    r = reduce_generators(PrimeSite(13, 0, sanov_gs.field), sanov_gs)
    with pytest.raises(CapacityError):
        build_graph(r, vertex_budget=1000)
    bad = dict(r.images)
    bad["A"] = bad["a"]
    with pytest.raises(ValueError):
        build_graph(bad)


def test_edge_list(sanov_graph):
    g = sanov_graph(5)
    edges = g.edge_list()
    assert len(edges) == 240
    buf = io.StringIO()
    assert g.write_edge_list(buf) == 240
    first = buf.getvalue().splitlines()[0].split()
    assert len(first) == 3 and first[2] in "aAbB"
    assert len(cycle_graph(4).edge_list()) == 4
    assert len(complete_graph_k4().edge_list()) == 6


# ---------------------------------------------------------------- girth


def test_cycle_girth():
    rep = girth(cycle_graph(4))
    assert rep.girth == 4 and rep.word in ("aaaa", "AAAA")
    assert girth(cycle_graph(9)).girth == 9


def test_involution_graphs_girth():
    assert girth(complete_graph_k4()).girth == 3
    assert girth(single_edge_graph()).girth is None


@pytest.mark.parametrize("p", sorted(SANOV_GIRTH))
def test_sanov_girth_pinned(sanov_graph, p):
    rep = girth(sanov_graph(p))
    assert rep.girth == SANOV_GIRTH[p]
    assert len(rep.word) == rep.girth
    gens = oracles.sanov_mod(p)
    assert oracles.eval_word_mod(rep.word, gens, p) == (1, 0, 0, 1)
    assert all(x != oracles.INV[y] for x, y in zip(rep.word, rep.word[1:]))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19])
def test_girth_is_exhaustively_minimal(p):
    gens = oracles.sanov_mod(p)
    found = oracles.relations_by_length(gens, p, SANOV_GIRTH[p])
    assert min(found) == SANOV_GIRTH[p]


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_girth_matches_dict_bfs(sanov_graph, p):
    assert girth(sanov_graph(p)).girth == oracles.girth_bfs(oracles.sanov_mod(p), p)


@settings(max_examples=25)
@given(st.sampled_from([5, 7, 11]), st.lists(st.integers(0, 10), min_size=4, max_size=4))
def test_girth_random_generators(p, seed_entries):
    # random generator pairs built from elementary matrices; compare with the dict BFS oracle
    x, y, u, v = (e % p for e in seed_entries)
    a = ModpMatrix(p, (1, x, 0, 1)) @ ModpMatrix(p, (1, 0, y, 1))
    b = ModpMatrix(p, (1, 0, u, 1)) @ ModpMatrix(p, (1, v, 0, 1))
    imgs = {"a": a, "A": a.inverse(), "b": b, "B": b.inverse()}
    g = build_graph(imgs)
    ogens = {k: m.entries for k, m in imgs.items()}
    assert girth(g).girth == oracles.girth_bfs(ogens, p)
    assert g.vertex_count == len(oracles.closure(ogens, p))


# ---------------------------------------------------------------- spectrum


def test_diagnostic_spectra():
    c4 = spectral_gap(cycle_graph(4))
    assert c4.lambda2 == pytest.approx(0, abs=1e-6) and c4.gap == pytest.approx(2, abs=1e-6)
    k4 = spectral_gap(complete_graph_k4())
    assert k4.lambda2 == pytest.approx(-1, abs=1e-6) and k4.gap == pytest.approx(4, abs=1e-6)
    k2 = spectral_gap(single_edge_graph())
    assert k2.lambda2 == pytest.approx(-1, abs=1e-6)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_power_iteration_matches_dense(sanov_graph, p):
    g = sanov_graph(p)
    rep = spectral_gap(g, method="power")
    assert rep.converged
    assert abs(rep.lambda2 - oracles.dense_lambda2(nbrs_of(g))) <= 1e-6
    assert abs(rep.lambda_min - dense_spectrum(g)[-1]) <= 1e-6
    assert -4 <= rep.lambda2 < 4 and rep.gap > 0


def test_sanov_mod3_mod5_exact_eigenvalues(sanov_graph):
    assert spectral_gap(sanov_graph(3)).lambda2 == pytest.approx(1 + 3**0.5, abs=1e-6)
    assert spectral_gap(sanov_graph(5)).lambda2 == pytest.approx(1 + 5**0.5, abs=1e-6)


def test_lanczos_matches_dense(sanov_graph):
    g = sanov_graph(11)  # 1320 vertices, still small enough for a dense check
    rep = spectral_gap(g)
    assert rep.method == "lanczos" and rep.converged
    assert abs(rep.lambda2 - dense_spectrum(g)[1]) <= 1e-6


def test_nonconvergence_is_reported(sanov_graph):
    rep = spectral_gap(sanov_graph(7), max_iter=3, method="power")
    assert not rep.converged and np.isfinite(rep.residual)
    with pytest.raises(NonConvergence) as info:
        spectral_gap(sanov_graph(7), max_iter=3, method="power", strict=True)
    assert info.value.report.iterations > 0


def test_cycle_spectra():
    for n in (5, 6, 8):
        rep = spectral_gap(cycle_graph(n))
        assert rep.gap > 0
        assert rep.lambda2 == pytest.approx(2 * np.cos(2 * np.pi / n), abs=1e-6)


# ---------------------------------------------------------------- expansion


def test_exact_expansion_diagnostics():
    c4 = expansion_exact(cycle_graph(4))
    assert c4.c_value == Fraction(4, 3) and len(c4.witness_set) == 3
    assert c4.subsets_tested == 14
    assert expansion_exact(single_edge_graph()).c_value == 2
    assert expansion_exact(complete_graph_k4()).c_value == Fraction(4, 3)


@pytest.mark.parametrize("graph", [cycle_graph(5), cycle_graph(8), complete_graph_k4(), single_edge_graph(),
                                   abelian_cayley_graph([3, 3], {"x": [1, 0], "X": [2, 0], "y": [0, 1], "Y": [0, 2]},
                                                        {"x": "X", "X": "x", "y": "Y", "Y": "y"})])
def test_exact_expansion_matches_bruteforce(graph):
    rep = expansion_exact(graph)
    assert rep.c_value == oracles.expansion_bruteforce(nbrs_of(graph))
    assert oracles.boundary_ratio(nbrs_of(graph), rep.witness_set) == rep.c_value


def test_exact_expansion_too_large(sanov_graph):
    with pytest.raises(TooLarge):
        expansion_exact(sanov_graph(5))


@pytest.mark.slow
def test_sanov_mod3_exact_expansion_matches_bitmask_oracle(sanov_graph):
    g = sanov_graph(3)
    rep = expansion_exact(g)
    best, scanned = oracles.expansion_bitmask(nbrs_of(g))
    assert rep.c_value == best == 1
    assert rep.subsets_tested == scanned == 2**24 - 2


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=15)
def test_sampled_is_upper_bound(seed):
    for graph, exact in ((cycle_graph(4), Fraction(4, 3)), (complete_graph_k4(), Fraction(4, 3)), (cycle_graph(7), Fraction(7, 6))):
        rep = expansion_sampled(graph, 100, seed)
        assert rep.c_value >= exact
        assert oracles.boundary_ratio(nbrs_of(graph), rep.witness_set) == rep.c_value


def test_sampled_reaches_exact_on_sanov_mod3(sanov_graph):
    rep = expansion_sampled(sanov_graph(3), 100_000, 0)
    assert rep.c_value == 1
    assert oracles.boundary_ratio(nbrs_of(sanov_graph(3)), rep.witness_set) == 1


def test_sampled_is_deterministic(sanov_graph):
    g = sanov_graph(7)
    r1, r2 = expansion_sampled(g, 500, 42), expansion_sampled(g, 500, 42)
    assert r1.c_value == r2.c_value and np.array_equal(r1.witness_set, r2.witness_set)
    assert r1.seed == 42
    assert 0 < r1.c_value <= Fraction(g.vertex_count, g.vertex_count - 1)


# ---------------------------------------------------------------- monotonicity


def _sl2_5_enlarged(sanov_gs):
    site = PrimeSite(5, 0, sanov_gs.field)
    r = reduce_generators(site, sanov_gs)
    small = build_graph(r)
    u = ModpMatrix(5, (1, 1, 0, 1))
    imgs = dict(r.images)
    imgs.update({"c": u, "C": u.inverse()})
    inv = {"a": "A", "A": "a", "b": "B", "B": "b", "c": "C", "C": "c"}
    return small, build_graph(imgs, inverse=inv)


def test_monotonicity_sl2_5(sanov_gs):
    small, big = _sl2_5_enlarged(sanov_gs)
    assert big.k_reg == 6
    rep = check_edge_monotonicity(small, big, 10_000, seed=1)
    assert rep.ok and rep.tested == 10_000
    assert rep.min_ratio_big >= rep.min_ratio_small


def test_monotonicity_same_labels(sanov_graph):
    rep = check_edge_monotonicity(sanov_graph(5), sanov_graph(5), 500)
    assert rep.ok and rep.min_ratio_small == rep.min_ratio_big


def test_monotonicity_exhaustive_small():
    small = cycle_graph(8)
    big = abelian_cayley_graph([8], {"a": [1], "A": [7], "c": [3], "C": [5]}, {"a": "A", "A": "a", "c": "C", "C": "c"})
    rep = check_edge_monotonicity(small, big, "exhaustive")
    assert rep.ok and rep.tested == 2**8 - 2


def test_monotonicity_detects_violation():
    # swapping roles: the smaller edge set must lose on some subset
    big = abelian_cayley_graph([8], {"a": [1], "A": [7], "c": [3], "C": [5]}, {"a": "A", "A": "a", "c": "C", "C": "c"})
    rep = check_edge_monotonicity(big, cycle_graph(8), "exhaustive")
    assert not rep.ok and rep.counterexample is not None
    cyc = cycle_graph(8)
    subset_keys = big.keys[rep.counterexample]
    in_cycle = [int(np.flatnonzero(cyc.keys == k)[0]) for k in subset_keys]
    assert oracles.boundary_ratio(nbrs_of(cyc), in_cycle) < oracles.boundary_ratio(nbrs_of(big), rep.counterexample)


def test_vertex_set_mismatch(sanov_graph):
    with pytest.raises(VertexSetMismatch):
        check_edge_monotonicity(sanov_graph(5), sanov_graph(7))

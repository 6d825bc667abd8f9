"""Prime scans tying the pieces together: girth bound, surjectivity, spectral gap,
growth of the house along words, and surjectivity onto products of SL(2,p)."""

from __future__ import annotations

import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .cayley import (
    DEFAULT_VERTEX_BUDGET,
    build_graph,
    expansion_sampled,
    girth,
    sl2_order,
    spectral_gap,
)
from .matgroup import (
    GeneratorSystem,
    _eval_cleared_raw,
    assert_no_short_relations,
    random_reduced_word,
)
from .numberfield import NumberField
from .reduction import (
    IdealProduct,
    PrimeSite,
    classify_primes,
    crt_generators,
    default_site,
    reduce_generators,
)

log = logging.getLogger(__name__)

MU_REL_TOL = 1e-9
K_REG = 4  # |{a, A, b, B}|


class FreenessViolation(RuntimeError):
    """The generators satisfy a short relation, so they do not span a free group."""


@dataclass
class PrimeRow:
    p: int
    root: Optional[int]
    surjective: Optional[bool] = None
    girth: Optional[int] = None
    bound: Optional[float] = None
    girth_ok: Optional[bool] = None
    lambda2: Optional[float] = None
    gap: Optional[float] = None
    c_sampled: Optional[float] = None
    excluded_reason: Optional[str] = None
    vertex_count: Optional[int] = None
    girth_witness: Optional[str] = None
    spectral_converged: Optional[bool] = None
    spectral_residual: Optional[float] = None
    error: Optional[str] = None

    @property
    def admissible(self) -> bool:
        return self.excluded_reason is None


CSV_COLUMNS = (
    "p",
    "root",
    "surjective",
    "girth",
    "bound",
    "girth_ok",
    "lambda2",
    "gap",
    "c_sampled",
    "excluded_reason",
)


@dataclass
class ExperimentReport:
    field_desc: list
    generator_desc: dict
    M: float
    C: float
    rows: list[PrimeRow]
    mu_growth_pass: Optional[bool] = None
    min_gap: Optional[float] = None
    min_normalized_gap: Optional[float] = None
    notes: list[str] = field(default_factory=list)
    mu_growth: Optional[dict] = None
    relations: Optional[str] = None

    @property
    def failures(self) -> list[str]:
        out = []
        for row in self.rows:
            if not row.admissible:
                continue
            if row.error:
                out.append(f"p={row.p}: {row.error}")
            if row.girth_ok is False:
                out.append(f"p={row.p}: girth {row.girth} < bound {row.bound:.6g}")
            if row.surjective is False:
                out.append(f"p={row.p}: closure {row.vertex_count} != |SL(2,{row.p})|")
        if self.mu_growth_pass is False:
            out.append("house growth bound violated")
        return out

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return asdict(self)


def girth_bound(C: float, p: int) -> float:
    return C * math.log(p)


def row_seed(seed: int, p: int) -> int:
    return int(np.random.SeedSequence([seed, p]).generate_state(1, dtype=np.uint64)[0] >> 1)


def analyze_prime(
    gs: GeneratorSystem,
    site: PrimeSite,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
    spectral_tol: float = 1e-8,
    sampler_trials: int = 64,
    seed: int = 0,
    spectral: bool = True,
    expansion: bool = True,
) -> PrimeRow:
    """All per-prime measurements for one split prime site."""
    p = site.p
    row = PrimeRow(p, site.root)
    try:
        t0 = time.perf_counter()
        graph = build_graph(reduce_generators(site, gs), vertex_budget)
        row.vertex_count = graph.vertex_count
        row.surjective = graph.surjective
        gr = girth(graph)
        row.girth = gr.girth
        row.girth_witness = gr.word
        row.bound = girth_bound(gs.C, p)
        row.girth_ok = gr.girth is not None and gr.girth >= row.bound
        if spectral:
            sr = spectral_gap(graph, tol=spectral_tol)
            row.lambda2, row.gap = sr.lambda2, sr.gap
            row.spectral_converged, row.spectral_residual = sr.converged, sr.residual
        if expansion:
            row.c_sampled = expansion_sampled(graph, sampler_trials, row_seed(seed, p)).value
        log.info("p=%d |V|=%d girth=%s (%.2fs)", p, graph.vertex_count, gr.girth, time.perf_counter() - t0)
    except Exception as err:  # a failed row must not sink the whole scan
        log.exception("p=%d failed", p)
        row.error = f"{type(err).__name__}: {err}"
    return row


def _analyze_job(args):
    return analyze_prime(*args)


def run_girth_experiment(
    gs: GeneratorSystem,
    nf: NumberField,
    p_min: int,
    p_max: int,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
    spectral_tol: float = 1e-8,
    sampler_trials: int = 64,
    seed: int = 0,
    relation_depth: int = 10,
    jobs: int = 1,
    spectral: bool = True,
    expansion: bool = True,
) -> ExperimentReport:
    """Scan the completely split primes in [p_min, p_max].

    Rows are produced for every split prime and for primes dropped for
    ramification or denominators; primes that do not split completely are
    listed in ``notes`` only.  ``relation_depth=0`` skips the freeness check.
    """
    report = ExperimentReport(list(nf.minpoly), gs.to_json(), gs.M, gs.C, [])
    if relation_depth > 0:
        rel = assert_no_short_relations(gs, relation_depth)
        report.relations = rel.summary()
        if rel.found:
            raise FreenessViolation(rel.summary())
    jobs_args = []
    rows: dict[int, PrimeRow] = {}
    for status in classify_primes(nf, gs, p_min, p_max):
        if status.split:
            site = default_site(status.sites)
            if sl2_order(status.p) > vertex_budget:
                rows[status.p] = PrimeRow(status.p, site.root, excluded_reason="group order exceeds vertex budget")
            else:
                jobs_args.append((gs, site, vertex_budget, spectral_tol, sampler_trials, seed, spectral, expansion))
        elif status.reason.startswith("not completely split"):
            report.notes.append(f"p={status.p}: {status.reason}")
        else:
            rows[status.p] = PrimeRow(status.p, None, excluded_reason=status.reason)
    if jobs > 1 and len(jobs_args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_analyze_job, jobs_args))
    else:
        results = [_analyze_job(a) for a in jobs_args]
    for row in results:
        rows[row.p] = row
    report.rows = [rows[p] for p in sorted(rows)]
    gaps = [r.gap for r in report.rows if r.gap is not None and r.surjective]
    if gaps:
        report.min_gap = min(gaps)
        report.min_normalized_gap = min(gaps) / K_REG
    return report


@dataclass
class MuGrowthResult:
    passed: bool
    worst_ratio: float
    worst_word: str
    worst_denominator_ratio: float
    violations: list[str]
    words_checked: int
    r_max: int
    trials_per_length: int
    seed: int

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict}: {self.words_checked} words up to length {self.r_max}, "
            f"worst house(entry)/(2M)^r = {self.worst_ratio:.6g} ({self.worst_word})"
        )


def word_growth(gs: GeneratorSystem, word: str) -> tuple[float, float, float, float]:
    """(max house of an entry, its error bound, house of Z, error bound) for the cleared product."""
    m, z = _eval_cleared_raw(word, gs)
    ring = gs._ring()
    best, best_err = 0.0, 0.0
    for v in m:
        val, err = ring.wrap(v).house_bound()
        if val > best:
            best, best_err = val, err
    hz, hz_err = ring.wrap(ring.scalar(z)).house_bound()
    return best, best_err, hz, hz_err


def run_mu_growth_check(
    gs: GeneratorSystem,
    r_max: int,
    trials_per_length: int,
    seed: int,
    rel_tol: float = MU_REL_TOL,
) -> MuGrowthResult:
    """Sample reduced words per length r and test house(entry) <= (2M)^r and house(Z) <= M^r."""
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    rng = random.Random(seed)
    M = gs.M_upper
    worst, worst_word, worst_z = 0.0, "", 0.0
    violations = []
    checked = 0
    for r in range(1, r_max + 1):
        entry_bound = (2 * M) ** r
        z_bound = M**r
        for _ in range(trials_per_length):
            w = random_reduced_word(r, rng)
            h, h_err, hz, hz_err = word_growth(gs, w)
            checked += 1
            if h - h_err > entry_bound * (1 + rel_tol):
                violations.append(f"{w}: house(entry) {h:.6g} > (2M)^{r} = {entry_bound:.6g}")
            if hz - hz_err > z_bound * (1 + rel_tol):
                violations.append(f"{w}: house(Z) {hz:.6g} > M^{r} = {z_bound:.6g}")
            if h / entry_bound > worst:
                worst, worst_word = h / entry_bound, w
            worst_z = max(worst_z, hz / z_bound)
    return MuGrowthResult(not violations, worst, worst_word, worst_z, violations, checked, r_max, trials_per_length, seed)


@dataclass
class NestedLevel:
    primes: tuple[int, ...]
    closure_size: int
    full_order: int

    @property
    def surjective(self) -> bool:
        return self.closure_size == self.full_order


@dataclass
class NestedReport:
    levels: list[NestedLevel]
    truncated: bool = False
    note: Optional[str] = None

    @property
    def passed(self) -> bool:
        return all(lv.surjective for lv in self.levels)


def run_nested_check(
    gs: GeneratorSystem,
    primes: Sequence[int],
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
) -> NestedReport:
    """BFS closure of the CRT-reduced generators in prod_{i<=l} SL(2,p_i), level by level."""
    primes = list(primes)
    if primes != sorted(set(primes)):
        raise ValueError("primes must be distinct and ascending")
    nf = gs.field
    sites = []
    denoms = {cm.denom.num[0] for cm in gs.cleared.values()}
    for p in primes:
        status = classify_primes(nf, gs, p, p)
        if not status or not status[0].split:
            reason = status[0].reason if status else "not an odd prime"
            raise ValueError(f"p={p} is not admissible: {reason}")
        sites.append(default_site(status[0].sites))
    assert all(d % s.p for d in denoms for s in sites)
    report = NestedReport([])
    for level in range(1, len(sites) + 1):
        ideal = IdealProduct(tuple(sites[:level]))
        order = math.prod(sl2_order(p) for p in ideal.primes)
        if order > vertex_budget:
            report.truncated = True
            report.note = f"stopped before level {level}: order {order} exceeds budget {vertex_budget}"
            break
        graph = build_graph(crt_generators(ideal, gs), vertex_budget)
        report.levels.append(NestedLevel(ideal.primes, graph.vertex_count, order))
    return report


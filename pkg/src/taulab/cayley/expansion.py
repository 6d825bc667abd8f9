"""Expansion constants from the vertex-boundary definition of an expander.

For a subset A of the n vertices, ``boundary(A)`` counts vertices outside A
adjacent to A, and the ratio is ``|boundary(A)| / ((1 - |A|/n) |A|)``.  The
expansion constant c is the minimum ratio over nonempty proper subsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from scipy.sparse.csgraph import breadth_first_order

from .graph import CayleyGraph, VertexSetMismatch
from .spectral import adjacency_matrix

EXACT_LIMIT = 24
_BATCH_CELLS = 1 << 24


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ExpansionReport:
    c_value: Fraction
    mode: str
    witness_set: np.ndarray = field(repr=False)
    subsets_tested: int
    seed: Optional[int] = None

    @property
    def value(self) -> float:
        return float(self.c_value)


def ratio(boundary: int, size: int, n: int) -> Fraction:
    return Fraction(boundary * n, size * (n - size))


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x).astype(np.int64)


def _union_table(masks: list[int], bits: int, offset: int) -> np.ndarray:
    table = np.zeros(1 << bits, dtype=np.uint32)
    for j in range(bits):
        lo = 1 << j
        table[lo : 2 * lo] = table[:lo] | np.uint32(masks[offset + j])
    return table


def expansion_exact(graph: CayleyGraph) -> ExpansionReport:
    """Minimum ratio over all 2^n - 2 nonempty proper subsets (n <= 24)."""
    n = graph.vertex_count
    if n > EXACT_LIMIT:
        raise TooLarge(f"{n} vertices exceeds the exhaustive limit of {EXACT_LIMIT}")
    if n < 2:
        raise TooLarge("need at least two vertices")
    nbr = graph.neighbor_masks()
    lo_bits = min(n, 12)
    hi_bits = n - lo_bits
    lo_table = _union_table(nbr, lo_bits, 0)
    hi_table = _union_table(nbr, hi_bits, lo_bits)
    lo_masks = np.arange(1 << lo_bits, dtype=np.uint32)
    lo_sizes = _popcount(lo_masks)

    full = (1 << n) - 1
    best: Optional[Fraction] = None
    best_mask = 0
    for hi in range(1 << hi_bits):
        masks = lo_masks | np.uint32(hi << lo_bits)
        sizes = lo_sizes + int(hi).bit_count()
        nb = lo_table | hi_table[hi]
        boundary = _popcount(nb & ~masks)
        valid = (sizes > 0) & (sizes < n)
        if not valid.any():
            continue
        num = (boundary * n).astype(np.float64)
        den = (sizes * (n - sizes)).astype(np.float64)
        vals = np.where(valid, num / np.where(valid, den, 1.0), np.inf)
        i = int(np.argmin(vals))
        cand = ratio(int(boundary[i]), int(sizes[i]), n)
        if best is None or cand < best:
            best, best_mask = cand, int(masks[i])
    assert best is not None and 0 < best_mask < full
    witness = np.array([v for v in range(n) if best_mask >> v & 1], dtype=np.int64)
    return ExpansionReport(best, "exact", witness, (1 << n) - 2)


def boundary_sizes(adjacency: np.ndarray, members: np.ndarray) -> np.ndarray:
    """``members`` is a (batch, n) boolean array; returns |boundary| per row."""
    hit = np.zeros_like(members)
    for s in range(adjacency.shape[1]):
        hit |= members[:, adjacency[:, s]]
    return (hit & ~members).sum(axis=1)


class _SubsetSampler:
    """Seeded stream of random subsets (stratified sizes) and BFS-ball prefixes."""

    def __init__(self, graph: CayleyGraph, seed: int):
        self.graph = graph
        self.n = graph.vertex_count
        ss = np.random.SeedSequence(seed)
        self.rng_random, self.rng_ball = (np.random.default_rng(s) for s in ss.spawn(2))
        self._csr = None

    def stratified_sizes(self, count: int, rng) -> np.ndarray:
        n = self.n
        # one jittered size per stratum of [1, n-1]
        edges = (np.arange(count) + rng.random(count)) * (n - 1) / count
        return np.clip(1 + edges.astype(np.int64), 1, n - 1)

    def random_subsets(self, count: int):
        rng = self.rng_random
        for size in self.stratified_sizes(count, rng):
            yield rng.choice(self.n, size=int(size), replace=False)

    def ball_subsets(self, count: int):
        if count <= 0:
            return
        rng = self.rng_ball
        if self._csr is None:
            self._csr = adjacency_matrix(self.graph)
        sizes = self.stratified_sizes(count, rng)
        starts = max(1, min(4, count))
        per = -(-count // starts)
        for j in range(starts):
            root = int(rng.integers(self.n))
            order = breadth_first_order(self._csr, root, directed=False, return_predecessors=False)
            for size in sizes[j * per : (j + 1) * per]:
                yield order[: int(size)]


def _evaluate(adjacency: np.ndarray, subsets, n: int):
    """Yield (subset, boundary) pairs, batching membership arrays."""
    batch = max(1, _BATCH_CELLS // max(n, 1))
    pending = []
    for sub in subsets:
        pending.append(sub)
        if len(pending) == batch:
            yield from _flush(adjacency, pending, n)
            pending = []
    if pending:
        yield from _flush(adjacency, pending, n)


def _flush(adjacency, pending, n):
    members = np.zeros((len(pending), n), dtype=bool)
    for i, sub in enumerate(pending):
        members[i, sub] = True
    for sub, b in zip(pending, boundary_sizes(adjacency, members)):
        yield sub, int(b)


def expansion_sampled(graph: CayleyGraph, trials: int, seed: int) -> ExpansionReport:
    """Minimum ratio over ``trials`` seeded subsets; an upper bound on the exact c.

    A quarter of the budget goes to uniform random sets with sizes stratified
    over 1..n-1, a quarter to truncated BFS balls, and the rest to local
    descent (swap/flip moves) from the best of those, with random restarts.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = graph.vertex_count
    if n < 2:
        raise TooLarge("need at least two vertices")
    sampler = _SubsetSampler(graph, seed)
    n_ball = trials // 4
    n_rand = max(1, trials // 4) if trials > 1 else 1
    n_refine = trials - n_ball - n_rand
    subsets = _chain(sampler.ball_subsets(n_ball), sampler.random_subsets(n_rand))
    best: Optional[Fraction] = None
    best_sub = None
    tested = 0
    for sub, b in _evaluate(graph.adjacency, subsets, n):
        tested += 1
        r = ratio(b, len(sub), n)
        if best is None or r < best:
            best, best_sub = r, sub
    if n_refine > 0:
        r, sub, used = _refine(graph.adjacency, best_sub, best, n_refine, sampler)
        tested += used
        if r < best:
            best, best_sub = r, sub
    return ExpansionReport(best, "sampled", np.sort(np.asarray(best_sub)), tested, seed)


def _refine(adjacency, start, start_ratio: Fraction, budget: int, sampler: "_SubsetSampler"):
    """Steepest descent over swap and flip moves, restarting at random sets.

    Every evaluated set is charged to ``budget``.  Small sets get their full
    move neighborhood; large ones a random sample of moves.
    """
    n = adjacency.shape[0]
    rng = np.random.default_rng(sampler.rng_random.integers(2**63))
    cap = int(min(4096, max(1, _BATCH_CELLS // n)))
    cur = np.zeros(n, dtype=bool)
    cur[start] = True
    cur_r = start_ratio
    best_r, best = start_ratio, cur.copy()
    used = 0
    while used < budget:
        members = _moves(cur, cap, min(cap, budget - used), rng)
        sizes = members.sum(axis=1)
        bnd = boundary_sizes(adjacency, members)
        used += len(members)
        valid = (sizes > 0) & (sizes < n)
        vals = np.where(valid, bnd * n / np.maximum(sizes * (n - sizes), 1), np.inf)
        i = int(np.argmin(vals))
        r = ratio(int(bnd[i]), int(sizes[i]), n) if valid[i] else None
        if r is not None and r < cur_r:
            cur, cur_r = members[i], r
            if r < best_r:
                best_r, best = r, cur.copy()
            continue
        if used >= budget:
            break
        size = int(sampler.stratified_sizes(1, rng)[0])
        cur = np.zeros(n, dtype=bool)
        cur[rng.choice(n, size=size, replace=False)] = True
        cur_r = ratio(int(boundary_sizes(adjacency, cur[None, :])[0]), size, n)
        used += 1
        if cur_r < best_r:
            best_r, best = cur_r, cur.copy()
    return best_r, np.flatnonzero(best), used


def _moves(cur: np.ndarray, cap: int, limit: int, rng) -> np.ndarray:
    """Candidate sets one swap or one flip away from ``cur`` (at most ``limit``)."""
    n = len(cur)
    ins, outs = np.flatnonzero(cur), np.flatnonzero(~cur)
    if len(ins) * len(outs) + n <= cap:
        ii, oo = np.meshgrid(ins, outs, indexing="ij")
        swap_out, swap_in = ii.ravel(), oo.ravel()
        flips = np.arange(n)
    else:
        m = max(1, cap // 2)
        swap_out = ins[rng.integers(len(ins), size=m)] if len(ins) else np.empty(0, np.int64)
        swap_in = outs[rng.integers(len(outs), size=m)] if len(outs) else np.empty(0, np.int64)
        k = min(len(swap_out), len(swap_in))
        swap_out, swap_in = swap_out[:k], swap_in[:k]
        flips = rng.integers(n, size=cap - k)
    total = len(swap_out) + len(flips)
    members = np.repeat(cur[None, :], total, axis=0)
    rows = np.arange(len(swap_out))
    members[rows, swap_out] = False
    members[rows, swap_in] = True
    rows = np.arange(len(swap_out), total)
    members[rows, flips] ^= True
    if total > limit:
        members = members[rng.permutation(total)[:limit]]
    return members


def _chain(*gens):
    for g in gens:
        yield from g


@dataclass(frozen=True)
class MonotonicityReport:
    ok: bool
    tested: int
    counterexample: Optional[np.ndarray] = None
    min_ratio_small: Optional[Fraction] = None
    min_ratio_big: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.ok


def check_edge_monotonicity(
    graph_small: CayleyGraph,
    graph_big: CayleyGraph,
    subsets: Union[int, str] = 10_000,
    seed: int = 0,
) -> MonotonicityReport:
    """Check ratio(big, A) >= ratio(small, A) for every tested subset A.

    Both graphs must live on the same group elements (matched through their
    keys).  ``subsets`` is a sample count or ``"exhaustive"`` (n <= 24).
    """
    n = graph_small.vertex_count
    if (
        n != graph_big.vertex_count
        or graph_small.group_order != graph_big.group_order
        or not np.array_equal(np.sort(graph_small.keys), np.sort(graph_big.keys))
    ):
        raise VertexSetMismatch("graphs are not on the same vertex set")
    # relabel big-graph vertices into small-graph ids
    small_of_key = np.argsort(graph_small.keys)
    big_sorted = np.argsort(graph_big.keys)
    to_small = np.empty(n, dtype=np.int64)
    to_small[big_sorted] = small_of_key
    big_adj = np.empty_like(graph_big.adjacency)
    big_adj[to_small] = to_small[graph_big.adjacency]

    if subsets == "exhaustive":
        if n > EXACT_LIMIT:
            raise TooLarge(f"{n} vertices exceeds the exhaustive limit of {EXACT_LIMIT}")
        stream = (np.array([v for v in range(n) if m >> v & 1]) for m in range(1, (1 << n) - 1))
    else:
        sampler = _SubsetSampler(graph_small, seed)
        half = int(subsets) // 2
        stream = _chain(sampler.ball_subsets(half), sampler.random_subsets(int(subsets) - half))

    tested = 0
    lo_small = lo_big = None
    batch = max(1, _BATCH_CELLS // n)
    pending: list[np.ndarray] = []

    def run(chunk):
        nonlocal tested, lo_small, lo_big
        members = np.zeros((len(chunk), n), dtype=bool)
        for i, sub in enumerate(chunk):
            members[i, sub] = True
        bs = boundary_sizes(graph_small.adjacency, members)
        bb = boundary_sizes(big_adj, members)
        for sub, x, y in zip(chunk, bs, bb):
            tested += 1
            rs, rb = ratio(int(x), len(sub), n), ratio(int(y), len(sub), n)
            lo_small = rs if lo_small is None else min(lo_small, rs)
            lo_big = rb if lo_big is None else min(lo_big, rb)
            if rb < rs:
                return sub
        return None

    for sub in stream:
        pending.append(sub)
        if len(pending) == batch:
            bad = run(pending)
            pending = []
            if bad is not None:
                return MonotonicityReport(False, tested, bad, lo_small, lo_big)
    if pending:
        bad = run(pending)
        if bad is not None:
            return MonotonicityReport(False, tested, bad, lo_small, lo_big)
    return MonotonicityReport(True, tested, None, lo_small, lo_big)

"""Girth as the shortest nonempty reduced label word that closes up at the identity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import CayleyGraph


@dataclass(frozen=True)
class GirthReport:
    girth: Optional[int]
    witness: tuple[str, ...]
    states_visited: int

    @property
    def word(self) -> str:
        return "".join(self.witness)


def girth(graph: CayleyGraph) -> GirthReport:
    """Non-backtracking BFS over (vertex, incoming slot) states from vertex 0.

    A step along slot s is allowed unless s is the inverse slot of the incoming
    one; the first walk returning to vertex 0 is a shortest freely reduced
    word equal to the identity.  Multigraph edges count separately, so a
    coincident pair or an involution gives girth 2.  Returns ``girth=None`` when
    no such walk exists (e.g. a 1-regular graph).
    """
    adj = graph.adjacency.astype(np.int64)
    k = graph.k_reg
    inv = np.asarray(graph.inverse_slot, dtype=np.int64)
    nstates = graph.vertex_count * k
    parent = np.full(nstates, -1, dtype=np.int64)
    seen = np.zeros(nstates, dtype=bool)
    root = -2

    first = adj[0] * k + np.arange(k)
    for s in range(k):
        if adj[0, s] == 0:
            return GirthReport(1, (graph.labels[s],), 0)
    first_u, first_i = np.unique(first, return_index=True)
    seen[first_u] = True
    parent[first_u] = root
    frontier = first_u
    visited = len(frontier)
    depth = 1

    while len(frontier):
        v = frontier // k
        incoming = frontier % k
        nxt_states = []
        nxt_parents = []
        for s in range(k):
            allowed = inv[incoming] != s
            src = frontier[allowed]
            dest = adj[v[allowed], s]
            hit = np.flatnonzero(dest == 0)
            if len(hit):
                labels = _trace(parent, int(src[hit[0]]), k, root, graph.labels) + (graph.labels[s],)
                return GirthReport(depth + 1, labels, visited)
            st = dest * k + s
            fresh = ~seen[st]
            nxt_states.append(st[fresh])
            nxt_parents.append(src[fresh])
        if not nxt_states:
            break
        st = np.concatenate(nxt_states)
        par = np.concatenate(nxt_parents)
        st, idx = np.unique(st, return_index=True)
        seen[st] = True
        parent[st] = par[idx]
        frontier = st
        visited += len(st)
        depth += 1
    return GirthReport(None, (), visited)


def _trace(parent: np.ndarray, state: int, k: int, root: int, labels) -> tuple[str, ...]:
    out = []
    while state != root:
        out.append(labels[state % k])
        state = int(parent[state])
    return tuple(reversed(out))

"""Labeled Cayley multigraphs built by BFS closure from the identity."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, TextIO, Union

import numpy as np

from ..matgroup import INVERSE
from ..reduction import ModpMatrix, ReducedGenerators
from .group import ProductSL2

DEFAULT_VERTEX_BUDGET = 8_000_000


class CapacityError(RuntimeError):
    pass


class VertexSetMismatch(ValueError):
    pass


@dataclass(eq=False)
class CayleyGraph:
    """k-regular labeled multigraph; vertex 0 is the identity.

    ``adjacency[u, s]`` is the endpoint of the slot labeled ``labels[s]`` at u,
    and ``inverse_slot[s]`` is the slot carrying the inverse label.  ``keys``
    holds a group-element index per vertex, used to match vertex sets between
    graphs on the same group.
    """

    adjacency: np.ndarray
    labels: tuple[str, ...]
    inverse_slot: np.ndarray
    keys: np.ndarray
    p_desc: Union[int, tuple, str]
    group_order: int
    elements: Optional[np.ndarray] = field(default=None, repr=False)
    group: Optional[ProductSL2] = field(default=None, repr=False)

    @property
    def vertex_count(self) -> int:
        return int(self.adjacency.shape[0])

    @property
    def k_reg(self) -> int:
        return int(self.adjacency.shape[1])

    @property
    def surjective(self) -> bool:
        return self.vertex_count == self.group_order

    def neighbor_masks(self) -> list[int]:
        """Vertex adjacency as bitmasks (set semantics, self-loops dropped)."""
        out = []
        for u in range(self.vertex_count):
            m = 0
            for v in self.adjacency[u]:
                if v != u:
                    m |= 1 << int(v)
            out.append(m)
        return out

    def check_symmetry(self) -> bool:
        n = np.arange(self.vertex_count)
        for s, t in enumerate(self.inverse_slot):
            if not np.array_equal(self.adjacency[self.adjacency[:, s], t], n):
                return False
        return True

    def edge_list(self) -> list[tuple[int, int, str]]:
        """Each undirected labeled edge once: ``(u, v, label)``."""
        edges = []
        adj = self.adjacency
        for s, t in enumerate(self.inverse_slot):
            if s < t:
                edges.extend((u, int(v), self.labels[s]) for u, v in enumerate(adj[:, s]))
            elif s == t:
                edges.extend((u, int(v), self.labels[s]) for u, v in enumerate(adj[:, s]) if u <= v)
        edges.sort()
        return edges

    def write_edge_list(self, fh: TextIO) -> int:
        edges = self.edge_list()
        for u, v, lab in edges:
            fh.write(f"{u} {v} {lab}\n")
        return len(edges)


def _as_rows(images: Mapping[str, object]) -> tuple[ProductSL2, dict[str, np.ndarray]]:
    first = next(iter(images.values()))
    comps = (first,) if isinstance(first, ModpMatrix) else tuple(first)
    group = ProductSL2([m.p for m in comps])
    rows = {}
    for lab, img in images.items():
        parts = (img,) if isinstance(img, ModpMatrix) else tuple(img)
        rows[lab] = group.element([m.entries for m in parts])
    return group, rows


def build_graph(
    S_p: Union[ReducedGenerators, Mapping[str, object]],
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
    inverse: Optional[Mapping[str, str]] = None,
) -> CayleyGraph:
    """BFS closure of the identity under right multiplication by ``S_p``.

    ``S_p`` maps labels to elements: a ``ModpMatrix`` for one prime or a tuple
    of them for a product of primes.  ``ReducedGenerators`` is accepted as is.
    """
    images = S_p.images if isinstance(S_p, ReducedGenerators) else S_p
    inverse = dict(inverse or INVERSE)
    group, rows = _as_rows(images)
    labels = tuple(images)
    for lab in labels:
        inv = inverse[lab]
        if inv not in rows or not np.array_equal(rows[inv], group.inverse(rows[lab])):
            raise ValueError(f"generating multiset is not closed under inverse at {lab!r}")
    if group.order > vertex_budget:
        raise CapacityError(f"|{group}| = {group.order} exceeds the vertex budget {vertex_budget}")

    vid = np.full(group.order, -1, dtype=np.int32)
    ident = group.identity()[None, :]
    vid[group.index(ident)] = 0
    levels = [ident]
    frontier = ident
    count = 1
    gens = [rows[lab] for lab in labels]
    while len(frontier):
        cand = np.concatenate([group.mul(frontier, g) for g in gens])
        idx = group.index(cand)
        fresh = vid[idx] < 0
        idx_f, first = np.unique(idx[fresh], return_index=True)
        frontier = cand[fresh][first]
        vid[idx_f] = np.arange(count, count + len(idx_f), dtype=np.int32)
        count += len(idx_f)
        if len(frontier):
            levels.append(frontier)
    elements = np.concatenate(levels)
    keys = group.index(elements)
    adjacency = np.empty((len(elements), len(labels)), dtype=np.int32)
    for s, g in enumerate(gens):
        adjacency[:, s] = vid[group.index(group.mul(elements, g))]
    inverse_slot = np.array([labels.index(inverse[lab]) for lab in labels], dtype=np.int64)
    p_desc = group.primes[0] if len(group.primes) == 1 else group.primes
    return CayleyGraph(adjacency, labels, inverse_slot, keys, p_desc, group.order, elements, group)


def abelian_cayley_graph(
    moduli: Sequence[int],
    gens: Mapping[str, Sequence[int]],
    inverse: Mapping[str, str],
) -> CayleyGraph:
    """Cayley graph of Z/m1 x ... x Z/mr; used for small diagnostic graphs (C4, K4, K2)."""
    moduli = tuple(moduli)
    order = int(np.prod(moduli)) if moduli else 1
    labels = tuple(gens)

    def add(x, g):
        return tuple((xi + gi) % m for xi, gi, m in zip(x, g, moduli))

    start = (0,) * len(moduli)
    ids = {start: 0}
    queue = [start]
    for x in queue:
        for lab in labels:
            y = add(x, gens[lab])
            if y not in ids:
                ids[y] = len(ids)
                queue.append(y)
    adjacency = np.array([[ids[add(x, gens[lab])] for lab in labels] for x in queue], dtype=np.int32)
    radix = [int(np.prod(moduli[i + 1 :])) for i in range(len(moduli))]
    keys = np.array([sum(xi * r for xi, r in zip(x, radix)) for x in queue], dtype=np.int64)
    inverse_slot = np.array([labels.index(inverse[lab]) for lab in labels], dtype=np.int64)
    desc = "Z/" + "xZ/".join(str(m) for m in moduli)
    return CayleyGraph(adjacency, labels, inverse_slot, keys, desc, order)


def cycle_graph(n: int) -> CayleyGraph:
    return abelian_cayley_graph([n], {"a": [1], "A": [n - 1]}, {"a": "A", "A": "a"})


def complete_graph_k4() -> CayleyGraph:
    """K4 as the Cayley graph of Z/2 x Z/2 with its three involutions."""
    gens = {"x": [1, 0], "y": [0, 1], "z": [1, 1]}
    return abelian_cayley_graph([2, 2], gens, {g: g for g in gens})


def single_edge_graph() -> CayleyGraph:
    return abelian_cayley_graph([2], {"x": [1]}, {"x": "x"})


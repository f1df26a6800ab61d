"""Specification graphs of partial matrices, chordality and clique trees.

Vertices are 0-based row indices. All algorithms break ties by the smallest
vertex or clique index, so every output is deterministic.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "PatternGraph",
    "ChordalityResult",
    "MergeStep",
    "CliqueTree",
    "pattern_graph",
    "mcs_order",
    "is_chordal",
    "is_perfect_elimination_order",
    "maximal_cliques",
    "clique_tree",
]


@dataclass(frozen=True, eq=False)
class PatternGraph:
    """Undirected simple graph stored as a symmetric boolean adjacency matrix."""

    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if adj.diagonal().any():
            raise ValueError("self-loops are not allowed")
        adj.flags.writeable = False
        object.__setattr__(self, "adjacency", adj)

    @classmethod
    def from_edges(cls, n: int, edges) -> "PatternGraph":
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            adj[i, j] = adj[j, i] = True
        return cls(adj)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def neighbors(self, v: int) -> list[int]:
        return np.flatnonzero(self.adjacency[v]).tolist()

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency))
        return list(zip(i.tolist(), j.tolist()))

    def __eq__(self, other):
        if not isinstance(other, PatternGraph):
            return NotImplemented
        return np.array_equal(self.adjacency, other.adjacency)

    __hash__ = None


class ChordalityResult(NamedTuple):
    chordal: bool
    peo: list[int] | None
    witness: list[int] | None

    def __bool__(self):
        return self.chordal


class MergeStep(NamedTuple):
    """Attach clique ``child`` to the already merged part through ``separator``."""

    parent: int
    child: int
    separator: tuple[int, ...]


@dataclass(frozen=True)
class CliqueTree:
    """Maximal cliques, their intersection graph and a spanning clique tree.

    ``intersection_edges`` lists every pair of cliques with a nonempty
    intersection (the clique graph). ``edges`` is a maximum-weight spanning
    forest of it, and ``merge_order`` visits that forest breadth first from
    the root clique. Further components are attached to the root with an
    empty separator.
    """

    cliques: list[tuple[int, ...]]
    intersection_edges: list[tuple[int, int, tuple[int, ...]]] = field(default_factory=list)
    edges: list[tuple[int, int, tuple[int, ...]]] = field(default_factory=list)
    merge_order: list[MergeStep] = field(default_factory=list)
    root: int = 0

    def running_intersection_holds(self) -> bool:
        if not self.cliques:
            return True
        seen = set(self.cliques[self.root])
        for step in self.merge_order:
            clique = set(self.cliques[step.child])
            if clique & seen != set(step.separator):
                return False
            seen |= clique
        return len(self.merge_order) == len(self.cliques) - 1


def pattern_graph(P) -> PatternGraph:
    """Graph with an edge ``i -- j`` for every specified off-diagonal entry.

    ``P`` is a partial matrix (anything with a ``specified`` mask) or the
    boolean mask itself.
    """
    mask = np.array(getattr(P, "specified", P), dtype=bool)
    if mask.ndim != 2 or mask.shape[0] != mask.shape[1]:
        raise ValueError("specification pattern must be square")
    if not np.array_equal(mask, mask.T):
        raise ValueError("specification pattern is not symmetric")
    if not mask.diagonal().all():
        missing = np.flatnonzero(~mask.diagonal()).tolist()
        raise ValueError(f"diagonal entries {missing} are not specified")
    adj = mask.copy()
    np.fill_diagonal(adj, False)
    return PatternGraph(adj)


def mcs_order(G: PatternGraph) -> list[int]:
    """Maximum cardinality search visiting order.

    Repeatedly visits the unvisited vertex with the most visited neighbours,
    preferring the smallest index on ties. The reverse of this order is a
    perfect elimination order exactly when ``G`` is chordal.
    """
    n = G.n
    weight = np.zeros(n, dtype=int)
    visited = np.zeros(n, dtype=bool)
    order = []
    for _ in range(n):
        v = int(np.argmax(np.where(visited, -1, weight)))
        order.append(v)
        visited[v] = True
        weight[G.adjacency[v]] += 1
    return order


def _peo_violation(G: PatternGraph, peo: Sequence[int]):
    """First ``(v, u, w)`` with ``u, w`` later neighbours of ``v`` but ``u !~ w``, or None."""
    pos = np.empty(G.n, dtype=int)
    pos[list(peo)] = np.arange(G.n)
    adj = G.adjacency
    for v in peo:
        later = [u for u in G.neighbors(v) if pos[u] > pos[v]]
        if not later:
            continue
        parent = min(later, key=lambda u: pos[u])
        for w in later:
            if w != parent and not adj[parent, w]:
                return v, parent, w
    return None


def is_perfect_elimination_order(G: PatternGraph, order: Sequence[int]) -> bool:
    if sorted(order) != list(range(G.n)):
        return False
    return _peo_violation(G, order) is None


def _induced_path(G: PatternGraph, u: int, w: int, blocked: set[int]) -> list[int] | None:
    """Shortest ``u``-``w`` path avoiding ``blocked`` (BFS, smallest-index neighbours first)."""
    prev = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == w:
            path = []
            while x is not None:
                path.append(x)
                x = prev[x]
            return path[::-1]
        for y in G.neighbors(x):
            if y not in prev and y not in blocked:
                prev[y] = x
                queue.append(y)
    return None


def _chordless_cycle_through(G: PatternGraph, v: int, u: int, w: int) -> list[int] | None:
    # a shortest path u..w that avoids v's other neighbours closes a chordless cycle
    blocked = {v} | (set(G.neighbors(v)) - {u, w})
    path = _induced_path(G, u, w, blocked)
    return None if path is None else [v] + path


def _find_chordless_cycle(G: PatternGraph, hint=None) -> list[int]:
    if hint is not None:
        cycle = _chordless_cycle_through(G, *hint)
        if cycle is not None:
            return cycle
    adj = G.adjacency
    for v in range(G.n):
        nbrs = G.neighbors(v)
        for a, u in enumerate(nbrs):
            for w in nbrs[a + 1:]:
                if not adj[u, w]:
                    cycle = _chordless_cycle_through(G, v, u, w)
                    if cycle is not None:
                        return cycle
    raise AssertionError("graph failed the PEO test but has no chordless cycle")


def is_chordal(G: PatternGraph) -> ChordalityResult:
    """Decide chordality.

    Returns a perfect elimination order (the reversed MCS order) when ``G`` is
    chordal and otherwise a chordless cycle of length at least four, listed
    in cycle order.
    """
    peo = mcs_order(G)[::-1]
    bad = _peo_violation(G, peo)
    if bad is None:
        return ChordalityResult(True, peo, None)
    return ChordalityResult(False, None, _find_chordless_cycle(G, bad))


def maximal_cliques(G: PatternGraph, peo: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """Maximal cliques of a chordal graph from a perfect elimination order.

    Each clique is a sorted tuple and the list is sorted lexicographically.
    Raises ``ValueError`` if ``peo`` is not a perfect elimination order.
    """
    if peo is None:
        result = is_chordal(G)
        if not result.chordal:
            raise ValueError(f"graph is not chordal (chordless cycle {result.witness})")
        peo = result.peo
    peo = list(peo)
    if not is_perfect_elimination_order(G, peo):
        raise ValueError("not a perfect elimination order")
    pos = {v: i for i, v in enumerate(peo)}
    candidates = {
        tuple(sorted([v] + [u for u in G.neighbors(v) if pos[u] > pos[v]])) for v in peo
    }
    sets = [(c, set(c)) for c in candidates]
    cliques = [c for c, s in sets if not any(s < t for _, t in sets)]
    return sorted(cliques)


class _DisjointSets:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def clique_tree(cliques: Sequence[Sequence[int]], root: int = 0) -> CliqueTree:
    """Maximum-weight spanning tree of the clique intersection graph.

    Edge weights are separator sizes; ties go to the lexicographically
    smaller clique index pair. For the maximal cliques of a chordal graph the
    result has the running intersection property, which makes
    ``merge_order`` a valid schedule for block completion. The breadth-first
    traversal starts at clique ``root``.
    """
    cliques = [tuple(sorted(c)) for c in cliques]
    m = len(cliques)
    sets = [set(c) for c in cliques]
    gamma = []
    for i in range(m):
        for j in range(i + 1, m):
            sep = tuple(sorted(sets[i] & sets[j]))
            if sep:
                gamma.append((i, j, sep))

    ds = _DisjointSets(m)
    tree = [e for e in sorted(gamma, key=lambda e: (-len(e[2]), e[0], e[1])) if ds.union(e[0], e[1])]

    nbrs: dict[int, list[tuple[int, tuple[int, ...]]]] = {i: [] for i in range(m)}
    for i, j, sep in tree:
        nbrs[i].append((j, sep))
        nbrs[j].append((i, sep))
    if m and not 0 <= root < m:
        raise ValueError(f"root {root} is not a clique index")
    merge_order = []
    visited = [False] * m
    for start in ([root] + list(range(m))) if m else []:
        if visited[start]:
            continue
        if start != root:
            merge_order.append(MergeStep(root, start, ()))
        visited[start] = True
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y, sep in sorted(nbrs[x]):
                if not visited[y]:
                    visited[y] = True
                    merge_order.append(MergeStep(x, y, sep))
                    queue.append(y)
    return CliqueTree(cliques, gamma, tree, merge_order, root)

"""Weighted undirected graphs with dense integer vertex labels.

Vertices are always labelled 0..n-1. Reductions that drop vertices return a
relabelling map alongside the new graph so traces stay auditable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InputError


def _pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph on vertices 0..n-1 with real edge weights.

    Parameters
    ----------
    n : int
        Vertex count.
    edges : dict[tuple[int, int], float]
        Weight per unordered pair, each pair stored once with i < j.
    """

    n: int
    edges: dict[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise InputError("vertex count must be nonnegative")
        normalized = {}
        for (i, j), w in self.edges.items():
            if i == j:
                raise InputError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InputError(f"edge ({i},{j}) outside 0..{self.n - 1}")
            key = _pair(i, j)
            if key in normalized:
                raise InputError(f"duplicate edge {key}")
            if not math.isfinite(w):
                raise InputError(f"non-finite weight on edge {key}")
            normalized[key] = float(w)
        object.__setattr__(self, "edges", normalized)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[dict[int, float]]:
        """Neighbor -> weight map per vertex."""
        adj: list[dict[int, float]] = [dict() for _ in range(self.n)]
        for (i, j), w in self.edges.items():
            adj[i][j] = w
            adj[j][i] = w
        return adj

    def neighbors(self, v: int) -> list[int]:
        if not 0 <= v < self.n:
            raise InputError(f"vertex {v} outside 0..{self.n - 1}")
        out = set()
        for i, j in self.edges:
            if i == v:
                out.add(j)
            elif j == v:
                out.add(i)
        return sorted(out)

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2


def connected_components(g: WeightedGraph, removed: frozenset[int] | set[int] = frozenset()) -> list[list[int]]:
    """Connected components of ``g`` with ``removed`` vertices deleted.

    Components are sorted by their minimum vertex label and each is sorted
    ascending, so the output is deterministic.
    """
    removed = set(removed)
    adj = g.adjacency()
    seen = set(removed)
    components = []
    for start in range(g.n):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        components.append(sorted(comp))
    components.sort(key=lambda c: c[0])
    return components


def is_connected(g: WeightedGraph) -> bool:
    if g.n == 0:
        return True
    return len(connected_components(g)) == 1


def induced_subgraph(g: WeightedGraph, vertices) -> tuple[WeightedGraph, dict[int, int]]:
    """Subgraph on ``vertices`` with dense relabelling.

    Returns the relabelled graph together with the old-to-new vertex map;
    new labels follow the ascending order of the old ones.
    """
    keep = sorted(set(vertices))
    if any(not 0 <= v < g.n for v in keep):
        raise InputError("induced vertex set not contained in the graph")
    to_new = {old: new for new, old in enumerate(keep)}
    edges = {
        (_pair(to_new[i], to_new[j])): w
        for (i, j), w in g.edges.items()
        if i in to_new and j in to_new
    }
    return WeightedGraph(len(keep), edges), to_new


def read_graph(path) -> WeightedGraph:
    """Parse the text format: header ``n m`` then ``m`` lines ``i j w``."""
    with open(path) as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise InputError(f"{path}: missing graph header")
    try:
        n, m = int(tokens[0]), int(tokens[1])
    except ValueError as exc:
        raise InputError(f"{path}: bad header") from exc
    if len(tokens) != 2 + 3 * m:
        raise InputError(f"{path}: expected {m} edge lines")
    edges = {}
    for e in range(m):
        i, j, w = tokens[2 + 3 * e : 5 + 3 * e]
        try:
            i, j, w = int(i), int(j), float(w)
        except ValueError as exc:
            raise InputError(f"{path}: bad edge line {e}") from exc
        if not math.isfinite(w):
            raise InputError(f"{path}: non-finite weight on edge {e}")
        edges[_pair(i, j)] = w
    return WeightedGraph(n, edges)


def write_graph(g: WeightedGraph, path) -> None:
    lines = [f"{g.n} {g.m}"]
    for (i, j), w in sorted(g.edges.items()):
        lines.append(f"{i} {j} {w!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")

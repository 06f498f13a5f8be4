"""Vertex cut sets: global minimum separators via max-flow, plus the
min-degree neighborhood fallback.

Connectivity is purely structural here; edge weights never influence which
separator is found. All tie-breaks are deterministic (lexicographically
smallest sorted separator) so repeated runs produce identical traces.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, NoCutError, NotACutError
from .graphs import WeightedGraph, connected_components, is_connected

GLOBAL_MIN = "global-min"
MIN_DEGREE_NEIGHBORHOOD = "min-degree-neighborhood"
CUT_STRATEGIES = (GLOBAL_MIN, MIN_DEGREE_NEIGHBORHOOD)


@dataclass(frozen=True)
class CutPartition:
    """A separator and the two sides it leaves behind.

    ``larger`` and ``smaller`` partition the non-separator vertices, no edge
    joins them, and ``len(larger) >= len(smaller)``. When removal yields more
    than two components, ``smaller`` is the single smallest component and
    ``larger`` absorbs the rest.
    """

    separator: tuple[int, ...]
    larger: tuple[int, ...]
    smaller: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "separator", tuple(sorted(self.separator)))
        object.__setattr__(self, "larger", tuple(sorted(self.larger)))
        object.__setattr__(self, "smaller", tuple(sorted(self.smaller)))


def split_components(g: WeightedGraph, separator) -> CutPartition:
    """Partition the graph around ``separator``.

    The smallest remaining component (ties: smallest minimum label) becomes
    ``smaller``; every other component is merged into ``larger``.
    """
    separator = set(separator)
    if any(not 0 <= v < g.n for v in separator):
        raise InputError("separator names vertices outside the graph")
    components = connected_components(g, removed=separator)
    if not components:
        raise NotACutError("separator removes every vertex")
    if len(components) < 2:
        raise NotACutError(f"removing {sorted(separator)} leaves the graph connected")
    smallest = min(components, key=lambda c: (len(c), c[0]))
    rest = [v for comp in components if comp is not smallest for v in comp]
    return CutPartition(tuple(separator), tuple(rest), tuple(smallest))


class _FlowNetwork:
    """Edmonds-Karp max-flow on an adjacency-list network."""

    def __init__(self, size: int):
        self.size = size
        self.targets: list[list[int]] = [[] for _ in range(size)]
        self.caps: list[list[int]] = [[] for _ in range(size)]
        self.rev: list[list[int]] = [[] for _ in range(size)]

    def add_edge(self, u: int, v: int, cap: int) -> None:
        self.targets[u].append(v)
        self.caps[u].append(cap)
        self.rev[u].append(len(self.targets[v]))
        self.targets[v].append(u)
        self.caps[v].append(0)
        self.rev[v].append(len(self.targets[u]) - 1)

    def max_flow(self, source: int, sink: int, limit: int) -> int:
        flow = 0
        while flow < limit:
            parent_edge = [-1] * self.size
            parent_node = [-1] * self.size
            parent_node[source] = source
            queue = [source]
            head = 0
            while head < len(queue) and parent_node[sink] == -1:
                u = queue[head]
                head += 1
                for idx, v in enumerate(self.targets[u]):
                    if parent_node[v] == -1 and self.caps[u][idx] > 0:
                        parent_node[v] = u
                        parent_edge[v] = idx
                        queue.append(v)
            if parent_node[sink] == -1:
                break
            # Unit augmentation: every source-sink path crosses a capacity-1
            # vertex-split edge, so the bottleneck is always 1.
            v = sink
            while v != source:
                u = parent_node[v]
                idx = parent_edge[v]
                self.caps[u][idx] -= 1
                self.caps[v][self.rev[u][idx]] += 1
                v = u
            flow += 1
        return flow

    def reachable(self, source: int) -> list[bool]:
        seen = [False] * self.size
        seen[source] = True
        stack = [source]
        while stack:
            u = stack.pop()
            for idx, v in enumerate(self.targets[u]):
                if self.caps[u][idx] > 0 and not seen[v]:
                    seen[v] = True
                    stack.append(v)
        return seen


def _pair_separator(g: WeightedGraph, s: int, t: int) -> tuple[int, ...]:
    """Minimum vertex set separating non-adjacent s and t.

    Each vertex x is split into in-node 2x and out-node 2x+1 joined by a
    unit-capacity edge; graph edges get effectively unbounded capacity in
    both directions. Saturated split edges on the source side of the
    residual cut are the separator.
    """
    big = g.n + 1
    net = _FlowNetwork(2 * g.n)
    for x in range(g.n):
        net.add_edge(2 * x, 2 * x + 1, 1)
    for i, j in sorted(g.edges):
        net.add_edge(2 * i + 1, 2 * j, big)
        net.add_edge(2 * j + 1, 2 * i, big)
    net.max_flow(2 * s + 1, 2 * t, limit=g.n)
    seen = net.reachable(2 * s + 1)
    return tuple(x for x in range(g.n) if seen[2 * x] and not seen[2 * x + 1])


def min_vertex_cut(g: WeightedGraph) -> CutPartition:
    """Minimum-cardinality vertex separator of a connected, non-complete graph.

    Probes max-flow between a fixed minimum-degree vertex and every
    non-neighbor, then between non-adjacent pairs inside its neighborhood;
    the smallest separator wins, ties broken lexicographically.
    """
    if g.n < 2:
        raise InputError("need at least two vertices to cut")
    if not is_connected(g):
        raise InputError("minimum cut requires a connected graph; pass components separately")
    if g.is_complete():
        raise NoCutError("complete graphs have no vertex cut set")
    adj = g.adjacency()
    anchor = min(range(g.n), key=lambda v: (len(adj[v]), v))
    nbrs = sorted(adj[anchor])
    pairs = [(anchor, w) for w in range(g.n) if w != anchor and w not in adj[anchor]]
    pairs += [
        (x, y)
        for xi, x in enumerate(nbrs)
        for y in nbrs[xi + 1 :]
        if y not in adj[x]
    ]
    best: tuple[int, ...] | None = None
    for s, t in pairs:
        sep = _pair_separator(g, s, t)
        if best is None or (len(sep), sep) < (len(best), best):
            best = sep
    if best is None:
        raise NoCutError("no non-adjacent vertex pair to separate")
    return split_components(g, best)


def neighborhood_cut(g: WeightedGraph, v: int) -> CutPartition:
    """Use N(v) as the separator, isolating v on the small side."""
    if not 0 <= v < g.n:
        raise InputError(f"vertex {v} outside 0..{g.n - 1}")
    if not is_connected(g):
        raise InputError("neighborhood cut requires a connected graph")
    nbrs = g.neighbors(v)
    if len(nbrs) + 1 >= g.n:
        raise NoCutError(f"the closed neighborhood of {v} covers the whole graph")
    components = connected_components(g, removed=set(nbrs))
    small = next(c for c in components if v in c)
    rest = [u for comp in components if comp is not small for u in comp]
    return CutPartition(tuple(nbrs), tuple(rest), tuple(small))


def choose_cut(g: WeightedGraph, strategy: str = GLOBAL_MIN) -> CutPartition:
    """Dispatch to a cut strategy.

    ``min-degree-neighborhood`` cuts around a minimum-degree vertex
    (smallest label on ties); ``global-min`` finds a true minimum separator.
    """
    if strategy == GLOBAL_MIN:
        return min_vertex_cut(g)
    if strategy == MIN_DEGREE_NEIGHBORHOOD:
        adj = g.adjacency()
        v = min(range(g.n), key=lambda u: (len(adj[u]), u))
        return neighborhood_cut(g, v)
    raise InputError(f"unknown cut strategy {strategy!r}; expected one of {CUT_STRATEGIES}")

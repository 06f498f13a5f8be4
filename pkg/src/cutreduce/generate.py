"""Random regular graph generation by stub pairing.

Each vertex contributes k stubs. Shuffled stubs are paired up; pairs that
would create a self-loop or repeated edge put their stubs back into the
pool, and the pool is reshuffled until it empties or no valid pair can be
formed. Draws that get stuck or come out disconnected are rejected
wholesale. Weights are 1.
"""

from __future__ import annotations

from collections import defaultdict

from .errors import GenerationError, InputError
from .graphs import WeightedGraph, is_connected
from .rng import substream

MAX_REJECTIONS = 1000


def _has_usable_pair(edges, leftover_counts) -> bool:
    if not leftover_counts:
        return True
    nodes = list(leftover_counts)
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            i, j = sorted((nodes[a], nodes[b]))
            if (i, j) not in edges:
                return True
    return False


def _pairing_attempt(n: int, k: int, rng) -> set[tuple[int, int]] | None:
    edges: set[tuple[int, int]] = set()
    stubs = list(range(n)) * k
    while stubs:
        leftover: dict[int, int] = defaultdict(int)
        rng.shuffle(stubs)
        stub_iter = iter(stubs)
        for a, b in zip(stub_iter, stub_iter):
            i, j = (a, b) if a < b else (b, a)
            if i != j and (i, j) not in edges:
                edges.add((i, j))
            else:
                leftover[i] += 1
                leftover[j] += 1
        if not _has_usable_pair(edges, leftover):
            return None
        stubs = [node for node, count in leftover.items() for _ in range(count)]
    return edges


def generate_regular(n: int, k: int, seed: int = 0) -> WeightedGraph:
    """Uniform-ish random simple connected k-regular graph on n vertices."""
    if k >= n or k < 0 or n < 1:
        raise InputError(f"need 0 <= k < n, got n={n} k={k}")
    if (n * k) % 2 != 0:
        raise InputError(f"n*k must be even, got n={n} k={k}")
    rng = substream(seed, "regular", n, k)
    for _ in range(MAX_REJECTIONS):
        edges = _pairing_attempt(n, k, rng)
        if edges is None:
            continue
        g = WeightedGraph(n, {e: 1.0 for e in edges})
        if is_connected(g):
            return g
    raise GenerationError(
        f"no simple connected {k}-regular graph on {n} vertices after {MAX_REJECTIONS} draws"
    )

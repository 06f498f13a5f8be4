"""Shared fixtures and independent oracle evaluators.

The oracles here deliberately avoid the package's vectorized paths: they
are plain Python loops over explicit definitions, so agreement with them
is meaningful.
"""

from __future__ import annotations

import itertools

import pytest

from cutreduce.graphs import WeightedGraph
from cutreduce.qubo import QuboInstance


def naive_symmetric_value(inst: QuboInstance, z) -> float:
    """Objective via the symmetric double sum over ordered pairs."""
    n = inst.n
    sym = [[0.0] * n for _ in range(n)]
    for (i, j), v in inst.quad.items():
        sym[i][j] += v / 2.0
        sym[j][i] += v / 2.0
    total = inst.offset
    for i in range(n):
        for j in range(n):
            if i != j:
                total += sym[i][j] * z[i] * z[j]
        total += inst.lin.get(i, 0.0) * z[i]
    return total


def naive_cut_value(g: WeightedGraph, z) -> float:
    """Cut weight by direct edge scan."""
    return sum(w for (i, j), w in g.edges.items() if z[i] != z[j])


def brute_force_max(inst: QuboInstance) -> tuple[float, tuple[int, ...]]:
    """Independent slow maximization: plain loops, lexicographic scan."""
    best_value, best_z = None, None
    for z in itertools.product((0, 1), repeat=inst.n):
        value = inst.offset
        for (i, j), v in inst.quad.items():
            value += v * z[i] * z[j]
        for i, v in inst.lin.items():
            value += v * z[i]
        if best_value is None or value > best_value:
            best_value, best_z = value, z
    return best_value, best_z


@pytest.fixture
def bipartite_worked_example() -> WeightedGraph:
    """K33 with parts {0,1,2} and {3,4,5}; unit weights, optimum 9.

    Labelled so the lexicographically smallest minimum separator is
    {0, 1, 2} and the isolated small side is vertex 3.
    """
    edges = {
        (0, 3): 1.0,
        (1, 3): 1.0,
        (2, 3): 1.0,
        (0, 4): 1.0,
        (0, 5): 1.0,
        (1, 4): 1.0,
        (1, 5): 1.0,
        (2, 4): 1.0,
        (2, 5): 1.0,
    }
    return WeightedGraph(6, edges)


@pytest.fixture
def triangle_with_pendants() -> WeightedGraph:
    """Triangle 0-2-3 with pendant 1 off vertex 0 and pendant 4 off vertex 2.

    Two articulation vertices (0 and 2), so the minimum separator has size
    one with a lexicographic tie-break.
    """
    return WeightedGraph(5, {(0, 1): 1.0, (0, 2): 1.0, (0, 3): 1.0, (2, 3): 1.0, (2, 4): 1.0})


@pytest.fixture
def cube_graph() -> WeightedGraph:
    """3-regular graph on 8 vertices (two squares joined by a rung matching)."""
    rings = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4)]
    rungs = [(0, 4), (1, 5), (2, 6), (3, 7)]
    return WeightedGraph(8, {e: 1.0 for e in rings + rungs})


@pytest.fixture
def path3() -> WeightedGraph:
    return WeightedGraph(3, {(0, 1): 1.0, (1, 2): 1.0})

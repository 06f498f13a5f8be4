"""Minimum vertex cuts, neighborhood cuts, and the strategy dispatcher."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from cutreduce.cutset import (
    GLOBAL_MIN,
    MIN_DEGREE_NEIGHBORHOOD,
    choose_cut,
    min_vertex_cut,
    neighborhood_cut,
)
from cutreduce.errors import InputError, NoCutError
from cutreduce.graphs import WeightedGraph, connected_components, is_connected


def exhaustive_min_cut_size(g: WeightedGraph) -> int | None:
    """Smallest separator size by trying every vertex subset, small first."""
    for size in range(1, g.n - 1):
        for subset in itertools.combinations(range(g.n), size):
            remaining = connected_components(g, removed=set(subset))
            if len(remaining) >= 2:
                return size
    return None


def random_connected_graph(rng, n_max=12) -> WeightedGraph:
    while True:
        n = int(rng.integers(4, n_max + 1))
        p = rng.uniform(0.25, 0.5)
        edges = {
            (i, j): 1.0
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < p
        }
        g = WeightedGraph(n, edges)
        if is_connected(g) and not g.is_complete():
            return g


class TestMinVertexCut:
    def test_path_articulation(self, path3):
        assert min_vertex_cut(path3).separator == (1,)

    def test_tie_breaks_lexicographically(self, triangle_with_pendants):
        # Vertices 0 and 2 are both articulation points; 0 wins.
        part = min_vertex_cut(triangle_with_pendants)
        assert part.separator == (0,)
        assert part.smaller == (1,)
        assert part.larger == (2, 3, 4)

    def test_bipartite_worked_example(self, bipartite_worked_example):
        part = min_vertex_cut(bipartite_worked_example)
        assert len(part.separator) == 3
        assert part.separator == (0, 1, 2)
        assert part.smaller == (3,)

    def test_cycle_connectivity_two(self):
        c5 = WeightedGraph(5, {(i, (i + 1) % 5): 1.0 for i in range(5)})
        assert len(min_vertex_cut(c5).separator) == 2

    def test_complete_graph_has_no_cut(self):
        k4 = WeightedGraph(4, {(i, j): 1.0 for i in range(4) for j in range(i + 1, 4)})
        with pytest.raises(NoCutError):
            min_vertex_cut(k4)

    def test_disconnected_input_rejected(self):
        g = WeightedGraph(4, {(0, 1): 1.0, (2, 3): 1.0})
        with pytest.raises(InputError):
            min_vertex_cut(g)

    def test_matches_exhaustive_oracle_on_random_graphs(self):
        rng = np.random.default_rng(10)
        for _ in range(25):
            g = random_connected_graph(rng, n_max=10)
            part = min_vertex_cut(g)
            assert len(part.separator) == exhaustive_min_cut_size(g)

    def test_returned_separator_always_separates(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            g = random_connected_graph(rng)
            part = min_vertex_cut(g)
            components = connected_components(g, removed=set(part.separator))
            assert len(components) >= 2
            sides = {v: 0 for v in part.larger}
            sides.update({v: 1 for v in part.smaller})
            for (i, j) in g.edges:
                if i in sides and j in sides:
                    assert sides[i] == sides[j]


class TestNeighborhoodCut:
    def test_isolates_the_chosen_vertex(self, bipartite_worked_example):
        part = neighborhood_cut(bipartite_worked_example, 3)
        assert part.separator == (0, 1, 2)
        assert part.smaller == (3,)

    def test_star_leaf(self):
        star = WeightedGraph(5, {(0, i): 1.0 for i in range(1, 5)})
        part = neighborhood_cut(star, 3)
        assert part.separator == (0,)
        assert part.smaller == (3,)

    def test_cube_every_vertex(self, cube_graph):
        for v in range(8):
            part = neighborhood_cut(cube_graph, v)
            assert len(part.separator) == 3
            assert part.smaller == (v,)

    def test_covering_neighborhood_rejected(self):
        k4 = WeightedGraph(4, {(i, j): 1.0 for i in range(4) for j in range(i + 1, 4)})
        with pytest.raises(NoCutError):
            neighborhood_cut(k4, 0)


class TestChooseCut:
    def test_global_min_strategy(self, triangle_with_pendants):
        assert choose_cut(triangle_with_pendants, GLOBAL_MIN).separator == (0,)

    def test_neighborhood_strategy_picks_min_degree(self, cube_graph):
        part = choose_cut(cube_graph, MIN_DEGREE_NEIGHBORHOOD)
        # All degrees equal: vertex 0 wins the tie, so its neighbors cut.
        assert part.smaller == (0,)
        assert len(part.separator) == 3

    def test_cycle_strategy_comparison(self):
        c5 = WeightedGraph(5, {(i, (i + 1) % 5): 1.0 for i in range(5)})
        assert len(choose_cut(c5, GLOBAL_MIN).separator) == 2
        assert len(choose_cut(c5, MIN_DEGREE_NEIGHBORHOOD).separator) == 2

    def test_unknown_strategy_rejected(self, path3):
        with pytest.raises(InputError):
            choose_cut(path3, "bisection")

"""Random regular graph generation."""

from __future__ import annotations

import pytest

from cutreduce.errors import InputError
from cutreduce.generate import generate_regular
from cutreduce.graphs import is_connected


class TestGenerateRegular:
    def test_unique_three_regular_on_four_vertices(self):
        g = generate_regular(4, 3, seed=0)
        assert g.m == 6
        assert set(g.edges) == {(i, j) for i in range(4) for j in range(i + 1, 4)}

    def test_degrees_and_connectivity(self):
        for seed in range(5):
            g = generate_regular(20, 3, seed=seed)
            assert all(g.degree(v) == 3 for v in range(20))
            assert is_connected(g)
            assert all(w == 1.0 for w in g.edges.values())

    def test_odd_parity_rejected(self):
        with pytest.raises(InputError):
            generate_regular(5, 3, seed=0)

    def test_degree_bound_rejected(self):
        with pytest.raises(InputError):
            generate_regular(4, 4, seed=0)

    def test_deterministic_per_seed(self):
        assert generate_regular(16, 3, seed=11) == generate_regular(16, 3, seed=11)
        assert generate_regular(16, 3, seed=11) != generate_regular(16, 3, seed=12)

"""Reweighting systems: assembly, exact solve, LP fallback, application."""

from __future__ import annotations

import numpy as np
import pytest

from cutreduce.cutset import CutPartition, min_vertex_cut, neighborhood_cut
from cutreduce.generate import generate_regular
from cutreduce.graphs import WeightedGraph, is_connected
from cutreduce.qubo import QuboInstance, evaluate_all, maxcut_to_qubo
from cutreduce.reweight import (
    MODE_CUTFORM,
    MODE_PRODUCT,
    apply_reweight,
    build_rows,
    reweight,
    solve_exact,
    solve_lp,
)
from cutreduce.subsolver import BackendChoice, SubproblemTable, TableRow, build_table


def region_maxcut(g: WeightedGraph, part: CutPartition) -> QuboInstance:
    region = set(part.separator) | set(part.smaller)
    edges = {k: w for k, w in g.edges.items() if set(k) <= region}
    return maxcut_to_qubo(WeightedGraph(g.n, edges))


def table_for(g: WeightedGraph, part: CutPartition) -> SubproblemTable:
    return build_table(region_maxcut(g, part), part)


def handmade_table(order, totals) -> SubproblemTable:
    rows = {s: TableRow(value=float(t), constant=0.0) for s, t in enumerate(totals)}
    return SubproblemTable(tuple(order), (), rows)


class TestBuildRows:
    def test_worked_example_cutform_rows(self, bipartite_worked_example):
        part = min_vertex_cut(bipartite_worked_example)
        system = build_rows(table_for(bipartite_worked_example, part), MODE_CUTFORM)
        assert system.pair_columns == ((0, 1), (0, 2), (1, 2))
        assert system.matrix.shape == (4, 4)
        # Classes 000, 001, 010, 011; columns (0,1), (0,2), (1,2), constant.
        expected = np.array(
            [
                [0, 0, 0, 1],
                [0, 1, 1, 1],
                [1, 0, 1, 1],
                [1, 1, 0, 1],
            ],
            dtype=float,
        )
        assert np.array_equal(system.matrix, expected)
        assert list(system.rhs) == [3.0, 2.0, 2.0, 2.0]

    def test_cutform_complement_rows_identical(self, bipartite_worked_example):
        part = min_vertex_cut(bipartite_worked_example)
        table = table_for(bipartite_worked_example, part)
        system = build_rows(table, MODE_CUTFORM)
        mask = 2 ** len(table.fixing_order) - 1
        for s in range(2 ** len(table.fixing_order)):
            assert system.row_of[s] == system.row_of[s ^ mask]

    def test_single_vertex_separator_product(self):
        table = handmade_table([4], [1.5, 2.5])
        system = build_rows(table, MODE_PRODUCT)
        assert system.pair_columns == ()
        assert system.single_columns == (4,)
        assert np.array_equal(system.matrix, np.array([[0.0, 1.0], [1.0, 1.0]]))
        assert list(system.rhs) == [1.5, 2.5]

    def test_two_vertex_separator_cutform_dedups(self):
        table = handmade_table([2, 5], [4.0, 6.0, 6.0, 4.0])
        system = build_rows(table, MODE_CUTFORM)
        assert system.matrix.shape == (2, 2)
        assert list(system.rhs) == [4.0, 6.0]


class TestSolveExact:
    def test_worked_example_weights(self, bipartite_worked_example):
        part = min_vertex_cut(bipartite_worked_example)
        system = build_rows(table_for(bipartite_worked_example, part), MODE_CUTFORM)
        result = solve_exact(system)
        assert result is not None and result.exact
        assert result.constant == pytest.approx(3.0, abs=1e-9)
        for pair in ((0, 1), (0, 2), (1, 2)):
            assert result.quad[pair] == pytest.approx(-0.5, abs=1e-9)
        assert result.lin == {}

    def test_constant_table_gives_zero_weights(self):
        table = handmade_table([0, 1, 2], [7.0] * 8)
        result = solve_exact(build_rows(table, MODE_CUTFORM))
        assert result is not None
        assert all(abs(v) < 1e-9 for v in result.quad.values())
        assert result.constant == pytest.approx(7.0)

    def test_random_three_separator_tables_solve_exactly(self):
        rng = np.random.default_rng(40)
        found = 0
        while found < 8:
            n = int(rng.integers(6, 11))
            edges = {
                (i, j): float(rng.integers(1, 5))
                for i in range(n)
                for j in range(i + 1, n)
                if rng.random() < 0.4
            }
            g = WeightedGraph(n, edges)
            if not is_connected(g) or g.is_complete():
                continue
            part = min_vertex_cut(g)
            if len(part.separator) > 3:
                continue
            system = build_rows(table_for(g, part), MODE_CUTFORM)
            result = solve_exact(system)
            assert result is not None and result.exact
            residual = system.rhs - system.matrix @ _vector_of(system, result)
            assert np.max(np.abs(residual)) <= 1e-9
            found += 1

    def test_inconsistent_system_reports_none(self):
        # Separator of four with targets outside the cut-quadratic family.
        rng = np.random.default_rng(41)
        totals = rng.integers(0, 40, size=16).astype(float)
        totals = 0.5 * (totals + totals[::-1])  # symmetrize complements
        table = handmade_table([0, 1, 2, 3], totals)
        system = build_rows(table, MODE_CUTFORM)
        assert solve_exact(system) is None


def _vector_of(system, result):
    x = []
    for pair in system.pair_columns:
        x.append(result.quad.get(pair, 0.0))
    for v in system.single_columns:
        x.append(result.lin.get(v, 0.0))
    x.append(result.constant)
    return np.array(x)


class TestSolveLp:
    def test_solvable_system_has_zero_error(self, bipartite_worked_example):
        part = min_vertex_cut(bipartite_worked_example)
        system = build_rows(table_for(bipartite_worked_example, part), MODE_CUTFORM)
        result = solve_lp(system)
        assert result.error_sum() == pytest.approx(0.0, abs=1e-9)
        assert result.constant == pytest.approx(3.0, abs=1e-7)

    def test_single_row_perturbation_costs_at_most_one(self, bipartite_worked_example):
        part = min_vertex_cut(bipartite_worked_example)
        table = table_for(bipartite_worked_example, part)
        rows = dict(table.rows)
        bumped = dict(rows)
        bumped[0] = TableRow(rows[0].value + 1.0, rows[0].constant, rows[0].witness)
        bumped[7] = TableRow(rows[7].value + 1.0, rows[7].constant, rows[7].witness)
        table2 = SubproblemTable(table.fixing_order, table.free_order, bumped)
        result = solve_lp(build_rows(table2, MODE_CUTFORM))
        assert result.error_sum() <= 1.0 + 1e-7

    def test_contract_on_wide_separators(self):
        # Separators of 4..7 vertices from neighborhood cuts of regular graphs.
        for k, n, seed in [(4, 12, 1), (5, 12, 2), (6, 13, 3), (7, 12, 4)]:
            g = generate_regular(n, k, seed=seed)
            part = neighborhood_cut(g, 0)
            assert len(part.separator) == k
            system = build_rows(table_for(g, part), MODE_CUTFORM)
            result = solve_lp(system)
            assert all(e >= -1e-12 for e in result.errors.values())
            residual = system.rhs - system.matrix @ _vector_of(system, result)
            # Equality residuals: coefficients + error must reproduce targets.
            for s, r in system.row_of.items():
                assert abs(residual[r] - result.errors[s]) <= 1e-7

    def test_negative_targets_still_feasible(self):
        table = handmade_table([0, 1], [-3.0, -1.0, -1.0, -3.0])
        result = solve_lp(build_rows(table, MODE_CUTFORM))
        assert all(e >= -1e-12 for e in result.errors.values())
        assert result.error_sum() == pytest.approx(0.0, abs=1e-9)


class TestApplyReweight:
    def test_worked_example_reduction(self, bipartite_worked_example):
        part = min_vertex_cut(bipartite_worked_example)
        result = reweight(table_for(bipartite_worked_example, part), MODE_CUTFORM)
        reduced, constant, to_new = apply_reweight(bipartite_worked_example, part, result)
        assert constant == pytest.approx(3.0, abs=1e-9)
        assert reduced.n == 5
        assert to_new == {0: 0, 1: 1, 2: 2, 4: 3, 5: 4}
        for pair in ((0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)):
            assert reduced.edges[pair] == 1.0
        for pair in ((0, 1), (0, 2), (1, 2)):
            assert reduced.edges[pair] == pytest.approx(-0.5, abs=1e-9)
        best = evaluate_all(maxcut_to_qubo(reduced)).max()
        assert best == pytest.approx(6.0, abs=1e-9)
        assert best + constant == pytest.approx(9.0, abs=1e-9)

    def test_zero_weights_pruned(self):
        table = handmade_table([0, 1], [5.0, 5.0, 5.0, 5.0])
        g = WeightedGraph(4, {(0, 2): 1.0, (1, 2): 1.0, (0, 3): 1.0, (1, 3): 1.0, (0, 1): 2.0})
        part = CutPartition(separator=(0, 1), larger=(2,), smaller=(3,))
        result = reweight(table, MODE_CUTFORM)
        reduced, constant, _ = apply_reweight(g, part, result)
        assert constant == pytest.approx(5.0)
        assert (0, 1) not in reduced.edges  # replaced by a zero, hence pruned

    def test_single_iteration_oracle_equivalence(self):
        rng = np.random.default_rng(42)
        checked = 0
        while checked < 10:
            n = int(rng.integers(6, 11))
            edges = {
                (i, j): float(rng.integers(-2, 5)) or 1.0
                for i in range(n)
                for j in range(i + 1, n)
                if rng.random() < 0.35
            }
            g = WeightedGraph(n, edges)
            if not is_connected(g) or g.is_complete():
                continue
            part = min_vertex_cut(g)
            if len(part.separator) > 3:
                continue
            result = reweight(table_for(g, part), MODE_CUTFORM)
            assert result.exact
            reduced, constant, _ = apply_reweight(g, part, result)
            original_best = evaluate_all(maxcut_to_qubo(g)).max()
            reduced_best = evaluate_all(maxcut_to_qubo(reduced)).max()
            assert reduced_best + constant == pytest.approx(original_best, abs=1e-9)
            checked += 1

    def test_product_reweight_on_qubo_replaces_separator_lins(self):
        inst = QuboInstance(
            4,
            {(0, 1): 2.0, (0, 2): 1.0, (1, 2): -1.0, (2, 3): 1.0, (0, 3): 1.0},
            {0: 1.0, 1: -1.0, 2: 0.5, 3: 2.0},
            0.25,
        )
        part = CutPartition(separator=(0, 2), larger=(1,), smaller=(3,))
        table = build_table(inst, part)
        result = reweight(table, MODE_PRODUCT)
        reduced, constant, to_new = apply_reweight(inst, part, result)
        assert reduced.n == 3
        assert reduced.offset == inst.offset
        # Optimal values must agree when the system solved exactly.
        if result.exact:
            assert evaluate_all(reduced).max() + constant == pytest.approx(
                evaluate_all(inst).max(), abs=1e-9
            )

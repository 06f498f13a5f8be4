"""Dense two-phase simplex for the tiny equality-form LPs this package builds.

Minimizes c.x subject to A x = b, x >= 0. Bland's smallest-index rule is
used for both the entering and leaving choices, which rules out cycling.
Problems here never exceed a few hundred rows/columns, so a dense tableau
is the simplest reliable tool.
"""

from __future__ import annotations

import numpy as np

from .errors import CutReduceError

_TOL = 1e-9


class SimplexError(CutReduceError):
    """Infeasible or unbounded program (neither occurs for well-formed callers)."""


def _pivot(table: np.ndarray, rhs: np.ndarray, basis: list[int], row: int, col: int) -> None:
    piv = table[row, col]
    table[row] /= piv
    rhs[row] /= piv
    for r in range(table.shape[0]):
        if r != row and table[r, col] != 0.0:
            factor = table[r, col]
            table[r] -= factor * table[row]
            rhs[r] -= factor * rhs[row]
    basis[row] = col


def _iterate(table: np.ndarray, rhs: np.ndarray, cost: np.ndarray, basis: list[int]) -> None:
    """Pivot to optimality under Bland's rule."""
    m = table.shape[0]
    while True:
        reduced = cost - cost[basis] @ table
        entering = -1
        for j in range(table.shape[1]):
            if reduced[j] < -_TOL:
                entering = j
                break
        if entering == -1:
            return
        rows = [i for i in range(m) if table[i, entering] > _TOL]
        if not rows:
            raise SimplexError("objective is unbounded below")
        ratios = {i: rhs[i] / table[i, entering] for i in rows}
        best = min(ratios.values())
        leaving = min((i for i in rows if ratios[i] <= best + _TOL), key=lambda i: basis[i])
        _pivot(table, rhs, basis, leaving, entering)


def solve_standard_form(c, a_eq, b_eq) -> tuple[np.ndarray, float]:
    """Optimal x and objective for min c.x s.t. a_eq x = b_eq, x >= 0."""
    a = np.asarray(a_eq, dtype=float).copy()
    b = np.asarray(b_eq, dtype=float).copy()
    c = np.asarray(c, dtype=float)
    m, n = a.shape
    if c.shape != (n,) or b.shape != (m,):
        raise SimplexError("inconsistent LP dimensions")
    neg = b < 0
    a[neg] *= -1.0
    b = np.where(neg, -b, b)

    # Phase 1: artificial basis, drive sum of artificials to zero.
    table = np.hstack([a, np.eye(m)])
    rhs = b.copy()
    basis = list(range(n, n + m))
    phase1_cost = np.concatenate([np.zeros(n), np.ones(m)])
    _iterate(table, rhs, phase1_cost, basis)
    if float(phase1_cost[basis] @ rhs) > 1e-7:
        raise SimplexError("infeasible program")

    # Evict artificials still basic at zero; rows with no real pivot are
    # redundant and dropped.
    keep_rows = []
    for i in range(m):
        if basis[i] >= n:
            pivot_col = next((j for j in range(n) if abs(table[i, j]) > _TOL), None)
            if pivot_col is None:
                continue
            _pivot(table, rhs, basis, i, pivot_col)
        keep_rows.append(i)
    table = table[keep_rows, :n]
    rhs = rhs[keep_rows]
    basis = [basis[i] for i in keep_rows]

    _iterate(table, rhs, c, basis)
    x = np.zeros(n)
    x[basis] = rhs
    return x, float(c @ x)


def solve_min_with_free_vars(c_free, a_free, c_pos, a_pos, b) -> tuple[np.ndarray, np.ndarray, float]:
    """min c_free.u + c_pos.v s.t. a_free u + a_pos v = b, u free, v >= 0.

    Free variables are split into positive and negative parts before the
    standard-form solve. Returns (u, v, objective).
    """
    a_free = np.asarray(a_free, dtype=float)
    a_pos = np.asarray(a_pos, dtype=float)
    c_free = np.asarray(c_free, dtype=float)
    c_pos = np.asarray(c_pos, dtype=float)
    nf = a_free.shape[1]
    a = np.hstack([a_free, -a_free, a_pos])
    c = np.concatenate([c_free, -c_free, c_pos])
    x, value = solve_standard_form(c, a, b)
    u = x[:nf] - x[nf : 2 * nf]
    v = x[2 * nf :]
    return u, v, value

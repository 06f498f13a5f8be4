"""Turn a subproblem table into new coefficients inside the separator.

Two indicator conventions are supported. ``product`` writes one equation
per fixing s,

    sum_{s_i = s_j = 1} Q_ij + sum_{s_i = 1} L_i + C = value_s + constant_s,

with unknown within-separator couplings Q, vertex terms L, and constant C.
``cutform`` works at the MaxCut level: indicator 1 when s_i != s_j, no
vertex terms, and the rows for s and its complement coincide, so
complement classes are deduplicated.

Exactly solvable systems (guaranteed for cutform separators of size at
most 3) are solved directly; otherwise an error-minimizing LP finds the
nonnegative slacks e_s with the smallest sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .graphs import WeightedGraph, _pair
from .qubo import QuboInstance
from .simplex import solve_min_with_free_vars
from .subsolver import SubproblemTable

MODE_CUTFORM = "cutform"
MODE_PRODUCT = "product"
REWEIGHT_MODES = (MODE_CUTFORM, MODE_PRODUCT)

EXACT_RESIDUAL_TOL = 1e-9
# Solver rounding noise below this is snapped to an absent coefficient, so
# mathematically-zero weights never survive as phantom structural edges.
ZERO_COEFF_SNAP = 1e-12


@dataclass(frozen=True)
class ReweightSystem:
    """Assembled linear system with bookkeeping to map rows back to fixings."""

    mode: str
    matrix: np.ndarray
    rhs: np.ndarray
    pair_columns: tuple[tuple[int, int], ...]
    single_columns: tuple[int, ...]
    fixing_order: tuple[int, ...]
    row_of: dict[int, int]


@dataclass(frozen=True)
class ReweightResult:
    """New within-separator coefficients, constant, and per-fixing errors.

    ``exact`` holds when every error is at most 1e-9; errors from the LP
    are nonnegative by construction.
    """

    mode: str
    quad: dict[tuple[int, int], float]
    lin: dict[int, float]
    constant: float
    errors: dict[int, float] = field(default_factory=dict)
    exact: bool = True

    def error_sum(self) -> float:
        """Total nonnegative slack; solver rounding below zero is ignored."""
        return float(sum(max(e, 0.0) for e in self.errors.values()))


def build_rows(table: SubproblemTable, mode: str = MODE_CUTFORM) -> ReweightSystem:
    """One equation per fixing (product) or per complement class (cutform)."""
    if mode not in REWEIGHT_MODES:
        raise InputError(f"unknown reweight mode {mode!r}; expected one of {REWEIGHT_MODES}")
    order = table.fixing_order
    k = len(order)
    pairs = tuple((order[a], order[b]) for a in range(k) for b in range(a + 1, k))
    totals = table.totals()

    def bits(s: int) -> list[int]:
        return [(s >> (k - 1 - l)) & 1 for l in range(k)]

    if mode == MODE_PRODUCT:
        singles = order
        rows = []
        rhs = []
        row_of = {}
        for s in range(2**k):
            z = bits(s)
            row = [float(z[a] & z[b]) for a in range(k) for b in range(a + 1, k)]
            row += [float(z[a]) for a in range(k)]
            row.append(1.0)
            rows.append(row)
            rhs.append(totals[s])
            row_of[s] = s
        return ReweightSystem(
            mode, np.array(rows), np.array(rhs), pairs, singles, order, row_of
        )

    mask = 2**k - 1
    reps = sorted({min(s, s ^ mask) for s in range(2**k)})
    rows = []
    rhs = []
    row_of = {}
    for r, rep in enumerate(reps):
        z = bits(rep)
        row = [float(z[a] != z[b]) for a in range(k) for b in range(a + 1, k)]
        row.append(1.0)
        rows.append(row)
        # Complements produce identical indicator rows; their targets agree
        # for exact MaxCut tables, so the class target is their mean.
        rhs.append(0.5 * (totals[rep] + totals[rep ^ mask]))
        row_of[rep] = r
        row_of[rep ^ mask] = r
    return ReweightSystem(mode, np.array(rows), np.array(rhs), pairs, (), order, row_of)


def _pack(system: ReweightSystem, x: np.ndarray, errors: np.ndarray) -> ReweightResult:
    np_pairs = len(system.pair_columns)
    quad = {
        _pair(*p): float(x[c])
        for c, p in enumerate(system.pair_columns)
        if abs(x[c]) > ZERO_COEFF_SNAP
    }
    lin = {
        int(v): float(x[np_pairs + c])
        for c, v in enumerate(system.single_columns)
        if abs(x[np_pairs + c]) > ZERO_COEFF_SNAP
    }
    constant = float(x[-1])
    per_fixing = {s: float(errors[r]) for s, r in system.row_of.items()}
    exact = max(abs(e) for e in per_fixing.values()) <= EXACT_RESIDUAL_TOL
    return ReweightResult(system.mode, quad, lin, constant, per_fixing, exact)


def solve_exact(system: ReweightSystem) -> ReweightResult | None:
    """Zero-residual solve, or None when the system is inconsistent.

    Rank-deficient but consistent systems return the minimum-norm solution;
    any zero-residual choice preserves optima.
    """
    x, *_ = np.linalg.lstsq(system.matrix, system.rhs, rcond=None)
    residual = system.rhs - system.matrix @ x
    if np.max(np.abs(residual)) > EXACT_RESIDUAL_TOL:
        return None
    return _pack(system, x, residual)


def solve_lp(system: ReweightSystem) -> ReweightResult:
    """Minimize the error sum subject to coefficients + errors = targets, errors >= 0.

    Always feasible: the constant column appears in every row, so pushing it
    to the smallest target leaves all errors nonnegative.
    """
    n_rows = system.matrix.shape[0]
    x, errors, _ = solve_min_with_free_vars(
        c_free=np.zeros(system.matrix.shape[1]),
        a_free=system.matrix,
        c_pos=np.ones(n_rows),
        a_pos=np.eye(n_rows),
        b=system.rhs,
    )
    return _pack(system, x, errors)


def reweight(table: SubproblemTable, mode: str = MODE_CUTFORM) -> ReweightResult:
    """Exact solve when possible, else the error-minimizing LP."""
    system = build_rows(table, mode)
    result = solve_exact(system)
    if result is None:
        result = solve_lp(system)
    return result


def audit_payload(system: ReweightSystem, result: ReweightResult) -> dict:
    """JSON-ready dump of the assembled system and its solution."""
    return {
        "mode": system.mode,
        "matrix": system.matrix.tolist(),
        "rhs": system.rhs.tolist(),
        "pair_columns": [list(p) for p in system.pair_columns],
        "single_columns": list(system.single_columns),
        "solution": {
            "quad": [[i, j, v] for (i, j), v in sorted(result.quad.items())],
            "lin": [[i, v] for i, v in sorted(result.lin.items())],
            "constant": result.constant,
        },
        "errors": [[s, result.errors[s]] for s in sorted(result.errors)],
        "exact": result.exact,
    }


def apply_reweight(obj, part, rw: ReweightResult):
    """Drop the small side and swap in the new within-separator coefficients.

    Couplings inside the kept side and between it and the separator are
    untouched; couplings inside the separator are replaced (the originals
    were folded into the subproblem targets). Returns the relabelled
    reduced object, the constant to carry, and the old-to-new vertex map.
    """
    separator = set(part.separator)
    survivors = sorted(set(part.larger) | separator)
    to_new = {old: new for new, old in enumerate(survivors)}

    if isinstance(obj, WeightedGraph):
        if rw.lin:
            raise InputError("reweight result carries vertex terms; apply it to a QuboInstance")
        edges = {
            _pair(to_new[i], to_new[j]): w
            for (i, j), w in obj.edges.items()
            if i in to_new and j in to_new and not (i in separator and j in separator)
        }
        for (i, j), w in rw.quad.items():
            if w != 0.0:
                edges[_pair(to_new[i], to_new[j])] = w
        return WeightedGraph(len(survivors), edges), rw.constant, to_new

    if isinstance(obj, QuboInstance):
        quad = {
            _pair(to_new[i], to_new[j]): v
            for (i, j), v in obj.quad.items()
            if i in to_new and j in to_new and not (i in separator and j in separator)
        }
        for (i, j), v in rw.quad.items():
            if v != 0.0:
                quad[_pair(to_new[i], to_new[j])] = v
        lin = {to_new[i]: v for i, v in obj.lin.items() if i in to_new and i not in separator}
        for i, v in rw.lin.items():
            if v != 0.0:
                lin[to_new[i]] = v
        return QuboInstance(len(survivors), quad, lin, obj.offset), rw.constant, to_new

    raise InputError(f"cannot reweight object of type {type(obj).__name__}")

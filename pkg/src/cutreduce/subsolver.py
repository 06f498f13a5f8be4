"""Solve every fixing of a cut set on the small side of the partition.

For a separator K and small side V2, each of the 2^|K| fixings restricts
the coefficients of the V2-union-K region to a problem over V2 alone. The
exact backend enumerates; the qaoa backend reports the best optimized
single-layer expectation, which for maximization never exceeds the true
optimum. Fixings are indexed big-endian over the ascending separator
order: bit l of row index s fixes the l-th smallest separator vertex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .cutset import CutPartition
from .errors import InputError, ResourceError
from .qaoa import optimize_params
from .qubo import (
    QuboInstance,
    Restriction,
    evaluate_all,
    induced_instance,
    qubo_to_ising,
    restrict,
)
from .rng import substream

EXACT_LIMIT_DEFAULT = 22

BACKEND_EXACT = "exact"
BACKEND_QAOA = "qaoa"


@dataclass(frozen=True)
class BackendChoice:
    """Subproblem solver selection.

    ``exact`` enumerates all assignments (capped at ``exact_limit``
    variables); ``qaoa`` optimizes the analytic single-layer expectation
    with ``qaoa_restarts`` random starts.
    """

    kind: str = BACKEND_EXACT
    qaoa_restarts: int = 100
    exact_limit: int = EXACT_LIMIT_DEFAULT

    def __post_init__(self):
        if self.kind not in (BACKEND_EXACT, BACKEND_QAOA):
            raise InputError(f"unknown backend {self.kind!r}")
        if self.qaoa_restarts < 1:
            raise InputError("qaoa_restarts must be at least 1")


@dataclass(frozen=True)
class TableRow:
    """One fixing: best value over the free side, the folded constant, and
    (exact backend only) an assignment of the free side attaining it."""

    value: float
    constant: float
    witness: tuple[int, ...] | None = None


@dataclass(frozen=True)
class SubproblemTable:
    """All 2^len(fixing_order) fixings of a separator.

    ``rows[s]`` corresponds to fixing vertex ``fixing_order[l]`` to bit l of
    s (big-endian); witnesses are over ``free_order``.
    """

    fixing_order: tuple[int, ...]
    free_order: tuple[int, ...]
    rows: dict[int, TableRow] = field(default_factory=dict)

    def __post_init__(self):
        expected = 2 ** len(self.fixing_order)
        if sorted(self.rows) != list(range(expected)):
            raise InputError(f"table must contain rows 0..{expected - 1} exactly once")

    def totals(self) -> np.ndarray:
        """value + constant per row, in row order."""
        return np.array([self.rows[s].value + self.rows[s].constant for s in range(len(self.rows))])


def table_payload(table: SubproblemTable) -> dict:
    """JSON-ready audit dump of every fixing row."""
    return {
        "fixing_order": list(table.fixing_order),
        "free_order": list(table.free_order),
        "rows": [
            {
                "s": s,
                "value": table.rows[s].value,
                "constant": table.rows[s].constant,
                "witness": list(table.rows[s].witness) if table.rows[s].witness is not None else None,
            }
            for s in sorted(table.rows)
        ],
    }


def table_to_json(table: SubproblemTable) -> str:
    return json.dumps(table_payload(table), indent=2)


def exact_optimum(inst: QuboInstance, limit: int = EXACT_LIMIT_DEFAULT) -> tuple[float, tuple[int, ...]]:
    """Maximum objective value and its lexicographically smallest witness."""
    if inst.n > limit:
        raise ResourceError(f"exact enumeration capped at {limit} variables, got {inst.n}")
    values = evaluate_all(inst)
    best = int(np.argmax(values))
    witness = tuple((best >> (inst.n - 1 - k)) & 1 for k in range(inst.n))
    return float(values[best]), witness


def qaoa_heuristic_value(
    inst: QuboInstance,
    restarts: int = 100,
    seed: int | np.random.Generator = 0,
) -> float:
    """Best optimized single-layer expectation, offsets included."""
    _, value = optimize_params(qubo_to_ising(inst), restarts=restarts, seed=seed)
    return value


def build_table(
    inst: QuboInstance,
    part: CutPartition,
    backend: BackendChoice = BackendChoice(),
    seed: int = 0,
) -> SubproblemTable:
    """Solve the small-side subproblem under every fixing of the separator.

    The subproblem instance is the coefficient restriction of ``inst`` to
    the separator plus the small side; callers that want graph (cut)
    semantics must pass the induced subgraph's MaxCut instance instead.
    """
    k_order = tuple(sorted(part.separator))
    free_order = tuple(sorted(part.smaller))
    if backend.kind == BACKEND_EXACT and len(free_order) > backend.exact_limit:
        raise ResourceError(
            f"small side has {len(free_order)} vertices, over the exact cap {backend.exact_limit}"
        )
    region = sorted(set(k_order) | set(free_order))
    sub, to_sub = induced_instance(inst, region)
    k = len(k_order)
    rows: dict[int, TableRow] = {}
    for s in range(2**k):
        ones = frozenset(to_sub[k_order[l]] for l in range(k) if (s >> (k - 1 - l)) & 1)
        zeros = frozenset(to_sub[v] for v in k_order) - ones
        restricted = restrict(sub, Restriction(zeros, ones))
        if backend.kind == BACKEND_EXACT:
            value, witness = exact_optimum(restricted.sub, limit=backend.exact_limit)
            rows[s] = TableRow(value, restricted.constant, witness)
        else:
            value = qaoa_heuristic_value(
                restricted.sub, restarts=backend.qaoa_restarts, seed=substream(seed, "row", s)
            )
            rows[s] = TableRow(value, restricted.constant, None)
    return SubproblemTable(k_order, free_order, rows)

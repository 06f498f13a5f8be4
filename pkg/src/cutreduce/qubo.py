"""Binary quadratic instance model and conversions.

Conventions
-----------
A :class:`QuboInstance` stores each unordered pair once (i < j), so the
objective is

    C(z) = sum_{i<j} quad[i,j] z_i z_j + sum_i lin[i] z_i + offset

over bits z in {0,1}^n, maximization sense. Symmetric double-sum inputs
must be folded into the pair-once coefficients so that objective *values*
agree; all tests and conversions in this package are value-based.

Assignments map to array indices big-endian: index i encodes the bitstring
(z_0, ..., z_{n-1}) with z_0 as the most significant bit. First-maximum
lookups on such arrays therefore return the lexicographically smallest
maximizer.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .graphs import WeightedGraph, _pair


def bits_from_index(index: int, n: int) -> tuple[int, ...]:
    """Big-endian bits of ``index``: bit 0 is the most significant."""
    return tuple((index >> (n - 1 - k)) & 1 for k in range(n))


def index_from_bits(bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


@dataclass(frozen=True)
class QuboInstance:
    """Pair-once quadratic binary objective, maximization sense."""

    n: int
    quad: dict[tuple[int, int], float] = field(default_factory=dict)
    lin: dict[int, float] = field(default_factory=dict)
    offset: float = 0.0

    def __post_init__(self):
        if self.n < 0:
            raise InputError("variable count must be nonnegative")
        quad = {}
        for (i, j), v in self.quad.items():
            if i == j:
                raise InputError(f"quadratic term on a single variable {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InputError(f"quadratic key ({i},{j}) outside 0..{self.n - 1}")
            key = _pair(i, j)
            if key in quad:
                raise InputError(f"duplicate quadratic key {key}")
            if not math.isfinite(v):
                raise InputError(f"non-finite coefficient at {key}")
            if v != 0.0:
                quad[key] = float(v)
        lin = {}
        for i, v in self.lin.items():
            if not 0 <= i < self.n:
                raise InputError(f"linear key {i} outside 0..{self.n - 1}")
            if not math.isfinite(v):
                raise InputError(f"non-finite coefficient at {i}")
            if v != 0.0:
                lin[int(i)] = float(v)
        if not math.isfinite(self.offset):
            raise InputError("non-finite offset")
        object.__setattr__(self, "quad", quad)
        object.__setattr__(self, "lin", lin)
        object.__setattr__(self, "offset", float(self.offset))

    def structure_graph(self) -> WeightedGraph:
        """Graph whose edges are the nonzero quadratic couplings."""
        return WeightedGraph(self.n, dict(self.quad))


def evaluate(inst: QuboInstance, z) -> float:
    """Objective value of one assignment."""
    z = list(z)
    if len(z) != inst.n:
        raise InputError(f"assignment length {len(z)} != {inst.n} variables")
    total = inst.offset
    for (i, j), v in inst.quad.items():
        total += v * z[i] * z[j]
    for i, v in inst.lin.items():
        total += v * z[i]
    return float(total)


def evaluate_all(inst: QuboInstance) -> np.ndarray:
    """Objective values for all 2^n assignments, indexed big-endian.

    Builds the table with one fancy-slice accumulation per coefficient,
    which keeps full enumeration usable up to the brute-force caps.
    """
    n = inst.n
    values = np.full((2,) * n if n else (1,), inst.offset, dtype=float)
    for (i, j), v in inst.quad.items():
        sel = [slice(None)] * n
        sel[i] = 1
        sel[j] = 1
        values[tuple(sel)] += v
    for i, v in inst.lin.items():
        sel = [slice(None)] * n
        sel[i] = 1
        values[tuple(sel)] += v
    return values.reshape(-1)


def maxcut_to_qubo(g: WeightedGraph) -> QuboInstance:
    """QUBO whose value at z equals the cut weight of the partition z.

    Each edge (i, j, w) contributes w*(z_i + z_j - 2 z_i z_j).
    """
    quad: dict[tuple[int, int], float] = {}
    lin: dict[int, float] = {}
    for (i, j), w in g.edges.items():
        quad[(i, j)] = quad.get((i, j), 0.0) - 2.0 * w
        lin[i] = lin.get(i, 0.0) + w
        lin[j] = lin.get(j, 0.0) + w
    return QuboInstance(g.n, quad, lin, 0.0)


@dataclass(frozen=True)
class IsingInstance:
    """Spin objective sum J_ij s_i s_j + sum h_i s_i + offset, s in {-1,+1}."""

    n: int
    couplings: dict[tuple[int, int], float] = field(default_factory=dict)
    fields: dict[int, float] = field(default_factory=dict)
    offset: float = 0.0


def ising_energy(ising: IsingInstance, spins) -> float:
    total = ising.offset
    for (i, j), v in ising.couplings.items():
        total += v * spins[i] * spins[j]
    for i, v in ising.fields.items():
        total += v * spins[i]
    return float(total)


def qubo_to_ising(inst: QuboInstance) -> IsingInstance:
    """Substitute z_i = (1 - s_i)/2; values are preserved bit-for-bit."""
    couplings: dict[tuple[int, int], float] = {}
    fields: dict[int, float] = {i: -v / 2.0 for i, v in inst.lin.items()}
    offset = inst.offset + sum(inst.lin.values()) / 2.0
    for (i, j), v in inst.quad.items():
        couplings[(i, j)] = v / 4.0
        fields[i] = fields.get(i, 0.0) - v / 4.0
        fields[j] = fields.get(j, 0.0) - v / 4.0
        offset += v / 4.0
    couplings = {k: v for k, v in couplings.items() if v != 0.0}
    fields = {k: v for k, v in fields.items() if v != 0.0}
    return IsingInstance(inst.n, couplings, fields, offset)


def ising_to_qubo(ising: IsingInstance) -> QuboInstance:
    """Inverse substitution s_i = 1 - 2 z_i."""
    quad: dict[tuple[int, int], float] = {}
    lin: dict[int, float] = {i: -2.0 * v for i, v in ising.fields.items()}
    offset = ising.offset + sum(ising.fields.values())
    for (i, j), v in ising.couplings.items():
        quad[(i, j)] = 4.0 * v
        lin[i] = lin.get(i, 0.0) - 2.0 * v
        lin[j] = lin.get(j, 0.0) - 2.0 * v
        offset += v
    return QuboInstance(ising.n, quad, lin, offset)


@dataclass(frozen=True)
class Restriction:
    """Variables pinned to 0 (``zeros``) and to 1 (``ones``)."""

    zeros: frozenset[int]
    ones: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "zeros", frozenset(self.zeros))
        object.__setattr__(self, "ones", frozenset(self.ones))
        if self.zeros & self.ones:
            raise InputError(f"variables fixed both ways: {sorted(self.zeros & self.ones)}")


@dataclass(frozen=True)
class RestrictedInstance:
    """Sub-QUBO over the free variables plus the constant absorbed by the fixing.

    ``free_vars[k]`` is the parent index of sub variable k. For every free
    assignment z, evaluate(sub, z) + constant equals the parent objective at
    the lifted assignment.
    """

    free_vars: tuple[int, ...]
    sub: QuboInstance
    constant: float

    def lift(self, z, fixing: Restriction, n: int) -> tuple[int, ...]:
        """Full parent assignment from a free-variable assignment."""
        full = [0] * n
        for i in fixing.ones:
            full[i] = 1
        for k, i in enumerate(self.free_vars):
            full[i] = int(z[k])
        return tuple(full)


def restrict(inst: QuboInstance, fixing: Restriction) -> RestrictedInstance:
    """Pin the fixed variables and fold their contributions.

    Free variable i keeps its quadratic couplings to free variables and
    gains lin[i] + sum of quad[i,j] over fixed-to-one j; the constant
    collects the all-fixed quadratic and linear terms plus the offset.
    """
    fixed = fixing.zeros | fixing.ones
    if any(not 0 <= i < inst.n for i in fixed):
        raise InputError("restriction names variables outside the instance")
    free = tuple(i for i in range(inst.n) if i not in fixed)
    to_sub = {i: k for k, i in enumerate(free)}
    quad: dict[tuple[int, int], float] = {}
    lin: dict[int, float] = {to_sub[i]: v for i, v in inst.lin.items() if i in to_sub}
    constant = inst.offset + sum(v for i, v in inst.lin.items() if i in fixing.ones)
    for (i, j), v in inst.quad.items():
        in_i, in_j = i in to_sub, j in to_sub
        if in_i and in_j:
            quad[(to_sub[i], to_sub[j])] = v
        elif in_i and j in fixing.ones:
            lin[to_sub[i]] = lin.get(to_sub[i], 0.0) + v
        elif in_j and i in fixing.ones:
            lin[to_sub[j]] = lin.get(to_sub[j], 0.0) + v
        elif i in fixing.ones and j in fixing.ones:
            constant += v
    sub = QuboInstance(len(free), quad, lin, 0.0)
    return RestrictedInstance(free, sub, float(constant))


def induced_instance(inst: QuboInstance, vertices) -> tuple[QuboInstance, dict[int, int]]:
    """Coefficients restricted to ``vertices``, relabelled dense.

    Keeps quadratic terms with both ends inside and the stored linear terms
    of the kept variables; the offset is dropped (it belongs to the parent).
    """
    keep = sorted(set(vertices))
    if any(not 0 <= v < inst.n for v in keep):
        raise InputError("induced variable set not contained in the instance")
    to_new = {old: new for new, old in enumerate(keep)}
    quad = {
        _pair(to_new[i], to_new[j]): v
        for (i, j), v in inst.quad.items()
        if i in to_new and j in to_new
    }
    lin = {to_new[i]: v for i, v in inst.lin.items() if i in to_new}
    return QuboInstance(len(keep), quad, lin, 0.0), to_new


def qubo_to_json(inst: QuboInstance) -> str:
    payload = {
        "n": inst.n,
        "quad": [[i, j, v] for (i, j), v in sorted(inst.quad.items())],
        "lin": [[i, v] for i, v in sorted(inst.lin.items())],
        "offset": inst.offset,
    }
    return json.dumps(payload, indent=2)


def qubo_from_json(text: str) -> QuboInstance:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad QUBO JSON: {exc}") from exc
    try:
        quad = {(int(i), int(j)): float(v) for i, j, v in payload.get("quad", [])}
        lin = {int(i): float(v) for i, v in payload.get("lin", [])}
        inst = QuboInstance(int(payload["n"]), quad, lin, float(payload.get("offset", 0.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad QUBO JSON structure: {exc}") from exc
    return inst


def read_qubo(path) -> QuboInstance:
    with open(path) as fh:
        return qubo_from_json(fh.read())


def write_qubo(inst: QuboInstance, path) -> None:
    with open(path, "w") as fh:
        fh.write(qubo_to_json(inst) + "\n")

"""Iterated cut/solve/reweight driver.

Each round finds a small vertex separator, solves the subproblem on the
small side for every separator fixing, replaces the small side with new
within-separator coefficients, and accumulates the constant. A full trace
(tables, witnesses, relabelling maps) is kept so reduced solutions can be
lifted back to the original variables and every step can be audited.

Graphs are reduced in MaxCut cut form; general QUBOs in product form. If
reweighting disconnects an intermediate, components are handled inside the
same loop: the first still-reducible component (by smallest vertex label)
is cut next, which is equivalent to decomposing components independently
and summing their constants.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

from .cutset import CUT_STRATEGIES, GLOBAL_MIN, MIN_DEGREE_NEIGHBORHOOD, CutPartition, choose_cut
from .errors import InputError, LiftError, NoCutError
from .graphs import WeightedGraph, connected_components, induced_subgraph
from .qubo import QuboInstance, maxcut_to_qubo
from .reweight import MODE_CUTFORM, MODE_PRODUCT, REWEIGHT_MODES, ReweightResult, apply_reweight, reweight
from .rng import substream
from .subsolver import (
    BACKEND_EXACT,
    BackendChoice,
    SubproblemTable,
    TableRow,
    build_table,
    table_payload,
)


@dataclass(frozen=True)
class DecompConfig:
    """Driver settings.

    ``max_cut_size`` stops the iteration once the smallest usable separator
    would reach that many vertices (the default 8 proceeds while separators
    have at most 7). ``min_vertices`` freezes components at or below that
    size. ``max_iterations`` optionally caps the number of rounds.
    """

    max_cut_size: int = 8
    min_vertices: int = 2
    backend: BackendChoice = BackendChoice()
    cut_strategy: str = GLOBAL_MIN
    mode: str | None = None
    seed: int = 0
    max_iterations: int | None = None

    def __post_init__(self):
        if self.max_cut_size < 2:
            raise InputError("max_cut_size must be at least 2")
        if self.min_vertices < 1:
            raise InputError("min_vertices must be at least 1")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise InputError("max_iterations must be nonnegative")
        if self.cut_strategy not in CUT_STRATEGIES:
            raise InputError(f"unknown cut strategy {self.cut_strategy!r}")
        if self.mode is not None and self.mode not in REWEIGHT_MODES:
            raise InputError(f"unknown reweight mode {self.mode!r}")


@dataclass(frozen=True)
class IterationRecord:
    """One cut/solve/reweight round, in the labels current at that round.

    ``survivors[new]`` is the pre-round label of post-round vertex ``new``.
    """

    index: int
    separator: tuple[int, ...]
    small_side: tuple[int, ...]
    table: SubproblemTable
    reweight: ReweightResult
    survivors: tuple[int, ...]
    vertex_count_after: int


@dataclass(frozen=True)
class DecompositionTrace:
    config: DecompConfig
    mode: str
    original: WeightedGraph | QuboInstance
    iterations: tuple[IterationRecord, ...] = ()
    constant_total: float = 0.0
    final: WeightedGraph | QuboInstance | None = None

    def all_exact(self) -> bool:
        return all(rec.reweight.exact for rec in self.iterations)

    def error_budget(self) -> float:
        return float(sum(rec.reweight.error_sum() for rec in self.iterations))


def _resolve_mode(obj, cfg: DecompConfig) -> str:
    mode = cfg.mode
    if isinstance(obj, WeightedGraph):
        mode = mode or MODE_CUTFORM
        if mode != MODE_CUTFORM:
            raise InputError("product reweighting needs a QuboInstance; convert the graph first")
    elif isinstance(obj, QuboInstance):
        mode = mode or MODE_PRODUCT
        if mode != MODE_PRODUCT:
            raise InputError("cut-form reweighting needs a WeightedGraph")
    else:
        raise InputError(f"cannot decompose object of type {type(obj).__name__}")
    return mode


def _structure(obj) -> WeightedGraph:
    return obj if isinstance(obj, WeightedGraph) else obj.structure_graph()


def _next_cut(structure: WeightedGraph, cfg: DecompConfig) -> CutPartition | None:
    """Smallest-label reducible component's cut, or None when frozen."""
    for component in connected_components(structure):
        if len(component) <= cfg.min_vertices:
            continue
        comp_graph, to_comp = induced_subgraph(structure, component)
        try:
            local = choose_cut(comp_graph, cfg.cut_strategy)
        except NoCutError:
            continue
        if len(local.separator) >= cfg.max_cut_size:
            continue
        back = {new: old for old, new in to_comp.items()}
        others = [v for v in range(structure.n) if v not in to_comp]
        return CutPartition(
            separator=tuple(back[v] for v in local.separator),
            larger=tuple(back[v] for v in local.larger) + tuple(others),
            smaller=tuple(back[v] for v in local.smaller),
        )
    return None


def _table_instance(current, part: CutPartition, mode: str) -> QuboInstance:
    if mode == MODE_PRODUCT:
        return current
    # Cut form scores fixings as cut values of the induced subgraph, so the
    # vertex terms must come from degrees inside the region only.
    region = set(part.separator) | set(part.smaller)
    region_edges = {
        (i, j): w for (i, j), w in current.edges.items() if i in region and j in region
    }
    return maxcut_to_qubo(WeightedGraph(current.n, region_edges))


def decompose(obj, cfg: DecompConfig = DecompConfig()):
    """Reduce until no usable cut remains.

    Returns (reduced, constant_total, trace). When every iteration reweights
    exactly, the reduced optimum plus the constant equals the original
    optimum; otherwise the gap is bounded by the accumulated error sum.
    """
    mode = _resolve_mode(obj, cfg)
    current = obj
    constant_total = 0.0
    records: list[IterationRecord] = []
    rounds = _structure(obj).n
    if cfg.max_iterations is not None:
        rounds = min(rounds, cfg.max_iterations)
    for index in range(rounds):
        part = _next_cut(_structure(current), cfg)
        if part is None:
            break
        iter_seed = int(substream(cfg.seed, "iteration", index).integers(2**31))
        table = build_table(_table_instance(current, part, mode), part, cfg.backend, seed=iter_seed)
        rw = reweight(table, mode)
        current, constant, to_new = apply_reweight(current, part, rw)
        constant_total += constant
        records.append(
            IterationRecord(
                index=index,
                separator=part.separator,
                small_side=part.smaller,
                table=table,
                reweight=rw,
                survivors=tuple(sorted(to_new, key=to_new.get)),
                vertex_count_after=_structure(current).n,
            )
        )
    trace = DecompositionTrace(
        config=cfg,
        mode=mode,
        original=obj,
        iterations=tuple(records),
        constant_total=constant_total,
        final=current,
    )
    return current, constant_total, trace


def lift_solution(trace: DecompositionTrace, reduced_solution) -> tuple[int, ...]:
    """Replay witnesses backwards to a full original-variable assignment.

    Requires the exact backend (the qaoa backend stores no witnesses). When
    every iteration reweighted exactly, the lifted objective equals the
    reduced objective plus the accumulated constant.
    """
    if trace.config.backend.kind != BACKEND_EXACT:
        raise LiftError("lifting needs exact-backend witnesses")
    final_n = _structure(trace.final).n
    z = [int(b) for b in reduced_solution]
    if len(z) != final_n:
        raise InputError(f"reduced solution has {len(z)} bits, expected {final_n}")
    for rec in reversed(trace.iterations):
        k_order = rec.table.fixing_order
        k = len(k_order)
        previous = [0] * (len(rec.survivors) + len(rec.small_side))
        for new_label, old_label in enumerate(rec.survivors):
            previous[old_label] = z[new_label]
        fixing = 0
        for l in range(k):
            fixing = (fixing << 1) | previous[k_order[l]]
        witness = rec.table.rows[fixing].witness
        if witness is None:
            raise LiftError(f"iteration {rec.index} row {fixing} has no witness")
        for vertex, bit in zip(rec.table.free_order, witness):
            previous[vertex] = int(bit)
        z = previous
    return tuple(z)


def replay_states(trace: DecompositionTrace):
    """Yield the instance before each iteration, ending with the final one.

    Recomputes intermediates from the recorded cuts and reweight results,
    so per-iteration studies do not need to rerun any solver.
    """
    current = trace.original
    yield current
    for rec in trace.iterations:
        part = CutPartition(
            separator=rec.separator,
            larger=tuple(set(rec.survivors) - set(rec.separator)),
            smaller=rec.small_side,
        )
        current, _, _ = apply_reweight(current, part, rec.reweight)
        yield current


def reduction_bound_check(trace: DecompositionTrace, k: int) -> bool:
    """Whether the neighborhood strategy left at most ceil(k*n/(k+1)) vertices.

    Only meaningful for a k-regular original decomposed with the
    min-degree-neighborhood strategy and max_cut_size above k.
    """
    original = _structure(trace.original)
    if any(original.degree(v) != k for v in range(original.n)):
        raise InputError("reduction bound applies to k-regular originals only")
    if original.is_complete():
        raise InputError("reduction bound does not apply to complete graphs (no cut exists)")
    if trace.config.cut_strategy != MIN_DEGREE_NEIGHBORHOOD:
        raise InputError("reduction bound applies to the min-degree-neighborhood strategy")
    if trace.config.max_cut_size <= k:
        raise InputError("reduction bound needs max_cut_size above the regularity")
    bound = math.ceil(k * original.n / (k + 1))
    return _structure(trace.final).n <= bound


def _object_payload(obj) -> dict:
    if isinstance(obj, WeightedGraph):
        return {
            "kind": "graph",
            "n": obj.n,
            "edges": [[i, j, w] for (i, j), w in sorted(obj.edges.items())],
        }
    return {
        "kind": "qubo",
        "n": obj.n,
        "quad": [[i, j, v] for (i, j), v in sorted(obj.quad.items())],
        "lin": [[i, v] for i, v in sorted(obj.lin.items())],
        "offset": obj.offset,
    }


def _object_from_payload(payload: dict):
    if payload["kind"] == "graph":
        return WeightedGraph(payload["n"], {(i, j): w for i, j, w in payload["edges"]})
    return QuboInstance(
        payload["n"],
        {(i, j): v for i, j, v in payload["quad"]},
        {i: v for i, v in payload["lin"]},
        payload["offset"],
    )


def table_digest(table: SubproblemTable) -> str:
    canonical = repr(
        (
            table.fixing_order,
            table.free_order,
            [(s, table.rows[s].value, table.rows[s].constant, table.rows[s].witness) for s in sorted(table.rows)],
        )
    )
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def trace_to_json(trace: DecompositionTrace) -> str:
    cfg = trace.config
    payload = {
        "config": {
            "max_cut_size": cfg.max_cut_size,
            "min_vertices": cfg.min_vertices,
            "backend": {
                "kind": cfg.backend.kind,
                "qaoa_restarts": cfg.backend.qaoa_restarts,
                "exact_limit": cfg.backend.exact_limit,
            },
            "cut_strategy": cfg.cut_strategy,
            "mode": cfg.mode,
            "seed": cfg.seed,
            "max_iterations": cfg.max_iterations,
        },
        "mode": trace.mode,
        "original": _object_payload(trace.original),
        "constant_total": trace.constant_total,
        "final": _object_payload(trace.final) if trace.final is not None else None,
        "iterations": [
            {
                "index": rec.index,
                "separator": list(rec.separator),
                "small_side": list(rec.small_side),
                "small_side_size": len(rec.small_side),
                "table_digest": table_digest(rec.table),
                "table": table_payload(rec.table),
                "reweight": {
                    "mode": rec.reweight.mode,
                    "quad": [[i, j, v] for (i, j), v in sorted(rec.reweight.quad.items())],
                    "lin": [[i, v] for i, v in sorted(rec.reweight.lin.items())],
                    "constant": rec.reweight.constant,
                    "errors": [[s, e] for s, e in sorted(rec.reweight.errors.items())],
                    "error_sum": rec.reweight.error_sum(),
                    "exact": rec.reweight.exact,
                },
                "survivors": list(rec.survivors),
                "vertex_count_after": rec.vertex_count_after,
            }
            for rec in trace.iterations
        ],
    }
    return json.dumps(payload, indent=2)


def trace_from_json(text: str) -> DecompositionTrace:
    payload = json.loads(text)
    cfg_payload = payload["config"]
    cfg = DecompConfig(
        max_cut_size=cfg_payload["max_cut_size"],
        min_vertices=cfg_payload["min_vertices"],
        backend=BackendChoice(**cfg_payload["backend"]),
        cut_strategy=cfg_payload["cut_strategy"],
        mode=cfg_payload["mode"],
        seed=cfg_payload["seed"],
        max_iterations=cfg_payload.get("max_iterations"),
    )
    records = []
    for rec in payload["iterations"]:
        table = SubproblemTable(
            fixing_order=tuple(rec["table"]["fixing_order"]),
            free_order=tuple(rec["table"]["free_order"]),
            rows={
                row["s"]: TableRow(
                    row["value"],
                    row["constant"],
                    tuple(row["witness"]) if row["witness"] is not None else None,
                )
                for row in rec["table"]["rows"]
            },
        )
        rw = rec["reweight"]
        records.append(
            IterationRecord(
                index=rec["index"],
                separator=tuple(rec["separator"]),
                small_side=tuple(rec["small_side"]),
                table=table,
                reweight=ReweightResult(
                    mode=rw["mode"],
                    quad={(i, j): v for i, j, v in rw["quad"]},
                    lin={i: v for i, v in rw["lin"]},
                    constant=rw["constant"],
                    errors={s: e for s, e in rw["errors"]},
                    exact=rw["exact"],
                ),
                survivors=tuple(rec["survivors"]),
                vertex_count_after=rec["vertex_count_after"],
            )
        )
    return DecompositionTrace(
        config=cfg,
        mode=payload["mode"],
        original=_object_from_payload(payload["original"]),
        iterations=tuple(records),
        constant_total=payload["constant_total"],
        final=_object_from_payload(payload["final"]) if payload["final"] is not None else None,
    )

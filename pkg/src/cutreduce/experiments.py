"""Batch experiment pipelines with CSV and figure outputs.

Every run is driven by one seed: instance generation, decomposition
backends, parameter optimization, and shot sampling each draw from named
substreams, so reruns reproduce files byte for byte. Rows are emitted in
instance-id order. Per-instance failures are recorded in the CSV and the
run continues.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .decompose import DecompConfig, decompose, replay_states, trace_to_json
from .errors import CutReduceError, InputError
from .generate import generate_regular
from .graphs import WeightedGraph, read_graph
from .qaoa import STATEVECTOR_MAX_QUBITS, optimize_params, report
from .qubo import evaluate_all, maxcut_to_qubo, qubo_to_ising
from .rng import substream
from .subsolver import BACKEND_EXACT, BACKEND_QAOA

PROBABILITY_STUDY_MAX_QUBITS = 16

AR_COLUMNS = [
    "instance",
    "n",
    "m",
    "c_max",
    "ar_original",
    "n_final_exact",
    "iterations_exact",
    "c_total_exact",
    "all_exact_exact",
    "error_budget_exact",
    "ar_decomposed_exact",
    "n_final_qaoa",
    "iterations_qaoa",
    "c_total_qaoa",
    "all_exact_qaoa",
    "error_budget_qaoa",
    "ar_decomposed_qaoa",
    "error",
]

PROB_COLUMNS = [
    "instance",
    "n_original",
    "n_reduced",
    "c_max_reduced",
    "n_opt",
    "p_qaoa",
    "p_qaoa_sampled",
    "p_uniform",
    "p_uniform_scaled",
    "shots",
    "observed_optimal",
    "error",
]

ITERATION_COLUMNS = ["iteration", "n_vertices", "expectation_plus_constant", "approx_ratio"]


@dataclass(frozen=True)
class ExperimentSpec:
    """One batch: either generated k-regular instances or explicit files."""

    n: int = 24
    k: int = 3
    count: int = 10
    seed: int = 0
    config: DecompConfig = DecompConfig()
    shots: int = 500
    restarts: int = 100
    out_dir: Path | None = None
    graph_files: tuple[str, ...] = ()
    backends: tuple[str, ...] = (BACKEND_EXACT, BACKEND_QAOA)

    def __post_init__(self):
        if self.count < 1:
            raise InputError("instance count must be at least 1")
        object.__setattr__(self, "out_dir", Path(self.out_dir) if self.out_dir else None)


def _instances(spec: ExperimentSpec):
    if spec.graph_files:
        for idx, path in enumerate(spec.graph_files):
            yield idx, read_graph(path)
        return
    for idx in range(spec.count):
        seed = int(substream(spec.seed, "instance", idx).integers(2**31))
        yield idx, generate_regular(spec.n, spec.k, seed=seed)


def _optimized_expectation(obj, restarts: int, seed) -> float:
    inst = maxcut_to_qubo(obj) if isinstance(obj, WeightedGraph) else obj
    _, value = optimize_params(qubo_to_ising(inst), restarts=restarts, seed=seed)
    return value


def _write_csv(path: Path, columns, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow({c: row.get(c, "") for c in columns})


def run_decompose(spec: ExperimentSpec) -> list[dict]:
    """Original-vs-decomposed approximation ratios per instance.

    Decomposes with each requested subproblem backend, writes one trace
    file per (instance, backend), a summary CSV, and comparison figures.
    """
    rows = []
    for idx, graph in _instances(spec):
        row: dict = {"instance": idx, "n": graph.n, "m": graph.m, "error": ""}
        try:
            c_max, _ = _exact_graph_optimum(graph)
            row["c_max"] = c_max
            expectation = _optimized_expectation(
                graph, spec.restarts, substream(spec.seed, "original-ar", idx)
            )
            row["ar_original"] = expectation / c_max
            for backend_kind in spec.backends:
                cfg = replace(
                    spec.config,
                    backend=replace(spec.config.backend, kind=backend_kind),
                    seed=int(substream(spec.seed, "decomp", idx, backend_kind).integers(2**31)),
                )
                reduced, c_total, trace = decompose(graph, cfg)
                reduced_expectation = _optimized_expectation(
                    reduced, spec.restarts, substream(spec.seed, "reduced-ar", idx, backend_kind)
                )
                row[f"n_final_{backend_kind}"] = _vertex_count(reduced)
                row[f"iterations_{backend_kind}"] = len(trace.iterations)
                row[f"c_total_{backend_kind}"] = c_total
                row[f"all_exact_{backend_kind}"] = trace.all_exact()
                row[f"error_budget_{backend_kind}"] = trace.error_budget()
                row[f"ar_decomposed_{backend_kind}"] = (reduced_expectation + c_total) / c_max
                if spec.out_dir is not None:
                    path = spec.out_dir / f"trace_{idx:03d}_{backend_kind}.json"
                    path.parent.mkdir(parents=True, exist_ok=True)
                    path.write_text(trace_to_json(trace) + "\n")
        except CutReduceError as exc:
            row["error"] = str(exc)
        rows.append(row)
    rows.sort(key=lambda r: r["instance"])
    if spec.out_dir is not None:
        _write_csv(spec.out_dir / "ar_summary.csv", AR_COLUMNS, rows)
        from . import plots

        plots.plot_ar_comparison(rows, spec.out_dir / "ar_comparison.png")
        plots.plot_qubit_counts(rows, spec.out_dir / "qubit_counts.png")
    return rows


def _vertex_count(obj) -> int:
    return obj.n


def _exact_graph_optimum(graph: WeightedGraph) -> tuple[float, int]:
    """Maximum cut value and the number of optimal assignments."""
    if graph.n > STATEVECTOR_MAX_QUBITS:
        raise CutReduceError(f"exact optimum capped at {STATEVECTOR_MAX_QUBITS} vertices at desk scale")
    values = evaluate_all(maxcut_to_qubo(graph))
    best = float(values.max())
    return best, int(np.sum(values >= best - 1e-9))


def run_probability_study(spec: ExperimentSpec) -> list[dict]:
    """Optimal-solution probabilities of QAOA on exact-backend reductions.

    Instances whose reduction stays above the statevector study cap are
    skipped with a notice in their row.
    """
    rows = []
    for idx, graph in _instances(spec):
        row: dict = {"instance": idx, "n_original": graph.n, "shots": spec.shots, "error": ""}
        try:
            cfg = replace(
                spec.config,
                backend=replace(spec.config.backend, kind=BACKEND_EXACT),
                seed=int(substream(spec.seed, "decomp", idx, "prob").integers(2**31)),
            )
            reduced, _, _ = decompose(graph, cfg)
            row["n_reduced"] = reduced.n
            if reduced.n > PROBABILITY_STUDY_MAX_QUBITS:
                row["error"] = f"skipped: reduced to {reduced.n} > {PROBABILITY_STUDY_MAX_QUBITS} qubits"
                rows.append(row)
                continue
            inst = maxcut_to_qubo(reduced)
            values = evaluate_all(inst)
            c_max = float(values.max())
            n_opt = int(np.sum(values >= c_max - 1e-9))
            params, _ = optimize_params(
                qubo_to_ising(inst),
                restarts=spec.restarts,
                seed=substream(spec.seed, "prob-ar", idx),
            )
            rep = report(
                inst,
                [(params.gamma, params.beta)],
                shots=spec.shots,
                oracle_value=c_max,
                n_opt=n_opt,
                seed=substream(spec.seed, "shots", idx),
            )
            row.update(
                c_max_reduced=c_max,
                n_opt=n_opt,
                p_qaoa=rep.p_opt_qaoa,
                p_qaoa_sampled=rep.p_opt_qaoa_sampled,
                p_uniform=rep.p_opt_uniform,
                p_uniform_scaled=rep.p_opt_uniform_scaled,
                observed_optimal=rep.p_opt_qaoa_sampled > 0.0,
            )
        except CutReduceError as exc:
            row["error"] = str(exc)
        rows.append(row)
    rows.sort(key=lambda r: r["instance"])
    if spec.out_dir is not None:
        _write_csv(spec.out_dir / "probability_summary.csv", PROB_COLUMNS, rows)
        from . import plots

        plots.plot_probability_study(rows, spec.out_dir / "probability_study.png")
    return rows


def run_iteration_study(graph: WeightedGraph, spec: ExperimentSpec) -> list[dict]:
    """Approximation ratio after each decomposition round of one instance."""
    c_max, _ = _exact_graph_optimum(graph)
    cfg = replace(spec.config, seed=int(substream(spec.seed, "decomp", 0, "iter").integers(2**31)))
    _, _, trace = decompose(graph, cfg)
    constants = [0.0]
    for rec in trace.iterations:
        constants.append(constants[-1] + rec.reweight.constant)
    rows = []
    for step, state in enumerate(replay_states(trace)):
        expectation = _optimized_expectation(
            state, spec.restarts, substream(spec.seed, "iter-ar", step)
        )
        total = expectation + constants[step]
        rows.append(
            {
                "iteration": step,
                "n_vertices": state.n,
                "expectation_plus_constant": total,
                "approx_ratio": total / c_max,
            }
        )
    if spec.out_dir is not None:
        _write_csv(spec.out_dir / "iteration_study.csv", ITERATION_COLUMNS, rows)
        from . import plots

        plots.plot_iteration_curve(rows, spec.out_dir / "iteration_study.png")
    return rows

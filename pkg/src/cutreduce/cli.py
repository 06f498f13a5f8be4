"""Command-line surface.

Subcommands: generate, decompose, qaoa, experiment ar, experiment prob,
and verify. Exit codes: 0 success, 2 input error, 3 resource error. File
formats and CSV schemas are documented in FORMATS.md.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .cutset import CUT_STRATEGIES, GLOBAL_MIN
from .decompose import DecompConfig, decompose, lift_solution, trace_to_json
from .errors import CutReduceError, InputError, ResourceError
from .experiments import (
    ExperimentSpec,
    run_decompose,
    run_iteration_study,
    run_probability_study,
)
from .generate import generate_regular
from .graphs import read_graph, write_graph
from .qaoa import (
    STATEVECTOR_MAX_QUBITS,
    histogram_rows,
    optimize_params,
    report,
    report_to_json,
    sample,
    statevector,
)
from .qubo import evaluate_all, maxcut_to_qubo, qubo_to_ising, read_qubo, write_qubo
from .reweight import MODE_CUTFORM, MODE_PRODUCT
from .rng import substream
from .subsolver import BACKEND_EXACT, BACKEND_QAOA, BackendChoice, exact_optimum


def _add_instance_args(parser):
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="graph file (text: 'n m' header then 'i j w' lines)")
    src.add_argument("--qubo", help="QUBO file (JSON: n/quad/lin/offset)")


def _add_decomp_args(parser):
    parser.add_argument("--m-cut", type=int, default=8, help="stop once the smallest cut reaches this size")
    parser.add_argument("--min-vertices", type=int, default=2, help="freeze components at or below this size")
    parser.add_argument("--backend", choices=[BACKEND_EXACT, BACKEND_QAOA], default=BACKEND_EXACT)
    parser.add_argument("--restarts", type=int, default=100, help="optimizer restarts for qaoa paths")
    parser.add_argument("--mode", choices=[MODE_CUTFORM, MODE_PRODUCT], default=None,
                        help="reweighting form; default follows the input type")
    parser.add_argument("--strategy", choices=list(CUT_STRATEGIES), default=GLOBAL_MIN)


def _load_instance(args):
    if args.graph:
        return read_graph(args.graph)
    return read_qubo(args.qubo)


def _config_from_args(args) -> DecompConfig:
    return DecompConfig(
        max_cut_size=args.m_cut,
        min_vertices=args.min_vertices,
        backend=BackendChoice(kind=args.backend, qaoa_restarts=args.restarts),
        cut_strategy=args.strategy,
        mode=args.mode,
        seed=args.seed,
    )


def _cmd_generate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for idx in range(args.count):
        seed = int(substream(args.seed, "instance", idx).integers(2**31))
        g = generate_regular(args.n, args.k, seed=seed)
        path = out / f"graph_{idx:03d}.txt"
        write_graph(g, path)
        print(f"wrote {path} ({g.n} vertices, {g.m} edges)")
    return 0


def _cmd_decompose(args) -> int:
    obj = _load_instance(args)
    if args.graph and args.mode == MODE_PRODUCT:
        obj = maxcut_to_qubo(obj)
    reduced, c_total, trace = decompose(obj, _config_from_args(args))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "trace.json").write_text(trace_to_json(trace) + "\n")
    if hasattr(reduced, "edges"):
        write_graph(reduced, out / "reduced_graph.txt")
    else:
        write_qubo(reduced, out / "reduced_qubo.json")
    summary = {
        "n_original": trace.original.n,
        "n_final": reduced.n,
        "iterations": len(trace.iterations),
        "constant_total": c_total,
        "all_exact": trace.all_exact(),
        "error_budget": trace.error_budget(),
    }
    if args.lift and trace.config.backend.kind == BACKEND_EXACT:
        inst = maxcut_to_qubo(reduced) if hasattr(reduced, "edges") else reduced
        _, witness = exact_optimum(inst)
        lifted = lift_solution(trace, witness)
        summary["lifted_solution"] = "".join(str(b) for b in lifted)
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_qaoa(args) -> int:
    obj = _load_instance(args)
    inst = maxcut_to_qubo(obj) if args.graph else obj
    if inst.n > STATEVECTOR_MAX_QUBITS:
        raise ResourceError(f"qaoa reporting capped at {STATEVECTOR_MAX_QUBITS} variables, got {inst.n}")
    params, expectation = optimize_params(
        qubo_to_ising(inst), restarts=args.restarts, seed=substream(args.seed, "qaoa")
    )
    values = evaluate_all(inst)
    c_max = float(values.max())
    n_opt = int(np.sum(values >= c_max - 1e-9))
    rep = report(
        inst,
        [(params.gamma, params.beta)],
        shots=args.shots,
        oracle_value=c_max,
        n_opt=n_opt,
        seed=substream(args.seed, "shots"),
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "qaoa_report.json").write_text(report_to_json(rep) + "\n")
    psi = statevector(inst, [(params.gamma, params.beta)])
    draws = sample(psi, args.shots, seed=substream(args.seed, "shots"))
    with open(out / "histogram.csv", "w") as fh:
        fh.write("bitstring,probability,count\n")
        for bits, prob, count in histogram_rows(inst, psi, draws):
            fh.write(f"{bits},{prob!r},{count}\n")
    print(report_to_json(rep))
    return 0


def _spec_from_args(args) -> ExperimentSpec:
    return ExperimentSpec(
        n=args.n,
        k=args.k,
        count=args.count,
        seed=args.seed,
        config=_config_from_args(args),
        shots=args.shots,
        restarts=args.restarts,
        out_dir=Path(args.out),
        graph_files=tuple(args.graph_file or ()),
        backends=(args.backend,) if args.only_backend else (BACKEND_EXACT, BACKEND_QAOA),
    )


def _cmd_experiment(args) -> int:
    spec = _spec_from_args(args)
    if args.what == "ar":
        rows = run_decompose(spec)
        done = [r for r in rows if not r["error"]]
        print(f"{len(done)}/{len(rows)} instances completed; summary in {spec.out_dir}/ar_summary.csv")
        if args.per_iteration:
            graph = next(iter(_first_graph(spec)))
            run_iteration_study(graph, spec)
            print(f"per-iteration study in {spec.out_dir}/iteration_study.csv")
    else:
        rows = run_probability_study(spec)
        done = [r for r in rows if not r["error"]]
        print(
            f"{len(done)}/{len(rows)} instances studied; summary in "
            f"{spec.out_dir}/probability_summary.csv"
        )
    return 0


def _first_graph(spec: ExperimentSpec):
    if spec.graph_files:
        yield read_graph(spec.graph_files[0])
    else:
        seed = int(substream(spec.seed, "instance", 0).integers(2**31))
        yield generate_regular(spec.n, spec.k, seed=seed)


def _cmd_verify(args) -> int:
    """Oracle equivalence on random small-cut instances: reduced optimum plus
    constant must match brute force, and lifting must attain it."""
    from .verify import verify_equivalence

    failures = verify_equivalence(count=args.count, n_max=args.n_max, seed=args.seed, verbose=True)
    if failures:
        print(f"FAIL: {failures} instance(s) diverged")
        return 1
    print(f"ok: {args.count} instances match brute force")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cutreduce", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write random k-regular graph files")
    p.add_argument("--n", type=int, default=24)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("decompose", help="reduce one instance and dump the trace")
    _add_instance_args(p)
    _add_decomp_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lift", action="store_true", help="also lift the reduced optimum (exact backend)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("qaoa", help="optimize single-layer angles and report quality")
    _add_instance_args(p)
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--shots", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_qaoa)

    p = sub.add_parser("experiment", help="batch studies with CSV + figure output")
    p.add_argument("what", choices=["ar", "prob"])
    p.add_argument("--n", type=int, default=24)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--graph-file", action="append", help="use explicit graph files instead of generating")
    _add_decomp_args(p)
    p.add_argument("--only-backend", action="store_true",
                   help="decompose with --backend only instead of both backends")
    p.add_argument("--shots", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-iteration", action="store_true",
                   help="also track the ratio after every iteration of the first instance")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("verify", help="randomized oracle-equivalence check")
    p.add_argument("--count", type=int, default=25)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3
    except (InputError, FileNotFoundError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except CutReduceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

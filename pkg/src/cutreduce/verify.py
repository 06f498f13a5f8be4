"""Randomized oracle-equivalence suite.

Draws connected integer-weight graphs whose minimum vertex cut has at most
three vertices, decomposes them with the exact backend while only cuts of
size at most three are allowed, and checks against brute force that the
reduced optimum plus the accumulated constant reproduces the original
optimum and that the lifted solution attains it.
"""

from __future__ import annotations

import numpy as np

from .cutset import min_vertex_cut
from .decompose import DecompConfig, decompose, lift_solution
from .errors import NoCutError
from .graphs import WeightedGraph, is_connected
from .qubo import evaluate, maxcut_to_qubo
from .rng import substream
from .subsolver import BackendChoice, exact_optimum

EQUIVALENCE_TOL = 1e-6


def random_small_cut_graph(rng: np.random.Generator, n_max: int = 14) -> WeightedGraph:
    """Connected graph with integer weights and minimum vertex cut <= 3.

    Built as a random spanning tree plus a few extra edges; dense or
    well-connected draws are rejected and retried.
    """
    while True:
        n = int(rng.integers(5, n_max + 1))
        edges: dict[tuple[int, int], float] = {}
        order = rng.permutation(n)
        for pos in range(1, n):
            a = int(order[pos])
            b = int(order[rng.integers(0, pos)])
            edges[(min(a, b), max(a, b))] = 0.0
        extra = int(rng.integers(0, max(n // 2, 1)))
        for _ in range(extra):
            a, b = rng.choice(n, size=2, replace=False)
            edges[(min(int(a), int(b)), max(int(a), int(b)))] = 0.0
        for key in edges:
            w = 0
            while w == 0:
                w = int(rng.integers(-2, 5))
            edges[key] = float(w)
        g = WeightedGraph(n, edges)
        if g.is_complete() or not is_connected(g):
            continue
        try:
            part = min_vertex_cut(g)
        except NoCutError:
            continue
        if len(part.separator) <= 3:
            return g


def verify_equivalence(count: int = 25, n_max: int = 12, seed: int = 0, verbose: bool = False) -> int:
    """Number of instances where the reduction or the lift diverges."""
    failures = 0
    cfg = DecompConfig(max_cut_size=4, backend=BackendChoice(kind="exact"))
    for idx in range(count):
        rng = substream(seed, "verify", idx)
        g = random_small_cut_graph(rng, n_max=n_max)
        original = maxcut_to_qubo(g)
        best, _ = exact_optimum(original)
        reduced, c_total, trace = decompose(g, cfg)
        reduced_best, reduced_witness = exact_optimum(maxcut_to_qubo(reduced))
        total = reduced_best + c_total
        lifted = lift_solution(trace, reduced_witness)
        lifted_value = evaluate(original, lifted)
        ok = (
            trace.all_exact()
            and abs(total - best) <= EQUIVALENCE_TOL
            and abs(lifted_value - best) <= EQUIVALENCE_TOL
        )
        if not ok:
            failures += 1
        if verbose:
            status = "ok" if ok else "FAIL"
            print(
                f"[{status}] instance {idx}: n={g.n} m={g.m} optimum={best} "
                f"reduced+constant={total} lifted={lifted_value} "
                f"iterations={len(trace.iterations)} final_n={reduced.n}"
            )
    return failures

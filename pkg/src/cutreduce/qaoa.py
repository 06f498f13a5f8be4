"""Single-layer QAOA machinery: closed-form expectations, parameter search,
exact statevector simulation, Born-rule sampling, and reporting.

Why a closed form
-----------------
For one layer, the expectation of every spin observable factors into local
neighborhood products. With the state

    |gamma, beta> = exp(-i beta B) exp(-i gamma H) |+...+>,   B = sum_i X_i,

and H the spin objective sum h_i Z_i + sum J_ij Z_i Z_j + offset, the
single-spin and spin-pair expectations are

    <Z_i> = sin(2b) sin(2g h_i) prod_{k in N(i)} cos(2g J_ik)

    <Z_i Z_j> = (1/2) sin(4b) sin(2g J_ij)
                  [ cos(2g h_i) prod_{k in N(i), k != j} cos(2g J_ik)
                  + cos(2g h_j) prod_{k in N(j), k != i} cos(2g J_jk) ]
              - (1/2) sin(2b)^2
                  prod_{k in N(i) only} cos(2g J_ik)
                  prod_{k in N(j) only} cos(2g J_jk)
                  [ cos(2g (h_i + h_j)) prod_{k shared} cos(2g (J_ik + J_jk))
                  - cos(2g (h_i - h_j)) prod_{k shared} cos(2g (J_ik - J_jk)) ],

with empty products equal to 1. "Shared" ranges over common neighbors of i
and j, "only" over exclusive ones. Each formula is checked against the
statevector simulator in the test suite; evaluation cost is linear in the
neighborhood sizes, independent of qubit count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import InputError, ResourceError
from .qubo import IsingInstance, QuboInstance, evaluate_all

STATEVECTOR_MAX_QUBITS = 24
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class QaoaParams:
    """Angles of one layer, reported in [0, 2*pi); ``p`` counts layers.

    The closed-form path supports p=1 only; deeper circuits go through the
    statevector.
    """

    gamma: float
    beta: float
    p: int = 1


@dataclass(frozen=True)
class ExpectationBreakdown:
    """Per-term expectations; ``total`` includes the instance offset."""

    vertex_terms: dict[int, float]
    edge_terms: dict[tuple[int, int], float]
    total: float


def _padded(rows: list[list[float]]) -> np.ndarray:
    width = max((len(r) for r in rows), default=0)
    out = np.zeros((len(rows), max(width, 1)))
    for i, r in enumerate(rows):
        out[i, : len(r)] = r
    return out


class P1Evaluator:
    """Precomputed neighborhood tables for fast repeated p=1 evaluation.

    Padding with zero couplings is exact because cos(0) = 1 is neutral in
    every product.
    """

    def __init__(self, ising: IsingInstance):
        self.ising = ising
        n = ising.n
        adj: list[dict[int, float]] = [dict() for _ in range(n)]
        for (i, j), v in ising.couplings.items():
            adj[i][j] = v
            adj[j][i] = v
        self.h = np.array([ising.fields.get(i, 0.0) for i in range(n)])
        self.vertex_nbrs = _padded([sorted(adj[i].values()) for i in range(n)]) if n else np.zeros((0, 1))

        self.edge_keys = sorted(ising.couplings)
        j_edge, h_i, h_j = [], [], []
        own_i, own_j, excl_i, excl_j, shared_i, shared_j = [], [], [], [], [], []
        for i, j in self.edge_keys:
            j_edge.append(ising.couplings[(i, j)])
            h_i.append(self.h[i])
            h_j.append(self.h[j])
            shared = sorted(set(adj[i]) & set(adj[j]))
            own_i.append([adj[i][k] for k in sorted(adj[i]) if k != j])
            own_j.append([adj[j][k] for k in sorted(adj[j]) if k != i])
            excl_i.append([adj[i][k] for k in sorted(adj[i]) if k != j and k not in adj[j]])
            excl_j.append([adj[j][k] for k in sorted(adj[j]) if k != i and k not in adj[i]])
            shared_i.append([adj[i][k] for k in shared])
            shared_j.append([adj[j][k] for k in shared])
        self.j_edge = np.array(j_edge)
        self.h_i = np.array(h_i)
        self.h_j = np.array(h_j)
        self.own_i = _padded(own_i)
        self.own_j = _padded(own_j)
        self.excl_i = _padded(excl_i)
        self.excl_j = _padded(excl_j)
        self.shared_i = _padded(shared_i)
        self.shared_j = _padded(shared_j)

    def vertex_values(self, gamma: float, beta: float) -> np.ndarray:
        prods = np.prod(np.cos(2.0 * gamma * self.vertex_nbrs), axis=1)
        return self.h * math.sin(2.0 * beta) * np.sin(2.0 * gamma * self.h) * prods

    def edge_values(self, gamma: float, beta: float) -> np.ndarray:
        if not self.edge_keys:
            return np.zeros(0)
        g2 = 2.0 * gamma
        near = 0.5 * math.sin(4.0 * beta) * np.sin(g2 * self.j_edge) * (
            np.cos(g2 * self.h_i) * np.prod(np.cos(g2 * self.own_i), axis=1)
            + np.cos(g2 * self.h_j) * np.prod(np.cos(g2 * self.own_j), axis=1)
        )
        far = (
            -0.5
            * math.sin(2.0 * beta) ** 2
            * np.prod(np.cos(g2 * self.excl_i), axis=1)
            * np.prod(np.cos(g2 * self.excl_j), axis=1)
            * (
                np.cos(g2 * (self.h_i + self.h_j))
                * np.prod(np.cos(g2 * (self.shared_i + self.shared_j)), axis=1)
                - np.cos(g2 * (self.h_i - self.h_j))
                * np.prod(np.cos(g2 * (self.shared_i - self.shared_j)), axis=1)
            )
        )
        return self.j_edge * (near + far)

    def total(self, gamma: float, beta: float) -> float:
        return float(
            self.vertex_values(gamma, beta).sum()
            + self.edge_values(gamma, beta).sum()
            + self.ising.offset
        )

    def breakdown(self, gamma: float, beta: float) -> ExpectationBreakdown:
        vertex = self.vertex_values(gamma, beta)
        edge = self.edge_values(gamma, beta)
        return ExpectationBreakdown(
            vertex_terms={i: float(vertex[i]) for i in range(self.ising.n)},
            edge_terms={k: float(edge[e]) for e, k in enumerate(self.edge_keys)},
            total=float(vertex.sum() + edge.sum() + self.ising.offset),
        )


def expectation_p1(ising: IsingInstance, params: QaoaParams) -> ExpectationBreakdown:
    """Closed-form single-layer expectation of the spin objective."""
    if params.p != 1:
        raise InputError(f"closed form covers p=1 only, got p={params.p}; use the statevector")
    return P1Evaluator(ising).breakdown(params.gamma, params.beta)


def _central_gradient(fun, x: np.ndarray, step: float = 1e-6) -> np.ndarray:
    grad = np.zeros_like(x)
    for k in range(x.size):
        hi = x.copy()
        lo = x.copy()
        hi[k] += step
        lo[k] -= step
        grad[k] = (fun(hi) - fun(lo)) / (2.0 * step)
    return grad


def optimize_params(
    ising: IsingInstance,
    restarts: int = 100,
    seed: int | np.random.Generator = 0,
) -> tuple[QaoaParams, float]:
    """Best single-layer angles over multistart quasi-Newton ascent.

    Starts are uniform in [0, 2*pi)^2; each is refined with BFGS on
    central-difference gradients (step 1e-6). Ties keep the earliest
    restart, so results are reproducible given the seed.
    """
    if restarts < 1:
        raise InputError("restarts must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    starts = rng.uniform(0.0, _TWO_PI, size=(restarts, 2))
    ev = P1Evaluator(ising)
    if not ising.couplings and not ising.fields:
        g, b = starts[0]
        return QaoaParams(g % _TWO_PI, b % _TWO_PI), ising.offset

    def negative(x):
        return -ev.total(x[0], x[1])

    best_x, best_val = None, -np.inf
    for x0 in starts:
        res = minimize(
            negative,
            x0,
            method="BFGS",
            jac=lambda x: _central_gradient(negative, x),
            options={"gtol": 1e-8},
        )
        value = -float(res.fun)
        if math.isfinite(value) and value > best_val + 1e-12:
            best_val = value
            best_x = res.x
    if best_x is None:
        # Every restart produced a non-finite objective; report the best raw start.
        values = [ev.total(g, b) for g, b in starts]
        k = int(np.argmax(values))
        best_x, best_val = starts[k], values[k]
    return QaoaParams(best_x[0] % _TWO_PI, best_x[1] % _TWO_PI), float(best_val)


def statevector(inst: QuboInstance, layers) -> np.ndarray:
    """Amplitudes after alternating cost-phase and mixer layers.

    ``layers`` is a sequence of (gamma, beta) pairs; an empty sequence
    returns the uniform superposition. Index k of the result is the
    big-endian assignment k, matching :func:`cutreduce.qubo.evaluate_all`.
    """
    n = inst.n
    if n > STATEVECTOR_MAX_QUBITS:
        raise ResourceError(f"statevector capped at {STATEVECTOR_MAX_QUBITS} qubits, got {n}")
    diag = evaluate_all(inst)
    psi = np.full(2**n, 2.0 ** (-n / 2.0), dtype=complex)
    for gamma, beta in layers:
        psi = psi * np.exp(-1j * gamma * diag)
        psi = psi.reshape((2,) * n)
        c, s = math.cos(beta), math.sin(beta)
        for axis in range(n):
            lo = np.take(psi, 0, axis=axis)
            hi = np.take(psi, 1, axis=axis)
            psi = np.stack([c * lo - 1j * s * hi, c * hi - 1j * s * lo], axis=axis)
        psi = psi.reshape(-1)
    return psi


def statevector_expectation(inst: QuboInstance, layers) -> float:
    psi = statevector(inst, layers)
    return float(np.real(np.abs(psi) ** 2 @ evaluate_all(inst)))


def sample(amplitudes: np.ndarray, shots: int, seed: int | np.random.Generator = 0) -> np.ndarray:
    """Born-rule i.i.d. samples as big-endian assignment indices."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    probs = np.abs(np.asarray(amplitudes)) ** 2
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    draws = rng.random(shots)
    return np.minimum(np.searchsorted(cdf, draws, side="right"), probs.size - 1)


@dataclass(frozen=True)
class SolveReport:
    """Quality metrics of a QAOA run against a known optimum.

    ``approx_ratio`` is None when the optimum is not positive. The
    ``p_opt_uniform_scaled`` column is the uniform baseline enhanced by
    2^(n/2), reported for comparison only.
    """

    n: int
    expectation: float
    c_max: float
    approx_ratio: float | None
    p_opt_qaoa: float
    p_opt_qaoa_sampled: float
    p_opt_uniform: float
    p_opt_uniform_scaled: float
    n_opt: int
    shots: int
    params: tuple[tuple[float, float], ...] = field(default=())


def report(
    inst: QuboInstance,
    layers,
    shots: int,
    oracle_value: float,
    n_opt: int,
    seed: int | np.random.Generator = 0,
    atol: float = 1e-9,
) -> SolveReport:
    """Run the statevector at ``layers``, sample, and score against the oracle."""
    psi = statevector(inst, layers)
    probs = np.abs(psi) ** 2
    diag = evaluate_all(inst)
    optimal = diag >= oracle_value - atol
    p_exact = float(probs[optimal].sum())
    draws = sample(psi, shots, seed)
    p_sampled = float(np.mean(optimal[draws])) if shots else 0.0
    expectation = float(probs @ diag)
    ratio = expectation / oracle_value if oracle_value > 0 else None
    p_uniform = n_opt / 2**inst.n
    return SolveReport(
        n=inst.n,
        expectation=expectation,
        c_max=float(oracle_value),
        approx_ratio=ratio,
        p_opt_qaoa=p_exact,
        p_opt_qaoa_sampled=p_sampled,
        p_opt_uniform=p_uniform,
        p_opt_uniform_scaled=p_uniform * 2.0 ** (inst.n / 2.0),
        n_opt=int(n_opt),
        shots=int(shots),
        params=tuple((float(g), float(b)) for g, b in layers),
    )


def report_to_json(rep: SolveReport) -> str:
    payload = {k: getattr(rep, k) for k in rep.__dataclass_fields__}
    payload["params"] = [list(p) for p in rep.params]
    return json.dumps(payload, indent=2)


def histogram_rows(inst: QuboInstance, amplitudes: np.ndarray, samples: np.ndarray):
    """(bitstring, probability, count) rows for every observed or likely outcome."""
    probs = np.abs(amplitudes) ** 2
    counts = np.bincount(samples, minlength=probs.size)
    rows = []
    for idx in range(probs.size):
        if counts[idx] or probs[idx] > 1e-12:
            bits = "".join(str((idx >> (inst.n - 1 - k)) & 1) for k in range(inst.n))
            rows.append((bits, float(probs[idx]), int(counts[idx])))
    return rows

"""Figure rendering for experiment outputs.

Figures are written next to the CSVs they visualize; the CSVs stay the
machine-readable source of truth.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def _save(fig, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _ok(rows, *keys):
    return [r for r in rows if not r.get("error") and all(r.get(k) not in ("", None) for k in keys)]


def plot_ar_comparison(rows, path) -> None:
    """Per-instance approximation ratios: original vs decomposed runs."""
    rows = _ok(rows, "ar_original")
    fig, ax = plt.subplots(figsize=(7, 4))
    xs = [r["instance"] for r in rows]
    ax.plot(xs, [r["ar_original"] for r in rows], "o-", label="original")
    for backend, marker in (("exact", "s--"), ("qaoa", "^--")):
        sub = _ok(rows, f"ar_decomposed_{backend}")
        if sub:
            ax.plot(
                [r["instance"] for r in sub],
                [r[f"ar_decomposed_{backend}"] for r in sub],
                marker,
                label=f"decomposed ({backend} subsolver)",
            )
    ax.set_xlabel("instance")
    ax.set_ylabel("approximation ratio")
    ax.set_ylim(0, 1.05)
    ax.legend(loc="lower right")
    ax.grid(alpha=0.3)
    _save(fig, path)


def plot_qubit_counts(rows, path) -> None:
    """Problem sizes before and after reduction."""
    rows = _ok(rows)
    fig, ax = plt.subplots(figsize=(7, 4))
    xs = [r["instance"] for r in rows]
    ax.bar([x - 0.2 for x in xs], [r["n"] for r in rows], width=0.2, label="original")
    for shift, backend in ((0.0, "exact"), (0.2, "qaoa")):
        sub = _ok(rows, f"n_final_{backend}")
        if sub:
            ax.bar(
                [r["instance"] + shift for r in sub],
                [r[f"n_final_{backend}"] for r in sub],
                width=0.2,
                label=f"reduced ({backend})",
            )
    ax.set_xlabel("instance")
    ax.set_ylabel("vertices")
    ax.legend()
    ax.grid(alpha=0.3, axis="y")
    _save(fig, path)


def plot_iteration_curve(rows, path) -> None:
    """Approximation ratio as the decomposition progresses."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot([r["iteration"] for r in rows], [r["approx_ratio"] for r in rows], "o-")
    ax.set_xlabel("decomposition iteration")
    ax.set_ylabel("approximation ratio")
    ax.grid(alpha=0.3)
    _save(fig, path)


def plot_probability_study(rows, path) -> None:
    """Optimal-solution probabilities against the uniform baseline."""
    rows = _ok(rows, "p_qaoa")
    fig, ax = plt.subplots(figsize=(7, 4))
    xs = [r["instance"] for r in rows]
    ax.semilogy(xs, [r["p_qaoa"] for r in rows], "o", label="qaoa (exact)")
    ax.semilogy(xs, [r["p_qaoa_sampled"] for r in rows], "x", label="qaoa (sampled)")
    ax.semilogy(xs, [r["p_uniform"] for r in rows], "s", label="uniform")
    ax.semilogy(xs, [r["p_uniform_scaled"] for r in rows], "^", label="uniform x 2^(n/2)")
    ax.set_xlabel("instance")
    ax.set_ylabel("optimal solution probability")
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    _save(fig, path)

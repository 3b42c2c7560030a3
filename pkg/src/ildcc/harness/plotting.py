"""Static PNG figures drawn from the aggregated tables."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .experiment import ILDCC, AggregateRow, TrafficRow, TrialResult  # noqa: E402

LABELS = {
    "mu_w": "normalized average distance (hops)",
    "t_r": "lifetime (rounds)",
    "e_p": "energy per node per round (J)",
    "lambda2": "algebraic connectivity",
}


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_vs_n(agg: Sequence[AggregateRow], metric: str, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for method in sorted({a.method for a in agg}):
        rows = sorted((a for a in agg if a.method == method and a.metric == metric), key=lambda a: a.n)
        if rows:
            ax.errorbar([a.n for a in rows], [a.mean for a in rows], yerr=[a.std for a in rows], marker="o", capsize=3, label=method)
    ax.set_xlabel("network size N")
    ax.set_ylabel(LABELS.get(metric, metric))
    if ax.get_legend_handles_labels()[0]:
        ax.legend()
    return _save(fig, path)


def plot_traffic(rows: Sequence[TrafficRow], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for n in sorted({r.n for r in rows}):
        pts = sorted((r for r in rows if r.n == n), key=lambda r: r.traffic)
        ax.plot([r.traffic for r in pts], [r.t_r for r in pts], marker="o", label=f"N={n}")
    ax.set_xlabel("packets transmitted per round")
    ax.set_ylabel(LABELS["t_r"])
    ax.set_yscale("log")
    if rows:
        ax.legend(fontsize="small")
    return _save(fig, path)


def plot_convergence(results: Sequence[TrialResult], path: Path) -> Path:
    """Best fitness per generation, first trial of every network size."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for r in results:
        if r.method == ILDCC and r.trial == 0 and r.history:
            ax.plot([h.generation for h in r.history], [h.best_fitness for h in r.history], label=f"N={r.n}")
    ax.set_xlabel("generation")
    ax.set_ylabel("best spectral Wiener index")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize="small")
    return _save(fig, path)


def render_figures(agg, traffic, results, out: Path) -> list[Path]:
    paths = [plot_vs_n(agg, m, out / f"fig_{m}_vs_n.png") for m in LABELS]
    paths.append(plot_traffic(traffic, out / "fig_t_r_vs_load.png"))
    paths.append(plot_convergence(results, out / "fig_convergence.png"))
    return paths

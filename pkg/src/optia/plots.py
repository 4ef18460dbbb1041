"""Figure rendering for experiment reports (headless Agg backend).

Figures are written straight to files alongside the tab-separated tables
the report path emits; nothing here opens a display.
"""

from __future__ import annotations

from typing import Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .analysis import ScalingFit  # noqa: E402

__all__ = ["plot_scaling", "plot_histogram"]


def plot_scaling(
    rows: Sequence[Tuple[int, float, float, float]],
    fit: Optional[ScalingFit],
    path: str,
    title: str = "mean evaluations vs n",
) -> None:
    """Log-log errorbar plot of (n, mean, ci_low, ci_high) sweep rows,
    with the fitted power law overlaid when available."""
    rows = sorted(rows)
    ns = np.array([r[0] for r in rows], dtype=float)
    means = np.array([r[1] for r in rows], dtype=float)
    lo = np.array([r[2] for r in rows], dtype=float)
    hi = np.array([r[3] for r in rows], dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    yerr = np.vstack([np.maximum(means - lo, 0.0), np.maximum(hi - means, 0.0)])
    ax.errorbar(ns, means, yerr=yerr, fmt="o", capsize=3, label="mean ± 95% CI")
    if fit is not None:
        grid = np.geomspace(ns.min(), ns.max(), 128)
        ax.plot(grid, np.exp(fit.intercept) * grid ** fit.slope, "--",
                label=f"fit: slope {fit.slope:.3f} (r² {fit.r_squared:.3f})")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("evaluations")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_histogram(evals: Sequence[int], path: str,
                   title: str = "evaluations to optimum") -> None:
    """Histogram of per-run evaluation counts (successful runs)."""
    vals = np.asarray(list(evals), dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    if vals.size:
        ax.hist(vals, bins=min(30, max(5, vals.size // 2)), edgecolor="black")
    ax.set_xlabel("evaluations")
    ax.set_ylabel("runs")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

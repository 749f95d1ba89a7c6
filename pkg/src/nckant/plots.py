"""Figure rendering for report paths.

Every helper writes one PNG next to the delimited output it illustrates.
Rendering is headless (Agg backend).
"""

from __future__ import annotations

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import models


def save_check_chart(report, path) -> None:
    """Horizontal bar chart of residual/tolerance per verification check."""
    checks = report.checks
    names = [c.id for c in checks]
    ratios = []
    for c in checks:
        if c.tolerance > 0 and np.isfinite(c.computed):
            ratios.append(max(abs(c.computed) / c.tolerance, 1e-18))
        else:
            ratios.append(1e-18 if c.passed else 10.0)
    colors = ["#2a9d8f" if c.passed else "#e76f51" for c in checks]

    fig, ax = plt.subplots(figsize=(9, 0.34 * len(checks) + 1.2))
    ax.barh(np.arange(len(checks)), ratios, color=colors)
    ax.set_yticks(np.arange(len(checks)))
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xscale("log")
    ax.axvline(1.0, color="k", lw=1, ls="--")
    ax.set_xlabel("residual / tolerance (1 = at tolerance)")
    ax.set_title("verification checks" + ("" if report.overall else "  [FAILURES]"))
    ax.invert_yaxis()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_cost_heatmap(cost, path, title="pairwise cost") -> None:
    """Heatmap of a cost matrix; infinite entries rendered as hatched max."""
    c = np.asarray(cost, dtype=float)
    finite = c[np.isfinite(c)]
    vmax = float(finite.max()) if finite.size else 1.0
    shown = np.where(np.isfinite(c), c, np.nan)

    fig, ax = plt.subplots(figsize=(6, 5))
    im = ax.imshow(shown, cmap="viridis", vmin=0.0, vmax=vmax)
    if not np.all(np.isfinite(c)):
        inf_mask = np.where(np.isfinite(c), np.nan, 1.0)
        ax.imshow(inf_mask, cmap="Greys", vmin=0, vmax=1.4, alpha=0.9)
        title = title + "  (grey = infinite)"
    fig.colorbar(im, ax=ax, shrink=0.85)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_ball_cost_sections(theta, path) -> None:
    """Two views of the ball cost: profile against the elevation angle, and a
    vertical-section heatmap of the cost from the ball center."""
    params = models.MoyalCostParams(theta)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))

    alphas = np.linspace(0, np.pi / 2, 400)
    pref = np.sqrt(theta / 2.0)
    prof = np.where(alphas <= np.pi / 4, pref * np.cos(alphas),
                    pref / (2.0 * np.sin(np.maximum(alphas, 1e-9))))
    axes[0].plot(alphas, prof)
    axes[0].axvline(np.pi / 4, color="k", ls="--", lw=1)
    axes[0].set_xlabel("elevation angle of the segment")
    axes[0].set_ylabel("cost per unit Euclidean length")
    axes[0].set_title(f"branch profile (theta = {theta:g})")

    n = 121
    xs = np.linspace(-1, 1, n)
    zs = np.linspace(-1, 1, n)
    grid = np.full((n, n), np.nan)
    for i, z in enumerate(zs):
        for j, x in enumerate(xs):
            if x * x + z * z <= 1.0:
                grid[i, j] = models.moyal_ball_cost((0.0, 0.0, 0.0), (x, 0.0, z), params)
    im = axes[1].imshow(grid, origin="lower", extent=[-1, 1, -1, 1], cmap="magma")
    fig.colorbar(im, ax=axes[1], shrink=0.9)
    axes[1].set_xlabel("x")
    axes[1].set_ylabel("z")
    axes[1].set_title("cost from the ball center (vertical section)")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_refinement_curve(sizes, values, direct, path) -> None:
    """Constrained supremum against nested sample size, with the direct value."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(sizes, values, "o-", label="constrained supremum")
    ax.axhline(direct, color="k", ls="--", lw=1, label="direct state distance")
    ax.set_xlabel("sample size (nested shells)")
    ax.set_ylabel("value")
    ax.set_title("sample refinement is monotone from above")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)

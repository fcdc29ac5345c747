"""Figure rendering for experiment curves.

The CSV files are the primary product; these helpers render companion PNG
figures next to them so a run is inspectable at a glance.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .experiments import CurveResult

__all__ = ["render_curves"]


def render_curves(
    curves: list[tuple[str, CurveResult]],
    path,
    title: str | None = None,
    show_bounds: bool = False,
) -> Path:
    """Render mean-error and success-rate curves for a set of results.

    show_bounds overlays the evaluated sample-count bounds as dashed
    vertical lines; they are computed with C=1, epsilon=1 and indicate shape
    only, never absolute placement.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, (ax_err, ax_rate) = plt.subplots(
        2, 1, figsize=(7.0, 7.5), sharex=True, constrained_layout=True
    )
    for label, curve in curves:
        m = curve.column("m")
        ax_err.errorbar(
            m,
            curve.column("mean_error"),
            yerr=curve.column("std_error"),
            marker="o",
            markersize=3.5,
            capsize=2,
            label=label,
        )
        ax_rate.plot(m, curve.column("success_rate"), marker="o", markersize=3.5, label=label)
        if show_bounds:
            for bound in curve.metadata.get("bounds", []):
                ax_err.axvline(
                    bound["m_bound"],
                    linestyle="--",
                    linewidth=0.8,
                    alpha=0.5,
                    color="gray",
                )
    if show_bounds:
        ax_err.plot([], [], linestyle="--", color="gray", label="m bounds (shape only)")
    ax_err.set_ylabel("normalized recovery error")
    ax_err.set_yscale("log")
    ax_err.grid(True, alpha=0.3)
    ax_err.legend(fontsize=8)
    ax_rate.set_xlabel("number of samples m")
    ax_rate.set_ylabel("success rate")
    ax_rate.set_ylim(-0.02, 1.02)
    ax_rate.grid(True, alpha=0.3)
    if title:
        ax_err.set_title(title)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path

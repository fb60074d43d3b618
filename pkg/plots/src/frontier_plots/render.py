"""Figure assembly for frontier and trial point tables.

The frontier is drawn as a connected curve in revenue order with one marker
per mixture ratio, colored by its share of fully-random traffic; trial points
(every candidate the search evaluated) sit underneath as a light scatter.
Points with infinite OPE error cannot be placed on either axis scale; they
are dropped and counted in the caption.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg", force=False)

import matplotlib.pyplot as plt
import numpy as np

from .reader import PointTable


class NoSupportedPoints(ValueError):
    """Every frontier point has infinite OPE error; there is nothing to draw."""


def _finite(table: PointTable):
    mask = np.isfinite(table.ope_mse)
    return mask, int((~mask).sum())


def build_figure(frontier: PointTable, trials: PointTable | None = None, log_y: bool = True):
    """Build the frontier figure; returns (figure, info dict).

    ``info`` reports how many points were drawn and dropped and whether the
    log scale survived (a zero error forces a linear fallback).
    """
    f_mask, f_dropped = _finite(frontier)
    if not f_mask.any():
        raise NoSupportedPoints(
            f"{frontier.path}: all {frontier.n} frontier points have infinite OPE error"
        )
    order = np.argsort(-frontier.revenue[f_mask], kind="stable")
    rev = frontier.revenue[f_mask][order]
    mse = frontier.ope_mse[f_mask][order]
    ratio = frontier.random_ratio[f_mask][order]

    t_dropped = 0
    t_shown = 0
    fig, ax = plt.subplots(figsize=(8.0, 5.5))
    if trials is not None:
        t_mask, t_dropped = _finite(trials)
        t_shown = int(t_mask.sum())
        ax.scatter(
            trials.revenue[t_mask],
            trials.ope_mse[t_mask],
            c=trials.random_ratio[t_mask],
            cmap="viridis",
            vmin=0.0,
            vmax=1.0,
            s=12,
            alpha=0.35,
            linewidths=0,
            label="evaluated candidates",
        )

    ax.plot(rev, mse, color="0.45", linewidth=1.2, zorder=2)
    points = ax.scatter(
        rev,
        mse,
        c=ratio,
        cmap="viridis",
        vmin=0.0,
        vmax=1.0,
        s=55,
        edgecolors="black",
        linewidths=0.6,
        zorder=3,
        label="frontier",
    )
    fig.colorbar(points, ax=ax, label="share of random traffic (alpha_1)")

    # a zero-error frontier point cannot sit on a log axis; any zero-error
    # trial is dominated only by another zero, so checking the frontier is enough
    use_log = log_y and bool(np.all(mse > 0.0))
    if use_log:
        ax.set_yscale("log")

    # call out the two ends of the trade-off
    ax.annotate(
        f"random {ratio[0]:.0%}",
        (rev[0], mse[0]),
        textcoords="offset points",
        xytext=(6, 6),
        fontsize=8,
    )
    if rev.size > 1:
        i_best = int(np.argmin(mse))
        ax.annotate(
            f"random {ratio[i_best]:.0%}",
            (rev[i_best], mse[i_best]),
            textcoords="offset points",
            xytext=(6, -10),
            fontsize=8,
        )

    ax.set_xlabel("expected revenue per user")
    ax.set_ylabel("OPE mean squared error")
    ax.set_title("Revenue vs estimation-accuracy frontier")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="upper left", fontsize=8)

    notes = []
    dropped = f_dropped + t_dropped
    if dropped:
        notes.append(f"{dropped} point(s) with unsupported evaluation (infinite error) not shown")
    if log_y and not use_log:
        notes.append("linear y scale (a zero-error point rules out the log scale)")
    if notes:
        fig.text(0.01, 0.01, "; ".join(notes), fontsize=7, color="0.35")

    info = {
        "frontier_shown": int(f_mask.sum()),
        "frontier_dropped": f_dropped,
        "trials_shown": t_shown,
        "trials_dropped": t_dropped,
        "log_scale": use_log,
    }
    return fig, info

"""Figures for convergence studies (written to files, never shown)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "lines.linewidth": 1.2,
    "lines.markersize": 5,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
}

MARKERS = {"classical": "o", "corrected": "*"}


def _series(records, attr):
    k = np.array([float(r.k) for r in records])
    e = np.array([getattr(r, attr) for r in records], dtype=float)
    ok = np.isfinite(e) & (e > 0)
    return k[ok], e[ok]


def _slope_guide(ax, k, e, order):
    if k.size < 2:
        return
    ref = e[-1] * (k / k[-1]) ** order
    ax.loglog(k, ref, "k:", lw=0.8, label=f"slope {order}")


def convergence_figure(studies, path, title="", guide_order=None):
    """Log-log error versus stepsize, one panel for local and one for global error.

    ``studies`` maps a label (e.g. approach name) to a list of records.
    """
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, 2, figsize=(8, 3.4), sharex=True)
        for ax, attr, name in zip(axes, ("local_err", "global_err"), ("local error", "global error")):
            for label, records in studies.items():
                k, e = _series(records, attr)
                ax.loglog(k, e, marker=MARKERS.get(label, "s"), label=label)
            if guide_order is not None:
                first = next(iter(studies.values()))
                k, e = _series(first, attr)
                _slope_guide(ax, k, e, guide_order)
            ax.set_xlabel("k")
            ax.set_ylabel(name)
            ax.legend()
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def cost_figure(studies, path, title=""):
    """Global error versus wall time."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.4))
        for label, records in studies.items():
            t = np.array([r.wall_time for r in records], dtype=float)
            e = np.array([r.global_err for r in records], dtype=float)
            ok = (t > 0) & (e > 0)
            ax.loglog(t[ok], e[ok], marker=MARKERS.get(label, "s"), label=label)
        ax.set_xlabel("wall time [s]")
        ax.set_ylabel("global error")
        ax.legend()
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def write_gnuplot_data(records, path):
    """Whitespace-separated columns: k local_err global_err wall_time_s."""
    with open(path, "w") as fh:
        fh.write("# k local_err global_err wall_time_s\n")
        for r in records:
            wall = r.wall_time if r.wall_time is not None else float("nan")
            fh.write(f"{float(r.k):.12e} {r.local_err:.6e} {r.global_err:.6e} {wall:.6e}\n")
    return path

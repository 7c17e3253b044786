"""Matplotlib figures written next to the CSV/JSON reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed salt and no timestamp keep SVG output byte-identical across runs
_RC = {
    "svg.hashsalt": "specflow",
    "svg.fonttype": "none",
    "font.size": 10,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.2,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)


def plot_branches(path, out_file, title=None):
    """Lifted eigenvalue branches lambda_j(t) of a tracked path."""
    times = np.asarray(path.times)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 4))
        for j, vals in sorted(path.branches().items()):
            ax.plot(times, vals, color="C0" if j < 0 else "C3")
        ax.axhline(0.0, color="0.5", lw=0.6, ls="--")
        ax.set_xlabel("t")
        ax.set_ylabel(r"$\lambda_j(t)$")
        ax.set_title(title or f"spectral flow = {path.cumulative_shift}")
        _save(fig, out_file)


def plot_window(window, out_file, title=None):
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 3.5))
        idx = window.indices
        ax.plot(idx, window.values, "o", ms=3)
        ax.axhline(0.0, color="0.5", lw=0.6, ls="--")
        ax.axvline(0.0, color="0.5", lw=0.6, ls=":")
        ax.set_xlabel("j")
        ax.set_ylabel(r"$\lambda_j$")
        if title:
            ax.set_title(title)
        _save(fig, out_file)


def plot_spectra(windows: dict, out_file, limit=40):
    """Overlay of several spectra near zero, one row per label."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 1 + 0.6 * len(windows)))
        for row, (label, w) in enumerate(windows.items()):
            vals = w.values[np.abs(w.values) <= np.sort(np.abs(w.values))[min(limit, len(w) - 1)]]
            ax.plot(vals, np.full(vals.shape, row), "|", ms=12)
        ax.set_yticks(range(len(windows)))
        ax.set_yticklabels(list(windows))
        ax.set_xlabel(r"$\lambda$")
        _save(fig, out_file)

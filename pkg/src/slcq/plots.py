"""Figure rendering for training and evaluation artifacts.

Every function writes one PNG next to the delimited data it visualizes.
The Agg backend is forced so rendering works without a display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import numpy.typing as npt

from .model import ControlField

__all__ = [
    "save_training_curve",
    "save_control_fields",
    "save_fidelity_scatter",
    "save_fidelity_histogram",
]

DPI = 150


def _finish(fig, path: str | Path) -> None:
    fig.tight_layout()
    fig.savefig(Path(path), dpi=DPI)
    plt.close(fig)


def save_training_curve(path: str | Path, j_history: npt.ArrayLike) -> None:
    """Ensemble performance versus iteration."""
    j = np.asarray(j_history, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(np.arange(j.size), j, lw=1.5)
    ax.set_xlabel("iteration")
    ax.set_ylabel("ensemble performance")
    ax.set_ylim(0, 1.02)
    ax.grid(alpha=0.3)
    _finish(fig, path)


def save_control_fields(path: str | Path, initial: ControlField, final: ControlField) -> None:
    """Initial and final control amplitudes over time, one panel each."""
    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for ax, control, label in ((ax0, initial, "initial"), (ax1, final, "final")):
        t = control.midpoints
        for m in range(control.n_channels):
            ax.plot(t, control.amplitudes[m], lw=1.2, label=f"u_{m + 1}")
        ax.set_ylabel(f"{label} amplitude")
        ax.grid(alpha=0.3)
    ax0.legend(ncol=min(initial.n_channels, 4), fontsize=9)
    ax1.set_xlabel("time")
    _finish(fig, path)


def save_fidelity_scatter(path: str | Path, fidelities: npt.ArrayLike, mean: float) -> None:
    """Per-sample fidelities with the mean marked."""
    fids = np.asarray(fidelities, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(np.arange(fids.size), fids, ".", ms=4)
    ax.axhline(mean, color="tab:red", lw=1.2, label=f"mean = {mean:.4f}")
    ax.set_xlabel("test sample")
    ax.set_ylabel("fidelity")
    ax.grid(alpha=0.3)
    ax.legend(loc="lower right")
    _finish(fig, path)


def save_fidelity_histogram(
    path: str | Path, edges: npt.ArrayLike, counts: npt.ArrayLike
) -> None:
    """Fidelity distribution over the test set."""
    edges = np.asarray(edges, dtype=float)
    counts = np.asarray(counts)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(edges[:-1], counts, width=np.diff(edges), align="edge", edgecolor="black", lw=0.4)
    nonzero = np.nonzero(counts)[0]
    if nonzero.size:
        lo = edges[max(nonzero[0] - 1, 0)]
        ax.set_xlim(max(0.0, lo), 1.0)
    ax.set_xlabel("fidelity")
    ax.set_ylabel("samples")
    ax.grid(alpha=0.3, axis="y")
    _finish(fig, path)

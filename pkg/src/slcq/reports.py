"""CSV and JSON artifact writers, plus the control-file reader.

Floats go to CSV with 17 significant digits so every value round-trips
exactly; re-reading a control file reproduces the in-memory amplitudes
bit for bit. JSON summaries embed the normalized config echo and the seed,
making each artifact reproducible from its own metadata.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np
import numpy.typing as npt

from .model import ControlField, UncertaintySample

__all__ = [
    "format_float",
    "write_training_log",
    "write_control_csv",
    "read_control_csv",
    "write_evaluation_csv",
    "write_summary",
]


def format_float(x: float) -> str:
    """Decimal form with 17 significant digits (exact float round-trip)."""
    return format(float(x), ".17g")


def _open_writer(path: Path):
    fh = open(path, "w", newline="")
    return fh, csv.writer(fh, lineterminator="\n")


def write_training_log(path: str | Path, j_history: npt.ArrayLike) -> None:
    """Write the per-iteration ensemble performance as (iteration, J_N) rows."""
    fh, writer = _open_writer(Path(path))
    with fh:
        writer.writerow(["iteration", "J_N"])
        for i, j in enumerate(np.asarray(j_history, dtype=float)):
            writer.writerow([i, format_float(j)])


def write_control_csv(path: str | Path, control: ControlField) -> None:
    """Write one row per slice: midpoint time, then one amplitude per channel."""
    fh, writer = _open_writer(Path(path))
    with fh:
        writer.writerow(["t"] + [f"u_{m + 1}" for m in range(control.n_channels)])
        mid = control.midpoints
        amps = control.amplitudes
        for q in range(control.n_slices):
            writer.writerow([format_float(mid[q])] + [format_float(v) for v in amps[:, q]])


def read_control_csv(path: str | Path, duration: float) -> ControlField:
    """Read a control file written by ``write_control_csv``.

    The slice count comes from the row count and the channel count from the
    header; ``duration`` must be supplied because the file stores midpoint
    times, not the horizon itself.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0] or rows[0][0] != "t":
        raise ValueError(f"{path} is not a control file (expected header starting with 't')")
    n_channels = len(rows[0]) - 1
    if n_channels < 1:
        raise ValueError(f"{path} has no amplitude columns")
    data = rows[1:]
    if not data:
        raise ValueError(f"{path} has no data rows")
    amps = np.empty((n_channels, len(data)))
    for q, row in enumerate(data):
        if len(row) != n_channels + 1:
            raise ValueError(f"{path} row {q + 2} has {len(row)} fields, expected {n_channels + 1}")
        amps[:, q] = [float(v) for v in row[1:]]
    return ControlField(duration=duration, n_slices=len(data), amplitudes=amps)


def write_evaluation_csv(
    path: str | Path,
    samples: tuple[UncertaintySample, ...],
    fidelities: npt.ArrayLike,
) -> None:
    """Write one row per test sample: index, omega, theta, fidelity."""
    fids = np.asarray(fidelities, dtype=float)
    if len(samples) != fids.size:
        raise ValueError(f"{len(samples)} samples but {fids.size} fidelities")
    fh, writer = _open_writer(Path(path))
    with fh:
        writer.writerow(["index", "omega", "theta", "fidelity"])
        for i, (sample, fid) in enumerate(zip(samples, fids)):
            if sample.kind != "modulated":
                raise ValueError("evaluation rows expect modulated samples")
            writer.writerow(
                [i, format_float(sample.omega), format_float(sample.theta), format_float(fid)]
            )


def write_summary(path: str | Path, payload: dict) -> None:
    """Write a JSON summary with stable formatting (two-space indent)."""
    with open(Path(path), "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")

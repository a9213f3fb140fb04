"""CSV and SVG output for SINR curves."""

from __future__ import annotations

import io

import numpy as np

from .runner import ExperimentResult

CSV_HEADER = "snapshot,algorithm,mean_sinr_db,cum_update_fraction"


def _fmt(v: float) -> str:
    v = float(v)
    if v == 0.0:
        return "0"
    return f"{v:.6g}"


def csv_text(result: ExperimentResult) -> str:
    if not result.labels or result.snapshots == 0:
        raise ValueError("no curves to write")
    db = result.mean_sinr_db
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for i in range(result.snapshots):
        for j, label in enumerate(result.labels):
            buf.write(f"{i + 1},{label},{_fmt(db[j, i])},{_fmt(result.cum_update_fraction[j, i])}\n")
    return buf.getvalue()


def write_csv(result: ExperimentResult, path) -> None:
    """Write one row per (snapshot, algorithm), snapshots ascending."""
    text = csv_text(result)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write CSV to {path}: {exc.strerror}") from exc


def emit_plot(result: ExperimentResult, path, labels=None, title=None) -> None:
    """Static SVG of mean SINR (dB) versus snapshot, one line per algorithm."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = list(result.labels if labels is None else labels)
    labels = [lab for lab in labels if lab in result.labels]
    if not labels or result.snapshots == 0:
        raise ValueError("no curves to plot")
    idx = np.arange(1, result.snapshots + 1)
    plt.rcParams["svg.hashsalt"] = "smjio"
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for lab in labels:
        db, _ = result.curve(lab)
        marker = "o" if result.snapshots == 1 else None
        ax.plot(idx, db, label=lab, marker=marker, linewidth=1.2)
    ax.set_xlabel("snapshot")
    ax.set_ylabel("mean output SINR (dB)")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower right", fontsize="small")
    fig.tight_layout()
    try:
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write plot to {path}: {exc.strerror}") from exc
    finally:
        plt.close(fig)

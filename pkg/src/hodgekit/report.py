"""Report writers: deterministic JSON, CSV tables and matplotlib figures.

Timing goes to a ``<stem>.timing.json`` sidecar so the main report is
byte-identical across repeated runs with the same configuration.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_json(obj, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def write_table_csv(table: dict, path) -> Path:
    """Columns of equal length, written in insertion order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cols = list(table)
    rows = zip(*(table[c] for c in cols))
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for r in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return path


def plot_table(table: dict, path, title: str = "", fitted: dict | None = None) -> Path | None:
    """Log-log plot of the first numeric column against the others.

    Returns ``None`` when there is nothing positive to plot.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    cols = [c for c in table if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in table[c])]
    if len(cols) < 2:
        return None
    x = np.asarray(table[cols[0]], float)
    fig, ax = plt.subplots(figsize=(5, 3.6))
    plotted = False
    for c in cols[1:]:
        y = np.asarray(table[c], float)
        ok = (x > 0) & (y > 0)
        if ok.sum() < 2:
            continue
        ax.loglog(x[ok], y[ok], "o-", label=c)
        plotted = True
    if not plotted:
        plt.close(fig)
        return None
    ax.set_xlabel(cols[0])
    if fitted:
        note = ", ".join(f"{k}={v:.4g}" for k, v in fitted.items() if isinstance(v, (int, float)))
        ax.set_title(f"{title}\n{note}" if title else note, fontsize=9)
    elif title:
        ax.set_title(title, fontsize=9)
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=110, metadata={"Software": None})
    plt.close(fig)
    return path


def write_experiment(report: dict, runtime: float, out_dir, stem: str) -> list[Path]:
    """Write ``stem.json``, ``stem.timing.json`` and per-table CSV/PNG files."""
    out_dir = Path(out_dir)
    written = [write_json(report, out_dir / f"{stem}.json"),
               write_json({"runtime_seconds": runtime}, out_dir / f"{stem}.timing.json")]
    for name, table in report.get("tables", {}).items():
        written.append(write_table_csv(table, out_dir / f"{stem}.{name}.csv"))
        fig = plot_table(table, out_dir / f"{stem}.{name}.png", title=f"{stem}: {name}",
                         fitted=report.get("fitted"))
        if fig is not None:
            written.append(fig)
    return written

"""Render sweep CSV tables to figures.

Strictly a presentation layer: everything plotted is read from the
table, nothing is recomputed. The expected input is the sweep CSV
contract (header omega_c,r,tau_over_Tbath,p0_over_P0,...). Such tables
encode quasithermal instability windows as empty p0_over_P0 cells; those
rows become NaN and break the p0/P0 and tau curves, while the rate
ratio r is drawn straight through.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

X_COLUMN = "omega_c"

# line styles fixed per column: ratio solid black, quasitemperature
# dashed red, ground-state enhancement dotted blue
STYLES = {
    "r": {"color": "black", "linestyle": "-"},
    "tau_over_Tbath": {"color": "red", "linestyle": "--"},
    "p0_over_P0": {"color": "blue", "linestyle": ":"},
}

LABELS = {
    "r": "r",
    "tau_over_Tbath": r"$\tau / T_{\mathrm{bath}}$",
    "p0_over_P0": r"$p_0 / P_0$",
}

# curves broken wherever this column is empty (no stationary state)
GAP_COLUMN = "p0_over_P0"
GAPPED_COLUMNS = ("p0_over_P0", "tau_over_Tbath")


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input table, columns, ranges, output path."""

    table: str
    output: str
    columns: tuple[str, ...] = ("r", "tau_over_Tbath", "p0_over_P0")
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None
    title: str = ""


_PRESET_COLUMNS = {
    "fig1": ("r", "tau_over_Tbath", "p0_over_P0"),
    "fig2": ("r", "tau_over_Tbath", "p0_over_P0"),
    "fig3": ("r", "p0_over_P0"),
}


def preset_spec(name: str, table: str, output: str) -> FigureSpec:
    if name not in _PRESET_COLUMNS:
        raise ValueError(f"unknown preset: {name!r}")
    return FigureSpec(
        table=table,
        output=output,
        columns=_PRESET_COLUMNS[name],
        x_range=(0.0, 10.0),
        title=name,
    )


def load_table(path: str, columns: tuple[str, ...]):
    """Parse the CSV into (x, {column: values}) with NaN for empty cells.

    Raises ValueError naming any requested column missing from the
    header, on an empty table, and on rows out of x order.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        rows = list(reader)
    if header is None or not rows:
        raise ValueError(f"{path}: table has no rows")
    wanted = (X_COLUMN,) + tuple(columns)
    for col in wanted:
        if col not in header:
            raise ValueError(f"{path}: column {col!r} not in table header")

    def cell(row, col):
        return float(row[col]) if row[col] != "" else np.nan

    x = np.array([cell(row, X_COLUMN) for row in rows])
    if np.any(np.isnan(x)) or np.any(np.diff(x) < 0):
        raise ValueError(f"{path}: rows must be ordered by {X_COLUMN}")
    data = {
        col: np.array([cell(row, col) for row in rows]) for col in columns
    }
    if GAP_COLUMN in data:
        gap = np.isnan(data[GAP_COLUMN])
        for col in GAPPED_COLUMNS:
            if col in data and col != GAP_COLUMN:
                data[col] = np.where(gap, np.nan, data[col])
    return x, data


def render(spec: FigureSpec) -> str:
    """Draw the spec to its output file and return the path.

    The output is written only after the table has parsed and every
    referenced column has been found.
    """
    x, data = load_table(spec.table, spec.columns)
    fig, ax = plt.subplots(figsize=(6.4, 4.0), dpi=150)
    try:
        for col in spec.columns:
            ax.plot(x, data[col], label=LABELS.get(col, col),
                    linewidth=1.2, **STYLES.get(col, {}))
        ax.set_xlabel(r"$\tilde\omega_0 / \omega$")
        if spec.x_range is not None:
            ax.set_xlim(*spec.x_range)
        if spec.y_range is not None:
            ax.set_ylim(*spec.y_range)
        if spec.title:
            ax.set_title(spec.title)
        ax.legend(loc="upper left", frameon=False)
        fig.tight_layout()
        fig.savefig(spec.output, metadata={"Software": "plotviz"})
    finally:
        plt.close(fig)
    return spec.output

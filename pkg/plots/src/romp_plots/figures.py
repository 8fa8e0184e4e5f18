"""Turn harness result CSVs into figures.

This package consumes only the public CSV schema; it never imports the
experiment code. The schema is therefore restated here and checked against
every input file. Rendering is a pure function of the parsed rows: the same
CSV always yields the same plotted series.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

EXPECTED_HEADER = [
    "d", "N", "n", "algorithm", "signal_kind", "trials",
    "exact_recovery_fraction", "mean_iterations", "mean_I_size", "mean_runtime_ms",
]
FIGURE_KINDS = ("percent", "boundary", "iterations")
SENTINEL_NO_BOUNDARY = -1

_INT_FIELDS = ("d", "N", "n", "trials")
_FLOAT_FIELDS = (
    "exact_recovery_fraction", "mean_iterations", "mean_I_size", "mean_runtime_ms",
)


class SchemaError(ValueError):
    """The input file does not match the harness CSV contract."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    title: str | None = None
    xlabel: str | None = None
    ylabel: str | None = None

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")


def read_rows(path: str | Path) -> list[dict]:
    """Parse a harness CSV, validating the header and field types."""
    path = Path(path)
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected a header row")
        if header != EXPECTED_HEADER:
            raise SchemaError(
                f"{path}: header {header!r} does not match the harness schema"
            )
        rows = []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(EXPECTED_HEADER):
                raise SchemaError(f"{path}:{lineno}: expected {len(EXPECTED_HEADER)} fields")
            row = dict(zip(EXPECTED_HEADER, record))
            try:
                for field in _INT_FIELDS:
                    row[field] = int(row[field])
                for field in _FLOAT_FIELDS:
                    row[field] = float(row[field])
            except ValueError as err:
                raise SchemaError(f"{path}:{lineno}: {err}")
            rows.append(row)
    return rows


def _series_percent(rows: list[dict]) -> dict[str, list[tuple[float, float]]]:
    algorithms = sorted({row["algorithm"] for row in rows})
    series: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        label = f"n = {row['n']}"
        if len(algorithms) > 1:
            label += f" ({row['algorithm']})"
        series.setdefault(label, []).append(
            (row["N"], 100.0 * row["exact_recovery_fraction"])
        )
    return {label: sorted(points) for label, points in series.items()}


def _series_boundary(rows: list[dict]) -> tuple[dict, int]:
    kept = [row for row in rows if row["N"] != SENTINEL_NO_BOUNDARY]
    skipped = len(rows) - len(kept)
    algorithms = sorted({row["algorithm"] for row in kept})
    series: dict[str, list[tuple[float, float]]] = {}
    for row in kept:
        label = row["algorithm"] if len(algorithms) > 1 else "99% level"
        series.setdefault(label, []).append((row["n"], row["N"]))
    return {label: sorted(points) for label, points in series.items()}, skipped


def _series_iterations(rows: list[dict]) -> dict[str, list[tuple[float, float]]]:
    series: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        series.setdefault(row["signal_kind"], []).append(
            (row["n"], row["mean_iterations"])
        )
    return {label: sorted(points) for label, points in series.items()}


_AXIS_DEFAULTS = {
    "percent": ("measurements N", "signals recovered (%)"),
    "boundary": ("sparsity n", "measurements N for 99% recovery"),
    "iterations": ("sparsity n", "mean iterations"),
}


def render(rows: list[dict], spec: FigureSpec, out: str | Path) -> dict:
    """Draw one figure and return the plotted series keyed by label."""
    if spec.kind == "percent":
        series = _series_percent(rows)
        skipped = 0
    elif spec.kind == "boundary":
        series, skipped = _series_boundary(rows)
        if skipped:
            print(f"skipping {skipped} row(s) with no 99% recovery level")
    else:
        series = _series_iterations(rows)
        skipped = 0

    xlabel, ylabel = _AXIS_DEFAULTS[spec.kind]
    fig, axes = plt.subplots(figsize=(6.4, 4.4))
    for label, points in sorted(series.items()):
        xs = [x for x, _ in points]
        ys = [y for _, y in points]
        axes.plot(xs, ys, marker="o", markersize=3.5, label=label)
    axes.set_xlabel(spec.xlabel or xlabel)
    axes.set_ylabel(spec.ylabel or ylabel)
    if spec.title:
        axes.set_title(spec.title)
    if series:
        axes.legend()
    if spec.kind == "percent":
        axes.set_ylim(-2.0, 102.0)
    axes.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return {"series": series, "skipped": skipped}

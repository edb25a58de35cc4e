"""Render measure-versus-violation scatter figures from scan CSV files.

The input is a scan CSV (one row per sampled state) whose header carries the
measure column and a b_max column. An optional boundary CSV supplies the
frontier polyline: either a family-sweep file (measure column + b_max per
family state) or a binned frontier file (bin_lo/bin_hi/mbv_b), detected by
header. The renderer never recomputes any quantity; everything plotted comes
from the files.

Output is deterministic: fixed style, Agg rasterization, constant metadata,
so the same inputs give byte-identical images.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import matplotlib
import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

SCHEMA_LINE = "# schema_version=1"

MEASURE_COLUMNS = {"tangle": "tau", "ggm": "ggm", "dms": "dms"}

# fixed axes per measure; None means autoscale from the plotted data
AXIS_LIMITS: dict[str, tuple[tuple[float, float], tuple[float, float]] | None] = {
    "tangle": ((0.0, 1.0), (0.0, 1.0)),
    "ggm": ((0.0, 0.5), (0.0, 1.0)),
    "dms": None,
}

DEFAULT_XLABELS = {
    "tangle": "tangle",
    "ggm": "genuine multipartite entanglement",
    "dms": "discord monogamy score",
}
YLABEL = "CHSH violation b_max"

MAX_POINTS = 200_000

POINT_COLOR = "#35618f"
BOUNDARY_COLOR = "#b2332a"


class CsvFormatError(Exception):
    """Input file does not match the expected CSV schema."""


@dataclass(frozen=True)
class FigureSpec:
    input_csv: str
    measure: str
    output: str
    boundary_csv: str | None = None
    dpi: int = 150
    xlabel: str | None = None
    ylabel: str | None = None


@dataclass(frozen=True)
class RenderResult:
    points_total: int
    points_plotted: int
    boundary_points: int
    xlim: tuple[float, float]
    ylim: tuple[float, float]
    xs: np.ndarray
    ys: np.ndarray


def read_rows(path: str) -> tuple[list[str], list[list[str]]]:
    """Header and data rows of a schema-stamped CSV file."""
    with open(path, newline="") as fh:
        first = fh.readline().rstrip("\n")
        if first != SCHEMA_LINE:
            raise CsvFormatError(
                f"{path}: expected leading {SCHEMA_LINE!r}, got {first!r}"
            )
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CsvFormatError(f"{path}: missing header row")
        return header, list(reader)


def column(header: list[str], rows: list[list[str]], name: str, path: str) -> np.ndarray:
    try:
        i = header.index(name)
    except ValueError:
        raise CsvFormatError(f"{path}: no {name!r} column in {header}") from None
    try:
        return np.array([float(r[i]) for r in rows])
    except (ValueError, IndexError) as exc:
        raise CsvFormatError(f"{path}: bad {name!r} cell: {exc}") from None


def boundary_polyline(path: str, measure: str) -> tuple[np.ndarray, np.ndarray]:
    """(x, b) polyline from a family-sweep or binned-frontier CSV, x ascending."""
    header, rows = read_rows(path)
    if "mbv_b" in header:
        lo = column(header, rows, "bin_lo", path)
        hi = column(header, rows, "bin_hi", path)
        return 0.5 * (lo + hi), column(header, rows, "mbv_b", path)
    x = column(header, rows, MEASURE_COLUMNS[measure], path)
    b = column(header, rows, "b_max", path)
    order = np.argsort(x, kind="stable")
    return x[order], b[order]


def render(spec: FigureSpec) -> RenderResult:
    if spec.measure not in MEASURE_COLUMNS:
        raise CsvFormatError(f"measure must be one of {tuple(MEASURE_COLUMNS)}")

    header, rows = read_rows(spec.input_csv)
    x = column(header, rows, MEASURE_COLUMNS[spec.measure], spec.input_csv)
    y = column(header, rows, "b_max", spec.input_csv)
    stride = max(1, math.ceil(x.size / MAX_POINTS))
    xs, ys = x[::stride], y[::stride]

    if spec.boundary_csv is not None:
        bx, by = boundary_polyline(spec.boundary_csv, spec.measure)
    else:
        bx = by = np.empty(0)

    matplotlib.rcdefaults()  # immune to user rc files
    fig = Figure(figsize=(6.4, 4.8), dpi=spec.dpi)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot()
    if xs.size:
        ax.scatter(xs, ys, s=2.0, c=POINT_COLOR, alpha=0.35, linewidths=0.0)
    if bx.size:
        ax.plot(bx, by, color=BOUNDARY_COLOR, linewidth=1.6)
    limits = AXIS_LIMITS[spec.measure]
    if limits is not None:
        ax.set_xlim(*limits[0])
        ax.set_ylim(*limits[1])
    ax.set_xlabel(spec.xlabel or DEFAULT_XLABELS[spec.measure])
    ax.set_ylabel(spec.ylabel or YLABEL)
    fig.savefig(spec.output, format="png", metadata={"Software": "figrender"})

    return RenderResult(
        points_total=int(x.size),
        points_plotted=int(xs.size),
        boundary_points=int(bx.size),
        xlim=tuple(float(v) for v in ax.get_xlim()),
        ylim=tuple(float(v) for v in ax.get_ylim()),
        xs=xs,
        ys=ys,
    )

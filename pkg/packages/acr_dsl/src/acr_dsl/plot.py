from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path

import matplotlib
import pandas as pd
import structlog
from matplotlib.figure import Figure

from acr_spaces.catalog import FunctionSpec
from acr_spaces.classifier import SpaceId, Status, VennPlacement
from acr_spaces.errors import InvalidParameterError, UndefinedAtPointError
from acr_spaces.numerics import as_rational, format_rational
from acr_spaces.sets import IntervalFamily
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings

log = structlog.get_logger("acr.plot")

COLUMNS = ["band", "x", "y", "x_end", "x_exact", "y_exact"]

# stable svg element ids
matplotlib.rcParams["svg.hashsalt"] = "acr"
matplotlib.rcParams["svg.fonttype"] = "none"

STATUS_CODES = {Status.OUT: 0, Status.UNKNOWN: 1, Status.IN: 2}


def _mark_rows(marks: IntervalFamily, lo: Fraction, hi: Fraction) -> list[dict]:
    rows = []
    for iv in marks.iter_intervals():
        if iv.left is not None and iv.left > hi:
            break
        piece = iv.clip(lo, hi)
        if piece is None:
            continue
        rows.append(
            {
                "band": "mark",
                "x": float(piece.left),
                "y": 0.0,
                "x_end": float(piece.right),
                "x_exact": format_rational(piece.left),
                "y_exact": "0",
            }
        )
    return rows


def emit_plot(
    f: FunctionSpec,
    lo: object,
    hi: object,
    samples: int,
    marks: IntervalFamily | None = None,
    *,
    settings: AnalysisSettings = DEFAULT_SETTINGS,
) -> pd.DataFrame:
    """Sample f at ``samples`` evenly spaced rational points of [lo, hi].

    y is the midpoint of the certified enclosure at x; points where f is undefined
    are skipped. ``marks`` adds a second band of (start, end) rows at level 0.
    """
    a, b = as_rational(lo), as_rational(hi)
    if not a < b:
        raise InvalidParameterError(f"plot range needs lo < hi, got {a}:{b}")
    if samples < 2:
        raise InvalidParameterError(f"samples must be >= 2, got {samples}")

    step = (b - a) / (samples - 1)
    rows = []
    skipped = 0
    for i in range(samples):
        x = a + i * step
        try:
            y = f.evaluate(x, settings).mid
        except UndefinedAtPointError:
            skipped += 1
            continue
        rows.append(
            {
                "band": "curve",
                "x": float(x),
                "y": float(y),
                "x_end": None,
                "x_exact": format_rational(x),
                "y_exact": format_rational(y),
            }
        )
    if marks is not None:
        rows.extend(_mark_rows(marks, a, b))
    log.info("plot.sampled", function=f.canonical(), rows=len(rows), skipped=skipped)
    return pd.DataFrame(rows, columns=COLUMNS)


def write_csv(table: pd.DataFrame, out_path: str | Path) -> Path:
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(out, index=False)
    log.info("plot.csv_written", path=str(out), rows=len(table))
    return out


def write_svg(table: pd.DataFrame, out_path: str | Path, title: str = "") -> Path:
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    curve = table[table["band"] == "curve"]
    marks = table[table["band"] == "mark"]

    fig = Figure(figsize=(8, 3))
    ax = fig.subplots()
    ax.plot(curve["x"], curve["y"], color="black", lw=1)
    if not marks.empty:
        ax.hlines(marks["y"], marks["x"], marks["x_end"], colors="red", lw=4)
    ax.axhline(0, color="grey", lw=0.5)
    ax.set_xlabel("x")
    ax.set_ylabel("f(x)")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out, format="svg", metadata={"Date": None})
    log.info("plot.svg_written", path=str(out))
    return out


def write_membership_svg(placements: Sequence[VennPlacement], out_path: str | Path) -> Path:
    """Membership chart: one row per function, one column per space."""
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    spaces = list(SpaceId)
    grid = [[STATUS_CODES[p.status(s)] for s in spaces] for p in placements]

    fig = Figure(figsize=(1.2 * len(spaces) + 3, 0.6 * len(placements) + 1.2))
    ax = fig.subplots()
    ax.imshow(grid, cmap="RdYlGn", vmin=0, vmax=2, aspect="auto")
    ax.set_xticks(range(len(spaces)), [s.value for s in spaces])
    ax.set_yticks(range(len(placements)), [p.function for p in placements])
    for row, placement in enumerate(placements):
        for col, space in enumerate(spaces):
            ax.text(col, row, placement.status(space).value, ha="center", va="center", fontsize=8)
    fig.tight_layout()
    fig.savefig(out, format="svg", metadata={"Date": None})
    log.info("plot.membership_written", path=str(out), functions=len(placements))
    return out

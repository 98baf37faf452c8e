#!/usr/bin/env python3
"""Render key-rate figures from sweep tables produced by the beamtap CLI.

Reads the CSV dialect emitted by ``beamtap sweep`` / ``beamtap figure``
(metadata comment lines, a fixed column header, one ``s:<label>`` flag
token naming each series) and draws one curve per series and
reconciliation direction: direct reconciliation dashed, reverse
reconciliation solid, the two sharing a color per series.  No physics
is recomputed here; the table is the only input.

Rows flagged ``ERR`` are dropped.  Input files are never modified, and
nothing is written until every input table has been parsed and
validated, so a bad table never leaves a partial image behind.

Usage::

    python3 plots/figplot.py --csv fig4.csv --out fig4.png
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import sys
from collections.abc import Mapping
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

EXPECTED_HEADER = (
    "x",
    "eta",
    "kappa",
    "n_e",
    "k_dr",
    "k_rr",
    "k_best",
    "k_upper",
    "mu_star_dr",
    "mu_star_rr",
    "flags",
)

_SCALES = ("log", "linear")


class SchemaError(ValueError):
    """Input table does not match the sweep CSV contract."""


@dataclasses.dataclass(frozen=True)
class Series:
    label: str
    x: tuple[float, ...]
    k_dr: tuple[float, ...]
    k_rr: tuple[float, ...]


@dataclasses.dataclass(frozen=True)
class SweepTable:
    x_label: str
    series: tuple[Series, ...]


@dataclasses.dataclass(frozen=True)
class FigureRecipe:
    csv_paths: tuple[Path, ...]
    out_path: Path
    figure_id: str = ""
    x_scale: str = "log"
    y_scale: str = "linear"
    series_labels: Mapping[str, str] | None = None

    def __post_init__(self) -> None:
        if not self.csv_paths:
            raise ValueError("recipe needs at least one input CSV")
        for scale in (self.x_scale, self.y_scale):
            if scale not in _SCALES:
                raise ValueError(f"axis scale must be one of {_SCALES}, got '{scale}'")


def _check_header(header: list[str] | None, path: Path) -> None:
    if header is None:
        raise SchemaError(f"{path}: empty table, no header row")
    for position, expected in enumerate(EXPECTED_HEADER):
        if position >= len(header):
            raise SchemaError(f"{path}: missing column '{expected}'")
        if header[position] != expected:
            raise SchemaError(
                f"{path}: expected column '{expected}' at position "
                f"{position + 1}, found '{header[position]}'"
            )
    if len(header) > len(EXPECTED_HEADER):
        extra = header[len(EXPECTED_HEADER)]
        raise SchemaError(f"{path}: unexpected column '{extra}'")


def load_table(path: Path) -> SweepTable:
    """Parse one sweep CSV into per-series curves.

    Metadata comment lines are scanned for the ``# x:`` line so the
    plot can label its abscissa; everything else before the header is
    ignored.
    """

    path = Path(path)
    if not path.exists():
        raise SchemaError(f"{path}: no such file")
    x_label = "x"
    data_lines: list[str] = []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            comment = line.lstrip("#").strip()
            if comment.startswith("x:"):
                x_label = comment[2:].strip()
            continue
        if line.strip():
            data_lines.append(line)

    reader = csv.reader(io.StringIO("\n".join(data_lines)))
    header = next(reader, None)
    _check_header(header, path)

    order: list[str] = []
    columns: dict[str, dict[str, list[float]]] = {}
    for row in reader:
        if len(row) != len(EXPECTED_HEADER):
            raise SchemaError(
                f"{path}: row with {len(row)} fields, expected {len(EXPECTED_HEADER)}"
            )
        tokens = row[-1].split(";") if row[-1] else []
        if "ERR" in tokens:
            continue
        label = tokens[0][2:] if tokens and tokens[0].startswith("s:") else ""
        if label not in columns:
            order.append(label)
            columns[label] = {"x": [], "k_dr": [], "k_rr": []}
        try:
            columns[label]["x"].append(float(row[0]))
            columns[label]["k_dr"].append(float(row[4]))
            columns[label]["k_rr"].append(float(row[5]))
        except ValueError as exc:
            raise SchemaError(f"{path}: non-numeric value in row: {exc}") from exc

    if not order:
        raise SchemaError(f"{path}: no data rows")
    series = tuple(
        Series(
            label=label,
            x=tuple(columns[label]["x"]),
            k_dr=tuple(columns[label]["k_dr"]),
            k_rr=tuple(columns[label]["k_rr"]),
        )
        for label in order
    )
    return SweepTable(x_label=x_label, series=series)


def _build_figure(recipe: FigureRecipe, tables: list[SweepTable]):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    index = 0
    for table in tables:
        for series in table.series:
            color = colors[index % len(colors)]
            index += 1
            display = series.label
            if recipe.series_labels is not None:
                display = recipe.series_labels.get(series.label, series.label)
            prefix = f"{display}, " if display else ""
            ax.plot(series.x, series.k_dr, linestyle="--", color=color,
                    label=prefix + "DR")
            ax.plot(series.x, series.k_rr, linestyle="-", color=color,
                    label=prefix + "RR")
    ax.set_xscale(recipe.x_scale)
    ax.set_yscale(recipe.y_scale)
    ax.set_xlabel(tables[0].x_label)
    ax.set_ylabel("secret-key rate [bits/mode]")
    if recipe.figure_id:
        ax.set_title(recipe.figure_id)
    ax.grid(True, which="both", alpha=0.25)
    ax.legend(loc="best")
    return fig


def render(recipe: FigureRecipe) -> Path:
    """Draw the recipe's curves and write the image file.

    All inputs are parsed before the output is opened, and the saved
    image carries no timestamps or environment strings, so rendering
    the same tables twice produces identical bytes.
    """

    tables = [load_table(path) for path in recipe.csv_paths]
    fig = _build_figure(recipe, tables)
    out = Path(recipe.out_path)
    suffix = out.suffix.lower()
    if suffix == ".svg":
        with plt.rc_context({"svg.hashsalt": "figplot"}):
            fig.savefig(out, metadata={"Date": None})
    elif suffix == ".png":
        fig.savefig(out, dpi=150, metadata={"Software": None})
    else:
        fig.savefig(out)
    plt.close(fig)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="figplot",
        description="Render key-rate figures from beamtap sweep CSVs.",
    )
    parser.add_argument("--csv", action="append", required=True,
                        metavar="PATH", help="input sweep CSV (repeatable)")
    parser.add_argument("--out", required=True, metavar="PATH",
                        help="output image path (.png or .svg)")
    parser.add_argument("--fig-id", default="", help="optional plot title")
    parser.add_argument("--x-scale", choices=_SCALES, default="log")
    parser.add_argument("--y-scale", choices=_SCALES, default="linear")
    args = parser.parse_args(argv)

    recipe = FigureRecipe(
        csv_paths=tuple(Path(p) for p in args.csv),
        out_path=Path(args.out),
        figure_id=args.fig_id,
        x_scale=args.x_scale,
        y_scale=args.y_scale,
    )
    try:
        render(recipe)
    except (SchemaError, OSError) as exc:
        print(f"figplot: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Render an error-curve CSV (columns t,reference,approx,envelope,omega)
into a static figure: t on the horizontal axis, log10 envelope-relative
error on the vertical axis.

The omega column carries floored values at exact-agreement cusps; rendering
draws the raw polyline (no smoothing or resampling) and only clamps the
vertical axis at the floor, so cusps appear as sharp dips without
interpolation artifacts.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["PlotSpec", "MissingColumn", "EmptyInput", "load_rows",
           "make_figure", "render", "main"]

REQUIRED_COLUMNS = ("t", "reference", "approx", "envelope", "omega")


class MissingColumn(Exception):
    """The CSV header lacks a required column."""


class EmptyInput(Exception):
    """The CSV has a header but no data rows."""


@dataclass(frozen=True)
class PlotSpec:
    input_csv: Path
    output_image: Path
    title: str = ""
    y_floor: float = -18.0


def load_rows(path: Path) -> list[dict]:
    """Read and type the CSV rows; validates the column contract."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in REQUIRED_COLUMNS:
            if column not in header:
                raise MissingColumn(f"column {column!r} missing from {path}")
        rows = [{k: float(row[k]) for k in REQUIRED_COLUMNS}
                for row in reader]
    if not rows:
        raise EmptyInput(f"no data rows in {path}")
    return rows


def make_figure(rows: list[dict], spec: PlotSpec):
    """Build the figure; separated from file output for testability."""
    ts = [row["t"] for row in rows]
    omegas = [max(row["omega"], spec.y_floor) for row in rows]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(ts, omegas, lw=1.0, color="tab:blue",
            solid_joinstyle="miter")
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\log_{10}$ envelope-relative error")
    ax.set_ylim(bottom=spec.y_floor)
    ax.grid(True, alpha=0.3)
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    return fig


def render(spec: PlotSpec) -> Path:
    """Render the CSV to the requested image file and return its path."""
    rows = load_rows(Path(spec.input_csv))
    fig = make_figure(rows, spec)
    out = Path(spec.output_image)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotview", description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--input", required=True, help="error-curve CSV path")
    parser.add_argument("--output", required=True, help="image path (.png/.svg)")
    parser.add_argument("--title", default="", help="figure title")
    parser.add_argument("--y-floor", type=float, default=-18.0,
                        help="vertical axis floor (default -18)")
    args = parser.parse_args(argv)
    spec = PlotSpec(input_csv=Path(args.input), output_image=Path(args.output),
                    title=args.title, y_floor=args.y_floor)
    try:
        render(spec)
    except (MissingColumn, EmptyInput, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

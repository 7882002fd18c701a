"""
Plot Rendering
Line plots of experiment CSV files written as SVG.
"""

import csv
from pathlib import Path
from typing import Dict, List, Tuple

import matplotlib

matplotlib.use("Agg")

from matplotlib.figure import Figure  # noqa: E402

from shared.errors import ConfigError  # noqa: E402
from shared.models.config import PlotSpec  # noqa: E402

LINE_STYLES = ["-", "--", "-.", ":", "-", "--"]
MARKERS = ["", "o", "s", "^", "D", "x"]


def read_columns(csv_path: Path) -> Dict[str, List[float]]:
    """
    Read a numeric CSV into columns.

    Raises:
        ConfigError: If the file has no header, no rows or non-numeric cells
    """
    with open(csv_path, newline="") as handle:
        reader = csv.DictReader(handle)
        if not reader.fieldnames:
            raise ConfigError(f"{csv_path} has no header row")
        columns: Dict[str, List[float]] = {name: [] for name in reader.fieldnames}
        for line, row in enumerate(reader, start=2):
            for name in reader.fieldnames:
                try:
                    columns[name].append(float(row[name]))
                except (TypeError, ValueError) as e:
                    raise ConfigError(f"{csv_path}:{line}: column {name!r} is not numeric") from e

    if not any(columns.values()):
        raise ConfigError(f"{csv_path} has no data rows")
    return columns


def build_figure(columns: Dict[str, List[float]], spec: PlotSpec) -> Tuple[Figure, object]:
    """Create the figure and axes for a plot spec."""
    missing = [name for name in [spec.x] + spec.y if name not in columns]
    if missing:
        raise ConfigError(f"columns not found in CSV: {', '.join(missing)}")

    fig = Figure(figsize=(6.4, 4.8))
    ax = fig.add_subplot(1, 1, 1)
    for idx, name in enumerate(spec.y):
        ax.plot(
            columns[spec.x], columns[name],
            linestyle=LINE_STYLES[idx % len(LINE_STYLES)],
            marker=MARKERS[idx % len(MARKERS)],
            markersize=3,
            label=name,
        )

    if spec.log_x:
        ax.set_xscale("log")
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel(spec.xlabel or spec.x)
    if spec.ylabel:
        ax.set_ylabel(spec.ylabel)
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="best")
    fig.tight_layout()
    return fig, ax


def render_svg(csv_path, plot_spec: PlotSpec, svg_path=None) -> Path:
    """
    Render a CSV file as an SVG line plot.

    Args:
        csv_path: CSV with a header row
        plot_spec: Columns and axis scales
        svg_path: Output path (default: csv_path with .svg suffix)

    Returns:
        Path of the written SVG

    Raises:
        ConfigError: Malformed or empty CSV (nothing is written)
    """
    csv_path = Path(csv_path)
    columns = read_columns(csv_path)
    fig, _ = build_figure(columns, plot_spec)

    svg_path = Path(svg_path) if svg_path else csv_path.with_suffix(".svg")
    fig.savefig(svg_path, format="svg")
    return svg_path

"""
Plot Node
Renders the queued CSV plots as SVG files.
"""

from pathlib import Path

from shared.errors import ConfigError
from shared.models.config import PlotSpec
from shared.models.state import ExperimentState
from skills.simulator.nodes.common import guarded
from skills.simulator.plotting import render_svg


@guarded
def render_plots(state: ExperimentState) -> ExperimentState:
    """Render each plot request; a failed plot is a warning, not a failure."""
    warnings = state.get("warnings", []).copy()
    out_dir = Path(state["output_dir"])
    written = {Path(p).name for p in state.get("csv_paths", [])}

    svg_paths = []
    for request in state.get("plots", []):
        if request["csv"] not in written:
            continue
        try:
            svg = render_svg(out_dir / request["csv"], PlotSpec(**request["spec"]))
        except ConfigError as e:
            warnings.append(f"plot {request['csv']}: {e}")
            continue
        svg_paths.append(str(svg))

    state["svg_paths"] = svg_paths
    state["warnings"] = warnings
    return state

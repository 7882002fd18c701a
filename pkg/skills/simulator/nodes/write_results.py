"""
Results Writer Node
Writes CSV tables, the resolved config and the run summary.
"""

import csv
import json
from pathlib import Path

from shared.models.state import ExperimentState
from skills.simulator.nodes.common import guarded


def format_value(value) -> str:
    """Locale-free text for a CSV cell ('.' decimal, 10 significant digits)."""
    return f"{float(value):.10g}"


def write_csv(path: Path, rows) -> Path:
    """Write rows (dicts sharing one key order) with a header line."""
    fieldnames = list(rows[0].keys())
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({name: format_value(row[name]) for name in fieldnames})
    return path


@guarded
def write_results(state: ExperimentState) -> ExperimentState:
    """
    Write every table in tables_out to the experiment directory.

    Also writes config.resolved.json and summary.json for provenance.
    """
    warnings = state.get("warnings", []).copy()
    out_dir = Path(state["output_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)

    csv_paths = []
    for name, rows in state.get("tables_out", {}).items():
        if not rows:
            warnings.append(f"{name}: no rows to write")
            continue
        csv_paths.append(str(write_csv(out_dir / name, rows)))

    state["config"].write_resolved(out_dir)
    summary = {
        "experiment": state["experiment"],
        "warnings": warnings,
        **state.get("summary", {}),
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True))

    state["csv_paths"] = csv_paths
    state["warnings"] = warnings
    return state

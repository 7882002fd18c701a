"""
LangGraph State Definition
TypedDict for the state that flows through the experiment graph.
"""

from typing import TypedDict, Optional, Any, List, Dict


class ExperimentState(TypedDict):
    """
    State object for the experiment LangGraph.

    Nodes read the configuration, add the scenario and detector tables,
    then the experiment node fills ``tables_out`` with CSV rows that
    the output nodes write to disk.

    Note: TypedDict doesn't support Pydantic models directly, so we use
    Any for Scenario, DetectorTables and ExperimentConfig.
    """

    # ===== INPUT =====
    experiment: str
    """Experiment name: 'pfa', 'avg_pfa', 'pd', 'roc' or 'training'"""

    config: Any
    """ExperimentConfig for this run"""

    # ===== PROCESSING DATA =====
    output_dir: Optional[str]
    """Resolved directory for this experiment's files"""

    scenario: Optional[Any]
    """Scenario with the nominal (assumed) noise covariance"""

    tables: Optional[Any]
    """DetectorTables built on the nominal covariance"""

    # ===== OUTPUT =====
    tables_out: Dict[str, List[Dict[str, float]]]
    """CSV file name -> rows (dicts with a fixed column order)"""

    plots: List[Dict[str, Any]]
    """Plot requests: {'csv': name, 'spec': PlotSpec kwargs}"""

    csv_paths: List[str]
    """CSV files written"""

    svg_paths: List[str]
    """SVG files written"""

    summary: Dict[str, Any]
    """Scalar diagnostics (variances, KS statistics, ...)"""

    # ===== ERROR HANDLING =====
    errors: List[str]
    """List of error messages encountered during processing"""

    warnings: List[str]
    """List of warning messages (non-fatal issues)"""

    failure: Optional[str]
    """'config' or 'numeric' once a node has failed"""


def create_initial_state(experiment: str, config: Any) -> ExperimentState:
    """
    Create an initial state for the experiment graph.

    Args:
        experiment: Experiment name
        config: ExperimentConfig

    Returns:
        Initial ExperimentState with empty outputs
    """
    return ExperimentState(
        # Input
        experiment=experiment,
        config=config,

        # Processing data (None initially)
        output_dir=None,
        scenario=None,
        tables=None,

        # Output
        tables_out={},
        plots=[],
        csv_paths=[],
        svg_paths=[],
        summary={},

        # Error handling
        errors=[],
        warnings=[],
        failure=None,
    )

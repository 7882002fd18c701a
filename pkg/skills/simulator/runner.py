"""
Experiment Runner
Programmatic entry points: one function per experiment.
"""

from typing import List

from shared.errors import ConfigError, NumericalError
from shared.models.config import ExperimentConfig
from shared.models.state import ExperimentState, create_initial_state
from shared.utils.progress import init_progress
from skills.simulator.graph.experiment_graph import create_experiment_graph


def run_experiment(experiment: str, config: ExperimentConfig, show_progress: bool = False) -> ExperimentState:
    """
    Run one experiment through the graph.

    Args:
        experiment: 'pfa', 'avg_pfa', 'pd', 'roc' or 'training'
        config: Experiment configuration
        show_progress: Print the per-node progress lines

    Returns:
        Final state; state['failure'] is set when a node failed
    """
    tracker = init_progress(enabled=show_progress and not config.quiet)
    tracker.start(f"Running {experiment}")
    app = create_experiment_graph()
    return app.invoke(create_initial_state(experiment, config))


def _csv_paths(state: ExperimentState) -> List[str]:
    failure = state.get("failure")
    message = "; ".join(state.get("errors", [])) or "experiment failed"
    if failure == "config":
        raise ConfigError(message)
    if failure == "numeric":
        raise NumericalError(message)
    if failure == "io":
        raise OSError(message)
    return list(state.get("csv_paths", []))


def run_pfa(config: ExperimentConfig) -> List[str]:
    """False alarm versus threshold; returns the CSV paths written."""
    return _csv_paths(run_experiment("pfa", config))


def run_avg_pfa(config: ExperimentConfig) -> List[str]:
    """Prior-averaged false alarm versus threshold."""
    return _csv_paths(run_experiment("avg_pfa", config))


def run_pd(config: ExperimentConfig) -> List[str]:
    """Detection probability versus threshold."""
    return _csv_paths(run_experiment("pd", config))


def run_roc(config: ExperimentConfig) -> List[str]:
    """ROC of the proposed and white-noise detectors."""
    return _csv_paths(run_experiment("roc", config))


def run_training(config: ExperimentConfig) -> List[str]:
    """ROC with an estimated covariance per training split."""
    return _csv_paths(run_experiment("training", config))

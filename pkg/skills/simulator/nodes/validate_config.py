"""
Config Validator Node
Checks the experiment request and resolves the output directory.
"""

from pathlib import Path

from shared.errors import ConfigError
from shared.models.config import ExperimentConfig
from shared.models.state import ExperimentState
from skills.simulator.nodes.common import guarded

EXPERIMENTS = ("pfa", "avg_pfa", "pd", "roc", "training")


@guarded
def validate_config(state: ExperimentState) -> ExperimentState:
    """
    Validate the configuration for the requested experiment.

    Accepts a ready ExperimentConfig or a plain dict of fields.

    Args:
        state: Initial state

    Returns:
        State with a validated config and output_dir
    """
    warnings = state.get("warnings", []).copy()
    experiment = state["experiment"]
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r} (choose from {', '.join(EXPERIMENTS)})")

    config = state["config"]
    if not isinstance(config, ExperimentConfig):
        config = ExperimentConfig.load(overrides=dict(config or {}))

    if experiment == "avg_pfa" and config.K < 100:
        warnings.append(f"K = {config.K} prior draws; at least 100 are recommended")
    if experiment == "training":
        if not config.training_splits():
            raise ConfigError("the training experiment needs n1/n2 or splits")
        for n1, _ in config.training_splits():
            if n1 < 2 * config.m:
                raise ConfigError(f"n1 = {n1} is too short to estimate a {2 * config.m}-dimensional covariance")
            if config.n_trials < config.n_estimates:
                raise ConfigError("n_trials must be at least n_estimates")

    state["config"] = config
    state["output_dir"] = str(Path(config.output_dir).expanduser() / experiment)
    state["warnings"] = warnings
    return state

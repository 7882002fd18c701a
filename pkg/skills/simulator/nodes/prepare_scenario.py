"""
Scenario Node
Draws the colored noise covariance and assembles the radar scenario.
"""

from shared.models.state import ExperimentState
from shared.numerics.rng import RngStream
from shared.radar.scenario import make_scenario, random_noise_cov
from skills.simulator.montecarlo import NOISE_STREAM
from skills.simulator.nodes.common import guarded


@guarded
def prepare_scenario(state: ExperimentState) -> ExperimentState:
    """Build the nominal scenario; Sigma_N = alpha H H^H + I."""
    config = state["config"]
    sigma_n = random_noise_cov(config.m, config.alpha, RngStream(seed=config.seed, stream_id=NOISE_STREAM))
    scenario = make_scenario(config.m, config.p, config.n, config.phi, config.theta, sigma_n)

    summary = dict(state.get("summary", {}))
    summary["noise_trace"] = float(scenario.sigma_n.trace().real)
    state["scenario"] = scenario
    state["summary"] = summary
    return state

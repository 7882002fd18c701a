"""
Averaged False Alarm Node
Pfa averaged over a Gaussian perturbation prior on the noise covariance.
"""

import numpy as np

from shared.analysis.null import avg_pfa
from shared.detector.statistic import threshold_grid
from shared.models.state import ExperimentState
from shared.numerics.rng import RngStream
from shared.providers.perturbation import PerturbationPrior
from skills.simulator.montecarlo import (
    PRIOR_STREAM,
    TRIAL_STREAM,
    binomial_ci,
    exceedance,
    simulate_statistics,
)
from skills.simulator.nodes.common import add_plot, columns_to_rows, guarded

THEORY_TOL = 1e-6


@guarded
def run_avg_pfa(state: ExperimentState) -> ExperimentState:
    """
    First-order and direct averaged Pfa next to Monte Carlo with a fresh
    Sigma' per trial, one file per rho.
    """
    config = state["config"]
    scenario = state["scenario"]
    tables = state["tables"]
    tables_out = dict(state.get("tables_out", {}))
    gammas = threshold_grid(config.n_gamma)
    zero_mean = np.zeros((2 * config.m, config.n))

    for r_idx, rho in enumerate(config.rho):
        prior = PerturbationPrior(scenario.sigma_n, rho)
        prior_rng = RngStream(seed=config.seed, stream_id=PRIOR_STREAM, key=(r_idx,))

        taylor = avg_pfa(gammas, tables, prior, config.K, mode="taylor",
                         rng=prior_rng, tol=THEORY_TOL, threads=config.threads)
        direct = avg_pfa(gammas, tables, prior, config.K, mode="direct",
                         rng=prior_rng, tol=THEORY_TOL, threads=config.threads)

        statistics = simulate_statistics(
            [tables], zero_mean,
            RngStream(seed=config.seed, stream_id=TRIAL_STREAM, key=(r_idx,)),
            config.n_trials, prior=prior,
            batch_size=config.batch_size, threads=config.threads,
            desc=f"H0 prior rho={rho:g}", quiet=config.quiet
        )[0]
        empirical = exceedance(statistics, gammas)
        ci_low, ci_high = binomial_ci(empirical, config.n_trials)

        name = f"avg_pfa_rho{rho:g}.csv"
        tables_out[name] = columns_to_rows({
            "gamma": gammas,
            "pfa_taylor": taylor,
            "pfa_direct": direct,
            "pfa_empirical": empirical,
            "ci_low": ci_low,
            "ci_high": ci_high,
        })
        add_plot(
            state, name, x="gamma", y=["pfa_taylor", "pfa_direct", "pfa_empirical"], log_y=True,
            title=f"Averaged false alarm probability, rho = {rho:g}", xlabel="threshold", ylabel="Pfa"
        )

    state["tables_out"] = tables_out
    return state

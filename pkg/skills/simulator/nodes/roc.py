"""
ROC Node
Proposed detector against the white-noise one-bit baseline.
"""

import numpy as np

from shared.detector.tables import white_noise_tables
from shared.models.state import ExperimentState
from shared.numerics.linalg import composite_mean
from shared.numerics.rng import RngStream
from shared.radar.scenario import beta_for_snr
from skills.simulator.montecarlo import TRIAL_STREAM, binomial_ci, roc_curve, simulate_statistics
from skills.simulator.nodes.common import add_plot, columns_to_rows, guarded, mismatch_cases

PFA_FLOOR = 1e-3


@guarded
def run_roc(state: ExperimentState) -> ExperimentState:
    """
    ROC curves per SNR and rho on common random numbers.

    Thresholds are empirical quantiles of each detector's own null
    statistics, so both curves share the Pfa grid.
    """
    config = state["config"]
    scenario = state["scenario"]
    tables = state["tables"]
    white = white_noise_tables(scenario)
    tables_out = dict(state.get("tables_out", {}))
    pfa_grid = np.logspace(np.log10(PFA_FLOOR), 0.0, config.n_gamma)
    zero_mean = np.zeros((2 * config.m, config.n))

    for s_idx, snr in enumerate(config.snr_db):
        beta = beta_for_snr(snr, config.p, scenario.sigma_n, config.phase)
        mean = composite_mean(scenario.w, beta)

        for r_idx, rho, true_cov in mismatch_cases(state):
            h0 = simulate_statistics(
                [tables, white], zero_mean,
                RngStream(seed=config.seed, stream_id=TRIAL_STREAM, key=(0, s_idx, r_idx)),
                config.n_trials, sigma=true_cov.sigma,
                batch_size=config.batch_size, threads=config.threads,
                desc=f"H0 snr={snr:g} rho={rho:g}", quiet=config.quiet
            )
            h1 = simulate_statistics(
                [tables, white], mean,
                RngStream(seed=config.seed, stream_id=TRIAL_STREAM, key=(1, s_idx, r_idx)),
                config.n_trials, sigma=true_cov.sigma,
                batch_size=config.batch_size, threads=config.threads,
                desc=f"H1 snr={snr:g} rho={rho:g}", quiet=config.quiet
            )

            pd_proposed = roc_curve(h0[0], h1[0], pfa_grid)
            pd_white = roc_curve(h0[1], h1[1], pfa_grid)
            proposed_low, proposed_high = binomial_ci(pd_proposed, config.n_trials)
            white_low, white_high = binomial_ci(pd_white, config.n_trials)

            name = f"roc_snr{snr:g}_rho{rho:g}.csv"
            tables_out[name] = columns_to_rows({
                "pfa": pfa_grid,
                "pd_proposed": pd_proposed,
                "pd_white": pd_white,
                "pd_proposed_low": proposed_low,
                "pd_proposed_high": proposed_high,
                "pd_white_low": white_low,
                "pd_white_high": white_high,
            })
            add_plot(
                state, name, x="pfa", y=["pd_proposed", "pd_white"], log_x=True,
                title=f"ROC, SNR = {snr:g} dB, rho = {rho:g}", xlabel="Pfa", ylabel="Pd"
            )

    state["tables_out"] = tables_out
    return state

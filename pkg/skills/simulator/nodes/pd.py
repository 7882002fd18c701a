"""
Detection Node
Signal-present Monte Carlo against the exact and low-SNR Pd laws.
"""

import numpy as np

from shared.analysis.nonnull import nonnull_moments, pd_exact, pd_low_snr, pd_low_snr_mismatched
from shared.analysis.null import upsilon1_sq
from shared.detector.statistic import threshold_grid
from shared.models.state import ExperimentState
from shared.numerics.linalg import composite_mean
from shared.numerics.rng import RngStream
from shared.radar.scenario import beta_for_snr
from skills.simulator.montecarlo import (
    THEORY_STREAM,
    TRIAL_STREAM,
    binomial_ci,
    exceedance,
    simulate_statistics,
)
from skills.simulator.nodes.common import add_plot, columns_to_rows, guarded, mismatch_cases

THEORY_TOL = 1e-6
UPPER_QUANTILE = 0.999


@guarded
def run_pd(state: ExperimentState) -> ExperimentState:
    """
    Pd versus threshold for every SNR, matched and per mismatch level.

    The threshold grid runs from 0 to the larger of the 1e-3 Pfa
    threshold and the 99.9% quantile of the simulated statistic.
    """
    config = state["config"]
    scenario = state["scenario"]
    tables = state["tables"]
    theory_rng = RngStream(seed=config.seed, stream_id=THEORY_STREAM, key=(1,))
    tables_out = dict(state.get("tables_out", {}))
    summary = dict(state.get("summary", {}))

    cases = mismatch_cases(state)
    for s_idx, snr in enumerate(config.snr_db):
        beta = beta_for_snr(snr, config.p, scenario.sigma_n, config.phase)
        mean = composite_mean(scenario.w, beta)

        for r_idx, rho, true_cov in cases:
            case_rng = theory_rng.child(s_idx, r_idx)
            mismatched = rho > 0
            moments = nonnull_moments(
                tables, scenario, beta,
                true_cov=true_cov if mismatched else None,
                tol=THEORY_TOL, rng=case_rng.child(0), threads=config.threads
            )
            if mismatched:
                analysis = upsilon1_sq(tables, true_cov, tol=config.tol,
                                       rng=case_rng.child(1), threads=config.threads)
                ratio = analysis.variance_ratio
            else:
                ratio = 1.0

            statistics = simulate_statistics(
                [tables], mean,
                RngStream(seed=config.seed, stream_id=TRIAL_STREAM, key=(s_idx, r_idx)),
                config.n_trials, sigma=true_cov.sigma,
                batch_size=config.batch_size, threads=config.threads,
                desc=f"H1 snr={snr:g} rho={rho:g}", quiet=config.quiet
            )[0]

            upper = max(threshold_grid(2, ratio)[-1], float(np.quantile(statistics, UPPER_QUANTILE)))
            gammas = np.linspace(0.0, upper, config.n_gamma)
            exact = pd_exact(gammas, moments)
            if mismatched:
                low_snr = pd_low_snr_mismatched(gammas, analysis, beta)
            else:
                low_snr = pd_low_snr(gammas, tables.upsilon_sq, beta)
            empirical = exceedance(statistics, gammas)
            ci_low, ci_high = binomial_ci(empirical, config.n_trials)

            name = f"pd_snr{snr:g}_rho{rho:g}.csv"
            tables_out[name] = columns_to_rows({
                "gamma": gammas,
                "pd_exact": exact,
                "pd_low_snr": low_snr,
                "pd_empirical": empirical,
                "ci_low": ci_low,
                "ci_high": ci_high,
            })
            add_plot(
                state, name, x="gamma", y=["pd_exact", "pd_low_snr", "pd_empirical"],
                title=f"Detection probability, SNR = {snr:g} dB, rho = {rho:g}",
                xlabel="threshold", ylabel="Pd"
            )
            summary[f"snr={snr:g},rho={rho:g}"] = {
                "beta_abs": abs(beta),
                "lambda": [float(v) for v in moments.lam],
                "noncentrality": [float(v) for v in moments.noncentrality],
                "mean_abs_error_exact": float(np.mean(np.abs(exact - empirical))),
                "mean_abs_error_low_snr": float(np.mean(np.abs(low_snr - empirical))),
            }

    state["tables_out"] = tables_out
    state["summary"] = summary
    return state

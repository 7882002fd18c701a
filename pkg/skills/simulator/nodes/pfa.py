"""
False Alarm Node
Null-hypothesis Monte Carlo against the chi-square and mismatch laws.
"""

import numpy as np
from scipy import stats

from shared.analysis.null import pfa_mismatched, threshold_mismatched, upsilon1_sq
from shared.detector.statistic import pfa_for_threshold, threshold_for_pfa, threshold_grid
from shared.models.state import ExperimentState
from shared.numerics.rng import RngStream
from skills.simulator.montecarlo import (
    THEORY_STREAM,
    TRIAL_STREAM,
    binomial_ci,
    exceedance,
    simulate_statistics,
)
from skills.simulator.nodes.common import add_plot, columns_to_rows, guarded, mismatch_cases

NOMINAL_PFA = 0.01


@guarded
def run_pfa(state: ExperimentState) -> ExperimentState:
    """
    Empirical and theoretical Pfa versus threshold, one file per rho.

    rho = 0 is compared with exp(-gamma / 2); a mismatched Sigma' with
    exp(-upsilon^2 gamma / (2 upsilon1^2)). The summary records the
    Kolmogorov-Smirnov distance to chi2_2 and the Pfa at the nominal and
    CFAR-adjusted thresholds.
    """
    config = state["config"]
    tables = state["tables"]
    theory_rng = RngStream(seed=config.seed, stream_id=THEORY_STREAM)
    tables_out = dict(state.get("tables_out", {}))
    summary = dict(state.get("summary", {}))

    analyses = {}
    for r_idx, rho, true_cov in mismatch_cases(state):
        if rho > 0:
            analyses[r_idx] = upsilon1_sq(
                tables, true_cov, tol=config.tol,
                rng=theory_rng.child(r_idx), threads=config.threads
            )
    ratio = max([a.variance_ratio for a in analyses.values()], default=1.0)
    gammas = threshold_grid(config.n_gamma, ratio)
    gamma_nominal = float(threshold_for_pfa(NOMINAL_PFA))

    zero_mean = np.zeros((2 * config.m, config.n))
    for r_idx, rho, true_cov in mismatch_cases(state):
        statistics = simulate_statistics(
            [tables], zero_mean,
            RngStream(seed=config.seed, stream_id=TRIAL_STREAM, key=(r_idx,)),
            config.n_trials, sigma=true_cov.sigma,
            batch_size=config.batch_size, threads=config.threads,
            desc=f"H0 rho={rho:g}", quiet=config.quiet
        )[0]

        analysis = analyses.get(r_idx)
        if analysis is None:
            theory = pfa_for_threshold(gammas)
        else:
            theory = pfa_mismatched(gammas, analysis.upsilon_sq, analysis.upsilon1_sq)
        empirical = exceedance(statistics, gammas)
        ci_low, ci_high = binomial_ci(empirical, config.n_trials)

        name = f"pfa_rho{rho:g}.csv"
        tables_out[name] = columns_to_rows({
            "gamma": gammas,
            "pfa_theory": theory,
            "pfa_empirical": empirical,
            "ci_low": ci_low,
            "ci_high": ci_high,
        })
        add_plot(
            state, name, x="gamma", y=["pfa_theory", "pfa_empirical"], log_y=True,
            title=f"False alarm probability, rho = {rho:g}", xlabel="threshold", ylabel="Pfa"
        )

        ks = stats.kstest(statistics, stats.chi2(2).cdf)
        entry = {
            "ks_statistic": float(ks.statistic),
            "ks_pvalue": float(ks.pvalue),
            "pfa_at_nominal_threshold": float(exceedance(statistics, np.array([gamma_nominal]))[0]),
        }
        if analysis is not None:
            gamma_cfar = threshold_mismatched(NOMINAL_PFA, analysis.upsilon_sq, analysis.upsilon1_sq)
            entry.update({
                "upsilon1_sq": analysis.upsilon1_sq,
                "variance_ratio": analysis.variance_ratio,
                "cfar_threshold": gamma_cfar,
                "pfa_at_cfar_threshold": float(exceedance(statistics, np.array([gamma_cfar]))[0]),
            })
        summary[f"rho={rho:g}"] = entry

    state["tables_out"] = tables_out
    state["summary"] = summary
    return state

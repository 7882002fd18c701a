"""
Training Node
Detector built on a one-bit covariance estimate from a noise-only window.

The n snapshots are split into n1 training and n2 detection snapshots.
The amplitude is scaled by sqrt(n / n2) so the transmitted signal energy
matches the full-window case; the white-noise baseline needs no training
and uses all n snapshots at the unscaled amplitude.
"""

import math
from typing import List

import numpy as np

from shared.analysis.estimation import estimate_cov_one_bit
from shared.detector.tables import build_noise_tables, build_signal_tables, white_noise_tables
from shared.models.state import ExperimentState
from shared.numerics.linalg import composite_mean
from shared.numerics.rng import RngStream
from shared.radar.quantizer import simulate_quantized
from shared.radar.scenario import beta_for_snr, with_snapshots
from skills.simulator.montecarlo import (
    TABLE_STREAM,
    TRAINING_STREAM,
    TRIAL_STREAM,
    roc_curve,
    simulate_statistics,
)
from skills.simulator.nodes.common import add_plot, columns_to_rows, guarded

PFA_FLOOR = 1e-3


def _split_trials(n_trials: int, parts: int) -> List[int]:
    base, extra = divmod(n_trials, parts)
    return [base + (1 if idx < extra else 0) for idx in range(parts)]


@guarded
def run_training(state: ExperimentState) -> ExperimentState:
    """
    ROC of the estimated-covariance detector per (n1, n2) split, next to
    the known-covariance detector on the same n2 snapshots and the white
    baseline on all n.

    Trials are spread over n_estimates independent covariance estimates.
    """
    config = state["config"]
    scenario = state["scenario"]
    known_noise = state["tables"].noise
    white = white_noise_tables(scenario)
    tables_out = dict(state.get("tables_out", {}))
    pfa_grid = np.logspace(np.log10(PFA_FLOOR), 0.0, config.n_gamma)
    trial_counts = _split_trials(config.n_trials, config.n_estimates)

    for s_idx, snr in enumerate(config.snr_db):
        beta = beta_for_snr(snr, config.p, scenario.sigma_n, config.phase)

        white_stats = [
            simulate_statistics(
                [white], mean,
                RngStream(seed=config.seed, stream_id=TRIAL_STREAM, key=(hyp, s_idx)),
                config.n_trials, sigma=scenario.composite.sigma,
                batch_size=config.batch_size, threads=config.threads,
                desc=f"white snr={snr:g}", quiet=config.quiet
            )[0]
            for hyp, mean in enumerate([np.zeros((2 * config.m, config.n)), composite_mean(scenario.w, beta)])
        ]
        pd_white = roc_curve(white_stats[0], white_stats[1], pfa_grid)

        for split_idx, (n1, n2) in enumerate(config.training_splits()):
            detection = with_snapshots(scenario, n2)
            mean_h1 = composite_mean(detection.w, beta * math.sqrt(config.n / n2))
            known = build_signal_tables(detection, known_noise)

            pooled = {key: [] for key in ("est0", "est1", "known0", "known1")}
            for e_idx, count in enumerate(trial_counts):
                if count == 0:
                    continue
                training = simulate_quantized(
                    scenario, 0.0,
                    RngStream(seed=config.seed, stream_id=TRAINING_STREAM, key=(s_idx, split_idx, e_idx)),
                    n_snapshots=n1
                )
                estimate = estimate_cov_one_bit(training, scenario.composite.d)
                noise_hat = build_noise_tables(
                    estimate.c, tol=config.tol,
                    rng=RngStream(seed=config.seed, stream_id=TABLE_STREAM, key=(1, split_idx, e_idx)),
                    threads=config.threads
                )
                estimated = build_signal_tables(detection, noise_hat, d_diag=scenario.composite.d)

                for hyp, mean in enumerate([np.zeros((2 * config.m, n2)), mean_h1]):
                    est_stats, known_stats = simulate_statistics(
                        [estimated, known], mean,
                        RngStream(seed=config.seed, stream_id=TRIAL_STREAM,
                                  key=(2 + hyp, s_idx, split_idx, e_idx)),
                        count, sigma=scenario.composite.sigma,
                        batch_size=config.batch_size, threads=config.threads,
                        desc=f"n1={n1} estimate {e_idx}", quiet=config.quiet
                    )
                    pooled[f"est{hyp}"].append(est_stats)
                    pooled[f"known{hyp}"].append(known_stats)

            stats = {key: np.concatenate(parts) for key, parts in pooled.items()}
            name = f"training_snr{snr:g}_n1{n1}_n2{n2}.csv"
            tables_out[name] = columns_to_rows({
                "n1": np.full(pfa_grid.size, n1),
                "n2": np.full(pfa_grid.size, n2),
                "pfa_grid": pfa_grid,
                "pd_proposed": roc_curve(stats["est0"], stats["est1"], pfa_grid),
                "pd_white": pd_white,
                "pd_known_cov": roc_curve(stats["known0"], stats["known1"], pfa_grid),
            })
            add_plot(
                state, name, x="pfa_grid", y=["pd_proposed", "pd_white", "pd_known_cov"], log_x=True,
                title=f"Training split n1 = {n1}, n2 = {n2}, SNR = {snr:g} dB", xlabel="Pfa", ylabel="Pd"
            )

    state["tables_out"] = tables_out
    return state

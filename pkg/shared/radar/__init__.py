"""
Radar Package
MIMO radar scenarios and one-bit quantized observations.
"""

from shared.radar.scenario import (
    ula_steering,
    lfm_waveform,
    make_scenario,
    with_noise,
    with_snapshots,
    random_noise_cov,
    perturb_cov,
    snr_db,
    beta_for_snr,
)
from shared.radar.quantizer import quantize, simulate_quantized, simulate_sign_batch

__all__ = [
    # Scenario
    "ula_steering",
    "lfm_waveform",
    "make_scenario",
    "with_noise",
    "with_snapshots",
    "random_noise_cov",
    "perturb_cov",
    "snr_db",
    "beta_for_snr",

    # Quantization
    "quantize",
    "simulate_quantized",
    "simulate_sign_batch",
]

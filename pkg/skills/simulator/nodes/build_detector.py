"""
Detector Node
Builds (or loads from the table cache) the Rao detector tables.
"""

import numpy as np

from shared.detector.tables import build_noise_tables, build_signal_tables
from shared.models.config import ExperimentConfig
from shared.models.detector import NoiseTables
from shared.models.state import ExperimentState
from shared.numerics.rng import RngStream
from shared.storage.table_store import TableStore
from skills.simulator.montecarlo import TABLE_STREAM
from skills.simulator.nodes.common import guarded


def get_noise_tables(c: np.ndarray, config: ExperimentConfig) -> NoiseTables:
    """
    Noise tables for a coherence matrix, using the SQLite cache when enabled.

    Args:
        c: 2m x 2m coherence matrix
        config: Run configuration (tol, seed, threads, table_cache)
    """
    store = TableStore() if config.table_cache else None
    if store is not None:
        cached = store.get_tables(c, config.tol)
        if cached is not None:
            return cached

    tables = build_noise_tables(
        c, tol=config.tol,
        rng=RngStream(seed=config.seed, stream_id=TABLE_STREAM),
        threads=config.threads
    )
    if store is not None:
        store.save_tables(tables)
    return tables


@guarded
def build_detector(state: ExperimentState) -> ExperimentState:
    """Attach DetectorTables for the nominal covariance to the state."""
    scenario = state["scenario"]
    noise = get_noise_tables(scenario.composite.c, state["config"])
    tables = build_signal_tables(scenario, noise)

    summary = dict(state.get("summary", {}))
    summary["kappa"] = noise.kappa
    summary["upsilon_sq"] = tables.upsilon_sq
    state["tables"] = tables
    state["summary"] = summary
    return state

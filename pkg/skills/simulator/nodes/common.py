"""
Node Helpers
Failure handling and row formatting shared by the experiment nodes.
"""

import functools
from typing import Dict, Iterable, List, Tuple

import numpy as np

from shared.errors import ConfigError, InvalidInputError
from shared.models.covariance import CompositeCovariance
from shared.models.state import ExperimentState
from shared.numerics.linalg import complex_to_composite
from shared.numerics.rng import RngStream
from shared.radar.scenario import perturb_cov
from skills.simulator.montecarlo import MISMATCH_STREAM


def _fail(state: ExperimentState, kind: str, error: Exception) -> ExperimentState:
    errors = state.get("errors", []).copy()
    errors.append(f"{type(error).__name__}: {error}")
    state["errors"] = errors
    state["failure"] = kind
    return state


def guarded(node_func):
    """
    Record domain errors in the state instead of raising.

    ConfigError and InvalidInputError mark a 'config' failure, OSError
    an 'io' one and anything else (package or library errors) a
    'numeric' one.
    """
    @functools.wraps(node_func)
    def wrapped(state: ExperimentState) -> ExperimentState:
        try:
            return node_func(state)
        except (ConfigError, InvalidInputError) as e:
            return _fail(state, "config", e)
        except OSError as e:
            return _fail(state, "io", e)
        except Exception as e:
            return _fail(state, "numeric", e)

    return wrapped


def columns_to_rows(columns: Dict[str, Iterable[float]]) -> List[Dict[str, float]]:
    """Turn equal-length columns into CSV rows, keeping column order."""
    arrays = {name: np.asarray(values, dtype=float) for name, values in columns.items()}
    length = len(next(iter(arrays.values())))
    return [
        {name: float(values[idx]) for name, values in arrays.items()}
        for idx in range(length)
    ]


def add_plot(state: ExperimentState, csv_name: str, **spec):
    """Queue an SVG rendering of csv_name."""
    plots = state.get("plots", []).copy()
    plots.append({"csv": csv_name, "spec": spec})
    state["plots"] = plots


def mismatch_cases(state: ExperimentState) -> List[Tuple[int, float, CompositeCovariance]]:
    """
    True noise covariance per configured rho.

    rho = 0 keeps the nominal covariance; rho > 0 draws one fixed
    perturbed Sigma' from the mismatch stream keyed by the rho index, so
    every experiment sees the same Sigma' for the same seed.
    """
    config = state["config"]
    scenario = state["scenario"]
    cases = []
    for r_idx, rho in enumerate(config.rho):
        if rho == 0:
            cases.append((r_idx, rho, scenario.composite))
            continue
        stream = RngStream(seed=config.seed, stream_id=MISMATCH_STREAM, key=(r_idx,))
        cases.append((r_idx, rho, complex_to_composite(perturb_cov(scenario.sigma_n, rho, stream))))
    return cases

"""
Nodes Package
LangGraph nodes for the experiment pipeline.
"""

from skills.simulator.nodes.validate_config import validate_config, EXPERIMENTS
from skills.simulator.nodes.prepare_scenario import prepare_scenario
from skills.simulator.nodes.build_detector import build_detector, get_noise_tables
from skills.simulator.nodes.pfa import run_pfa
from skills.simulator.nodes.avg_pfa import run_avg_pfa
from skills.simulator.nodes.pd import run_pd
from skills.simulator.nodes.roc import run_roc
from skills.simulator.nodes.training import run_training
from skills.simulator.nodes.write_results import write_results
from skills.simulator.nodes.render_plots import render_plots

__all__ = [
    # Setup
    "validate_config",
    "EXPERIMENTS",
    "prepare_scenario",
    "build_detector",
    "get_noise_tables",

    # Experiments
    "run_pfa",
    "run_avg_pfa",
    "run_pd",
    "run_roc",
    "run_training",

    # Output
    "write_results",
    "render_plots",
]

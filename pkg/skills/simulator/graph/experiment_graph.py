"""
Experiment Graph
Wires the simulator nodes into one pipeline per experiment.

Pipeline: validate_config -> prepare_scenario -> build_detector
          -> run_<experiment> -> write_results -> render_plots

Any node that records a failure ends the run.
"""

from typing import Literal

from langgraph.graph import StateGraph, END

from shared.models.state import ExperimentState
from shared.utils.progress_wrapper import wrap_node_with_progress
from skills.simulator.nodes import (
    validate_config,
    prepare_scenario,
    build_detector,
    run_pfa,
    run_avg_pfa,
    run_pd,
    run_roc,
    run_training,
    write_results,
    render_plots,
)

EXPERIMENT_NODES = {
    "pfa": ("run_pfa", run_pfa),
    "avg_pfa": ("run_avg_pfa", run_avg_pfa),
    "pd": ("run_pd", run_pd),
    "roc": ("run_roc", run_roc),
    "training": ("run_training", run_training),
}


def route_on_errors(state: ExperimentState) -> Literal["continue", "end"]:
    """Stop at the first failed node."""
    return "end" if state.get("failure") else "continue"


def route_after_build(state: ExperimentState) -> str:
    """Dispatch to the node of the requested experiment."""
    if state.get("failure"):
        return "end"
    return EXPERIMENT_NODES[state["experiment"]][0]


def create_experiment_graph():
    """Create the experiment graph."""
    graph = StateGraph(ExperimentState)

    # Setup nodes
    graph.add_node("validate_config", wrap_node_with_progress(validate_config, "validate_config"))
    graph.add_node("prepare_scenario", wrap_node_with_progress(prepare_scenario, "prepare_scenario"))
    graph.add_node("build_detector", wrap_node_with_progress(build_detector, "build_detector"))

    # One node per experiment, all reported as the experiment step
    for node_name, node_func in EXPERIMENT_NODES.values():
        graph.add_node(node_name, wrap_node_with_progress(node_func, "run_experiment"))

    # Output nodes
    graph.add_node("write_results", wrap_node_with_progress(write_results, "write_results"))
    graph.add_node("render_plots", wrap_node_with_progress(render_plots, "render_plots"))

    graph.set_entry_point("validate_config")

    graph.add_conditional_edges(
        "validate_config",
        route_on_errors,
        {"continue": "prepare_scenario", "end": END}
    )
    graph.add_conditional_edges(
        "prepare_scenario",
        route_on_errors,
        {"continue": "build_detector", "end": END}
    )

    # Conditional routing to the requested experiment
    graph.add_conditional_edges(
        "build_detector",
        route_after_build,
        {**{name: name for name, _ in EXPERIMENT_NODES.values()}, "end": END}
    )

    for node_name, _ in EXPERIMENT_NODES.values():
        graph.add_conditional_edges(
            node_name,
            route_on_errors,
            {"continue": "write_results", "end": END}
        )

    graph.add_conditional_edges(
        "write_results",
        route_on_errors,
        {"continue": "render_plots", "end": END}
    )
    graph.add_edge("render_plots", END)

    return graph.compile()

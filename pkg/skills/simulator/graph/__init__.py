"""
Experiment Graph Package
LangGraph workflow definition for simulator runs.
"""

from skills.simulator.graph.experiment_graph import create_experiment_graph

__all__ = [
    "create_experiment_graph",
]

"""
Progress-Enabled Node Wrapper
Adds progress tracking to experiment graph nodes.
"""

from shared.models.state import ExperimentState
from shared.utils.progress import update_progress, show_summary


def wrap_node_with_progress(node_func, node_name: str):
    """
    Wrap a node function with progress tracking.

    Args:
        node_func: The node function to wrap
        node_name: Name of the node for progress display

    Returns:
        Wrapped function with progress tracking
    """
    def wrapped(state: ExperimentState) -> ExperimentState:
        update_progress(node_name, "running")

        try:
            result = node_func(state)
        except Exception:
            update_progress(node_name, "error")
            raise

        update_progress(node_name, "error" if result.get("failure") else "complete")
        show_summary(result)
        return result

    return wrapped

"""
Progress Tracker
Prints one line per experiment node as the graph runs.
"""

from datetime import datetime
from typing import Dict, Optional


class ProgressTracker:
    """
    Step-by-step progress of an experiment run.

    Each node prints "[i/N] label..." when it starts and "done (t s)"
    when it completes. Quiet runs create a disabled tracker.
    """

    # Pipeline order; the experiment-specific node reports as run_experiment
    NODES = [
        ("validate_config", "Validating configuration"),
        ("prepare_scenario", "Preparing scenario"),
        ("build_detector", "Building detector tables"),
        ("run_experiment", "Running Monte Carlo experiment"),
        ("write_results", "Writing CSV results"),
        ("render_plots", "Rendering plots"),
    ]

    def __init__(self, enabled: bool = True):
        self.enabled = enabled
        self.positions = {name: i + 1 for i, (name, _) in enumerate(self.NODES)}
        self.labels = dict(self.NODES)
        self.start_time: Optional[datetime] = None
        self.started: Dict[str, datetime] = {}
        self.durations: Dict[str, float] = {}
        self.reported = set()

    def start(self, title: str = "Running experiment"):
        """Reset timings and print the run title."""
        self.start_time = datetime.now()
        self.started.clear()
        self.durations.clear()
        self.reported.clear()
        if self.enabled:
            print(f"{title}...\n")

    def update(self, node_name: str, status: str = "running"):
        """
        Record a node transition.

        Args:
            node_name: Graph node name (e.g., "build_detector")
            status: "running", "complete", or "error"
        """
        position = self.positions.get(node_name)
        if position is None:
            return

        now = datetime.now()
        if status == "running":
            self.started[node_name] = now
            if self.enabled:
                print(f"  [{position}/{len(self.NODES)}] {self.labels[node_name]}...", end="", flush=True)
            return

        if node_name in self.started:
            self.durations[node_name] = (now - self.started[node_name]).total_seconds()
        if not self.enabled:
            return
        if status == "error":
            print(" FAILED")
            return

        duration = self.durations.get(node_name, 0.0)
        print(f" done ({duration:.1f}s)" if duration > 0.1 else " done")

    def finish(self):
        """Print the total wall time."""
        if not self.enabled or self.start_time is None:
            return
        total = (datetime.now() - self.start_time).total_seconds()
        print(f"\nTotal time: {total:.1f}s\n")

    def show_step_summary(self, state: dict):
        """
        Print what the last node produced: scenario noise power, table
        sizes, or the latest error.
        """
        if not self.enabled:
            return

        summary = state.get("summary") or {}
        if "noise_trace" in summary and "scenario" not in self.reported:
            self.reported.add("scenario")
            print(f"     -> tr(Sigma_N) = {summary['noise_trace']:.4g}")

        tables = state.get("tables")
        if tables is not None and "tables" not in self.reported:
            self.reported.add("tables")
            print(f"     -> kappa = {tables.noise.kappa}, "
                  f"{len(tables.noise.orbits)} orbits, upsilon^2 = {tables.upsilon_sq:.4g}")

        if state.get("tables_out") and "tables_out" not in self.reported:
            self.reported.add("tables_out")
            print(f"     -> {len(state['tables_out'])} result tables")

        if state.get("errors"):
            print(f"     -> {state['errors'][-1]}")


_tracker: Optional[ProgressTracker] = None


def get_tracker() -> ProgressTracker:
    """The process-wide tracker (disabled until init_progress is called)."""
    global _tracker
    if _tracker is None:
        _tracker = ProgressTracker(enabled=False)
    return _tracker


def init_progress(enabled: bool = True) -> ProgressTracker:
    """Replace the process-wide tracker."""
    global _tracker
    _tracker = ProgressTracker(enabled=enabled)
    return _tracker


def update_progress(node_name: str, status: str = "running"):
    get_tracker().update(node_name, status)


def show_summary(state: dict):
    get_tracker().show_step_summary(state)

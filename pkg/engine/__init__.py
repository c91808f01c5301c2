from .condition_runner import build_context, run_evaluators
from .cross_validate import analyze_chain, cross_validate
from .decay import CenteredPowers, tv_mixing_time
from .fitting import DecaySeries, fit_geometric_rate
from .implication_graph import EDGES, check_edges

__all__ = [
    "build_context",
    "run_evaluators",
    "analyze_chain",
    "cross_validate",
    "CenteredPowers",
    "tv_mixing_time",
    "DecaySeries",
    "fit_geometric_rate",
    "EDGES",
    "check_edges",
]

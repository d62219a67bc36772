"""LangGraph components for the experiment runner."""

from graph.state import ExperimentState
from graph.workflow import build_experiment_workflow

__all__ = ["ExperimentState", "build_experiment_workflow"]

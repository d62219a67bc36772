"""LangGraph workflow builder for the experiment runner."""

from typing import Any, Dict

from langgraph.graph import END, StateGraph

from graph.config_parser import config_parser_node
from graph.nodes import gates_node, persist_node, route_after_validate, summarize_node
from graph.parallel_nodes import sampling_node
from graph.state import ExperimentState


def build_experiment_workflow():
    """
    Build and compile the experiment workflow.

    1. Validate: merged settings -> ExperimentConfig (ends the run on failure)
    2. Sampling: per-sample rows, in parallel worker chunks
    3. Summary: rows -> summary statistics
    4. Gates: summary -> pass/fail verdicts
    5. Persist: CSV / JSON / SVG artifacts when an output directory is set

    Returns:
        Compiled StateGraph application
    """
    workflow = StateGraph(ExperimentState)

    workflow.add_node("validate", config_parser_node)
    workflow.add_node("sampling", sampling_node)
    workflow.add_node("summarize", summarize_node)
    workflow.add_node("gates", gates_node)
    workflow.add_node("persist", persist_node)

    workflow.set_entry_point("validate")

    workflow.add_conditional_edges(
        "validate",
        route_after_validate,
        {
            "continue": "sampling",
            "end": END,
        },
    )
    workflow.add_edge("sampling", "summarize")
    workflow.add_edge("summarize", "gates")
    workflow.add_edge("gates", "persist")
    workflow.add_edge("persist", END)

    return workflow.compile()


def get_workflow_info(app=None) -> Dict[str, Any]:
    """Nodes and edges of the compiled workflow."""
    if app is None:
        app = build_experiment_workflow()

    graph = app.get_graph()
    nodes = list(graph.nodes.keys())
    edges = [(e.source, e.target) for e in graph.edges]

    return {
        "nodes": nodes,
        "edges": edges,
        "num_nodes": len(nodes),
        "num_edges": len(edges),
    }

"""LangGraph node functions for the experiment workflow."""

import time
from typing import Any, Dict

from langchain_core.runnables import RunnableConfig

from experiments import build_experiment
from experiments.record import RunRecord
from graph.state import ExperimentState
from utils.errors import error_payload
from utils.logger import get_logger, log_error
from utils.result_writer import write_artifacts

logger = get_logger(__name__)


def summarize_node(state: ExperimentState, config: RunnableConfig) -> Dict[str, Any]:
    """
    Node: reduce the per-sample rows to the experiment summary.

    Args:
        state: Current graph state with rows
        config: Runtime configuration

    Returns:
        State updates
    """
    cfg = state["config"]
    rows = state.get("rows") or []
    logger.info(f"📊 [SUMMARY] Summarizing {len(rows)} rows for {cfg.experiment}")

    try:
        summary = build_experiment(cfg).summarize(rows)
        return {"summary": summary, "step_count": state.get("step_count", 0) + 1}
    except Exception as e:
        log_error(logger, e, "summarize_node")
        return {
            "summary": None,
            "step_count": state.get("step_count", 0) + 1,
            "errors": {**(state.get("errors") or {}), **error_payload(e, "summarize")},
        }


def gates_node(state: ExperimentState, config: RunnableConfig) -> Dict[str, Any]:
    """Node: evaluate the pass/fail gates on the summary."""
    cfg = state["config"]
    summary = state.get("summary")
    if summary is None:
        logger.warning("⚠️  [GATES] No summary available, skipping gates")
        return {"gates": {}, "step_count": state.get("step_count", 0) + 1}

    try:
        gates = build_experiment(cfg).gates(summary)
        failed = [name for name, ok in gates.items() if not ok]
        if failed:
            logger.warning(f"🚦 [GATES] {len(failed)}/{len(gates)} failed: {', '.join(failed)}")
        else:
            logger.info(f"🚦 [GATES] All {len(gates)} gates passed")
        return {"gates": gates, "step_count": state.get("step_count", 0) + 1}
    except Exception as e:
        log_error(logger, e, "gates_node")
        return {
            "gates": {},
            "step_count": state.get("step_count", 0) + 1,
            "errors": {**(state.get("errors") or {}), **error_payload(e, "gates")},
        }


def persist_node(state: ExperimentState, config: RunnableConfig) -> Dict[str, Any]:
    """Node: write the run record to the configured output directory, if any."""
    cfg = state["config"]
    wall_time = time.time() - state.get("started_at", time.time())
    updates: Dict[str, Any] = {"wall_time": wall_time, "step_count": state.get("step_count", 0) + 1}
    if cfg.out is None:
        logger.info("💾 [PERSIST] No output directory configured, nothing written")
        return updates

    try:
        record = record_from_state({**state, **updates})
        artifacts = write_artifacts(record, cfg.out, cfg.formats)
        logger.info(f"💾 [PERSIST] Wrote {len(artifacts)} artifact(s) to {cfg.out}")
        return {**updates, "artifacts": [str(p) for p in artifacts]}
    except Exception as e:
        log_error(logger, e, "persist_node")
        return {**updates, "errors": {**(state.get("errors") or {}), **error_payload(e, "persist")}}


def record_from_state(state: Dict[str, Any]) -> RunRecord:
    """Freeze the final graph state into a RunRecord."""
    return RunRecord(
        config=state["config"],
        rows=state.get("rows") or [],
        summary=state.get("summary") or {},
        gates=state.get("gates") or {},
        wall_time=state.get("wall_time", 0.0),
        artifacts=state.get("artifacts") or [],
        errors=state.get("errors") or {},
    )


def route_after_validate(state: ExperimentState) -> str:
    """End early when the configuration did not validate."""
    return "continue" if state.get("config") is not None else "end"

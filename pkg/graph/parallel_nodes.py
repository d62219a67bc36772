"""Parallel sampling node: runs the per-sample draws of an experiment concurrently using asyncio."""

import asyncio
import time
from typing import Any, Dict, List, Sequence

from langchain_core.runnables import RunnableConfig

from experiments import build_experiment
from experiments.base import Experiment
from graph.state import ExperimentState
from utils.errors import error_payload
from utils.logger import get_logger, log_error
from utils.seeding import sample_seed, stream_rng

logger = get_logger(__name__)


def _run_sample(experiment: Experiment, index: int) -> Dict[str, Any]:
    """One row, from the generator addressed by (seed, experiment, index)."""
    seed = experiment.config.seed
    row = experiment.sample(index, stream_rng(seed, experiment.name, index))
    return {"sample_index": index, "seed": sample_seed(seed, index), **row}


def _run_chunk(experiment: Experiment, indices: Sequence[int]) -> List[Dict[str, Any]]:
    return [_run_sample(experiment, i) for i in indices]


def _chunks(samples: int, workers: int) -> List[range]:
    size = -(-samples // workers)
    return [range(start, min(start + size, samples)) for start in range(0, samples, size)]


async def sampling_node(state: ExperimentState, config: RunnableConfig) -> Dict[str, Any]:
    """
    Draw every sample of the configured experiment.

    Samples are split into `workers` contiguous chunks, each run in a thread with
    asyncio.to_thread. Rows depend only on (seed, sample index), so the result is the same
    for any worker count. If the concurrent run fails, the samples are redrawn sequentially.
    """
    cfg = state["config"]
    experiment = build_experiment(cfg)
    chunks = _chunks(cfg.samples, cfg.workers)
    logger.info(f"⚡ [SAMPLING] {experiment.name}: {cfg.samples} samples over {len(chunks)} worker(s)")
    start_time = time.time()

    try:
        results = await asyncio.gather(*(asyncio.to_thread(_run_chunk, experiment, chunk) for chunk in chunks))
        rows = [row for chunk_rows in results for row in chunk_rows]
        logger.info(f"✅ [SAMPLING] {len(rows)} rows in {time.time() - start_time:.2f}s")
        return {"rows": rows, "step_count": state.get("step_count", 0) + 1}

    except Exception as e:
        log_error(logger, e, "sampling_node")
        logger.warning("⚠️  [SAMPLING] Concurrent run failed, falling back to sequential sampling...")

        try:
            rows = _run_chunk(experiment, range(cfg.samples))
            return {
                "rows": rows,
                "step_count": state.get("step_count", 0) + 1,
                "errors": {**(state.get("errors") or {}), **error_payload(e, "parallel_sampling")},
            }
        except Exception as sequential_error:
            log_error(logger, sequential_error, "sampling_node (sequential)")
            return {
                "rows": [],
                "step_count": state.get("step_count", 0) + 1,
                "errors": {**(state.get("errors") or {}), **error_payload(sequential_error, "sampling")},
            }

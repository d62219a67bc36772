"""Eigenvector Lab - Main orchestrator using LangGraph."""

import asyncio
import os
import time
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from dotenv import load_dotenv

from experiments.config import ExperimentConfig
from experiments.record import RunRecord
from graph.config_parser import merge_settings
from graph.nodes import record_from_state
from graph.workflow import build_experiment_workflow, get_workflow_info
from utils.errors import ConfigurationError
from utils.logger import get_logger, parse_level, set_level

logger = get_logger(__name__)


class EigenvectorLab:
    """
    Runs the eigenvector-mass experiments through one LangGraph workflow:
    validate -> sampling -> summarize -> gates -> persist.

    Settings are layered as per-experiment defaults < EVLAB_* environment (a .env file is
    loaded first) < JSON config file < explicit flags. The log level follows the same rule:
    `log_level` wins over EVLAB_LOG_LEVEL, which may come from the .env file.
    """

    def __init__(self, log_level: Optional[str] = None, env_file: Union[str, Path, None] = None):
        load_dotenv(env_file)
        set_level(parse_level(log_level or os.getenv("EVLAB_LOG_LEVEL")))
        self.app = build_experiment_workflow()

    def run_settings(
        self,
        experiment: str,
        flags: Optional[Mapping[str, Any]] = None,
        config_file: Union[str, Path, None] = None,
        environ: Optional[Mapping[str, str]] = None,
    ) -> Dict[str, Any]:
        """
        Run from layered settings and return the final graph state.

        The state carries `config` = None and a "validate" error when the settings are invalid.
        """
        inputs = {
            "settings": merge_settings(experiment, flags, config_file, environ),
            "config": None,
            "rows": [],
            "summary": None,
            "gates": None,
            "artifacts": [],
            "step_count": 0,
            "started_at": time.time(),
            "wall_time": 0.0,
            "errors": None,
        }
        return asyncio.run(self.app.ainvoke(inputs))

    def run(self, config: ExperimentConfig) -> RunRecord:
        """Run an already validated configuration."""
        state = self.run_settings(config.experiment, config.model_dump(exclude_unset=True), environ={})
        if state.get("config") is None:
            raise ConfigurationError((state.get("errors") or {}).get("validate", "invalid configuration"))
        return record_from_state(state)

    def get_info(self) -> Dict[str, Any]:
        return {"workflow": get_workflow_info(self.app)}


def _run(experiment: str, **settings: Any) -> RunRecord:
    config = ExperimentConfig(experiment=experiment, **settings)
    return EigenvectorLab().run(config)


def run_clt(**settings: Any) -> RunRecord:
    return _run("clt", **settings)


def run_que(**settings: Any) -> RunRecord:
    return _run("que", **settings)


def run_identity_suite(**settings: Any) -> RunRecord:
    return _run("identity-suite", **settings)


def run_flow_check(**settings: Any) -> RunRecord:
    return _run("flow-check", **settings)


def run_dbm_diagnostics(**settings: Any) -> RunRecord:
    return _run("dbm-diagnostics", **settings)


def run_regularized_compare(**settings: Any) -> RunRecord:
    return _run("regularized-compare", **settings)


def print_record(record: RunRecord) -> None:
    """Print the gate verdicts and headline numbers in a readable format."""
    cfg = record.config
    print(f"\n{'=' * 60}")
    print(f"🔬 {cfg.experiment}  N={cfg.n}  |I|={cfg.resolved_set_size}  samples={cfg.samples}  seed={cfg.seed}")
    print(f"{'=' * 60}")
    for name, ok in record.gates.items():
        print(f"   {'✅' if ok else '❌'} {name}")
    if not record.gates:
        print("   (no gates evaluated)")
    for node, message in record.errors.items():
        print(f"   ⚠️  {node}: {message}")
    for path in record.artifacts:
        print(f"   💾 {path}")
    print(f"\n   {'PASSED' if record.passed else 'FAILED'} in {record.wall_time:.2f}s")
    print(f"{'=' * 60}\n")

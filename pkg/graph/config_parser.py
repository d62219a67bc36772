"""Config Parser Node - Merges settings layers and validates them into an ExperimentConfig."""

import json
import os
import time
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from langchain_core.runnables import RunnableConfig
from pydantic import ValidationError

from experiments.config import ExperimentConfig
from graph.state import ExperimentState
from utils.errors import ConfigurationError, error_payload
from utils.logger import get_logger, log_error

logger = get_logger(__name__)

ENV_PREFIX = "EVLAB_"

# Environment variable suffix -> config field, with the parser for its string value
ENV_FIELDS = {
    "SEED": ("seed", int),
    "WORKERS": ("workers", int),
    "FAMILY": ("family", str),
    "OUTPUT_DIR": ("out", str),
    "FORMATS": ("formats", lambda v: [f.strip() for f in v.split(",") if f.strip()]),
}


def env_settings(environ: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    """EVLAB_* variables as config fields."""
    environ = os.environ if environ is None else environ
    settings = {}
    for suffix, (field, parse) in ENV_FIELDS.items():
        raw = environ.get(ENV_PREFIX + suffix)
        if raw is None or raw == "":
            continue
        try:
            settings[field] = parse(raw)
        except ValueError as e:
            raise ConfigurationError(f"cannot parse {ENV_PREFIX}{suffix}={raw!r}: {e}") from e
    return settings


def file_settings(path: Union[str, Path, None]) -> Dict[str, Any]:
    """Fields from a JSON config file; an absent path gives no settings."""
    if path is None:
        return {}
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"cannot read config file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must hold a JSON object")
    return data


def merge_settings(
    experiment: str,
    flags: Optional[Mapping[str, Any]] = None,
    config_file: Union[str, Path, None] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Dict[str, Any]:
    """
    Layered settings: per-experiment defaults < environment < JSON file < explicit flags.

    Flags set to None count as absent, so argparse namespaces can be passed straight in.
    Per-experiment defaults are filled later by ExperimentConfig itself.
    """
    merged: Dict[str, Any] = {}
    merged.update(env_settings(environ))
    merged.update(file_settings(config_file))
    merged.update({k: v for k, v in (flags or {}).items() if v is not None})
    merged["experiment"] = experiment
    return merged


def parse_config(settings: Mapping[str, Any]) -> ExperimentConfig:
    """Validate merged settings; pydantic errors surface as ConfigurationError."""
    try:
        return ExperimentConfig(**settings)
    except ValidationError as e:
        raise ConfigurationError(str(e)) from e


def config_parser_node(state: ExperimentState, config: RunnableConfig) -> Dict[str, Any]:
    """
    Node: validate the merged settings.

    On failure the error is recorded and `config` stays None, which ends the graph.
    """
    settings = state.get("settings", {})
    logger.info(f"🧾 [VALIDATE] Parsing settings for '{settings.get('experiment')}'")
    start_time = time.time()

    try:
        parsed = parse_config(settings)
        logger.info(
            f"🧾 [VALIDATE] N={parsed.n}, |I|={parsed.resolved_set_size}, samples={parsed.samples}, "
            f"ensemble={parsed.ensemble}, seed={parsed.seed} ({time.time() - start_time:.3f}s)"
        )
        return {"config": parsed, "step_count": state.get("step_count", 0) + 1}
    except ConfigurationError as e:
        log_error(logger, e, "config_parser_node")
        return {
            "config": None,
            "step_count": state.get("step_count", 0) + 1,
            "errors": {**(state.get("errors") or {}), **error_payload(e, "validate")},
        }

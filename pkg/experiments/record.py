"""The persisted outcome of one experiment run."""

import platform
from typing import Any, Dict, List

import numpy as np
import pandas as pd
import scipy
from pydantic import BaseModel, ConfigDict, Field

from experiments.config import ExperimentConfig

PACKAGE_VERSION = "1.0.1"


def library_versions() -> Dict[str, str]:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
        "evlab": PACKAGE_VERSION,
    }


class RunRecord(BaseModel):
    """Config echo, per-sample rows, summary, gate verdicts and provenance."""

    model_config = ConfigDict(frozen=True)

    config: ExperimentConfig
    rows: List[Dict[str, Any]] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)
    gates: Dict[str, bool] = Field(default_factory=dict)
    wall_time: float = 0.0
    versions: Dict[str, str] = Field(default_factory=library_versions)
    artifacts: List[str] = Field(default_factory=list)
    errors: Dict[str, str] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """True iff the run finished without errors and every evaluated gate held."""
        return not self.errors and all(self.gates.values())

    @property
    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)

    def to_summary_json(self) -> Dict[str, Any]:
        """Everything but the per-sample rows, JSON-ready."""
        return {
            "config": self.config.echo(),
            "summary": _jsonable(self.summary),
            "gates": self.gates,
            "passed": self.passed,
            "wall_time": self.wall_time,
            "versions": self.versions,
            "artifacts": self.artifacts,
            "errors": self.errors,
        }


def _jsonable(value: Any) -> Any:
    # numpy scalars and NaN to plain JSON values
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return None if not np.isfinite(value) else float(value)
    return value

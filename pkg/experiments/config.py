"""Experiment configuration: one validated pydantic model shared by the CLI, JSON files and the workflow."""

import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from rmt.ensembles import EntryDistribution
from utils.errors import ConfigurationError

ExperimentName = Literal[
    "clt",
    "que",
    "identity-suite",
    "flow-check",
    "dbm-diagnostics",
    "regularized-compare",
]

# CLI subcommand -> experiment name
SUBCOMMANDS: Dict[str, str] = {
    "clt": "clt",
    "que": "que",
    "identity-suite": "identity-suite",
    "flow-check": "flow-check",
    "dbm": "dbm-diagnostics",
    "reg-compare": "regularized-compare",
}

ENSEMBLES = ("goe", "wigner:gaussian", "wigner:rademacher", "wigner:uniform")
FORMATS = ("csv", "json", "svg")

# Desk-scale defaults per experiment: (N, |I| rule, samples, ensemble)
EXPERIMENT_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "clt": {"n": 800, "set_size": "N^0.5", "samples": 4000, "ensemble": "goe"},
    "que": {"n": 500, "set_size": "N^0.5", "samples": 200, "ensemble": "goe"},
    "identity-suite": {"n": 60, "set_size": 8, "samples": 25, "ensemble": "goe"},
    "flow-check": {"n": 12, "set_size": 3, "samples": 50, "ensemble": "goe"},
    "dbm-diagnostics": {"n": 400, "set_size": 20, "samples": 100, "ensemble": "wigner:rademacher"},
    "regularized-compare": {"n": 400, "set_size": 20, "samples": 100, "ensemble": "goe"},
}

FLOW_CHECK_MIN_N = 6

_EXPONENT_RULE = re.compile(r"^\s*N\s*\^\s*([0-9]*\.?[0-9]+)\s*$")


class ExperimentConfig(BaseModel):
    """
    Everything a run needs. Missing N, |I| rule, sample count and ensemble are filled
    from EXPERIMENT_DEFAULTS for the chosen experiment.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    experiment: ExperimentName
    n: int
    set_size: Union[int, str]
    family: Literal["coord", "random"] = "coord"
    ensemble: str
    profile_spread: float = 0.0
    ou_time: float = 0.0
    index: Union[Literal["bulk", "edge"], int] = "bulk"
    samples: int
    seed: int = 0
    out: Optional[Path] = None
    formats: List[Literal["csv", "json", "svg"]] = Field(default_factory=lambda: ["csv", "json"])
    workers: int = 1
    gate_se: float = 4.0

    # que
    epsilons: List[float] = Field(default_factory=lambda: [0.1, 0.2, 0.3])
    que_gate_epsilon: float = 0.3
    que_gate_fraction: float = 0.01

    # dbm-diagnostics
    times: List[float] = Field(default_factory=lambda: [0.1, 0.5, 1.0])
    dbm_method: Literal["ou", "sde"] = "ou"
    dt: float = 1e-4
    omega: float = 0.1
    repulsion_delta: float = 0.2
    repulsion_fraction: float = 0.10
    que_ratio_exponent: float = 0.3
    ks_threshold: float = 0.05

    # flow-check
    flow_step: float = 1e-4
    flow_tolerance: float = 1e-5
    constant_tolerance: float = 1e-8

    # regularized-compare
    delta2: float = 0.05
    epsilon2: float = 0.5
    neighbor_window: int = 2
    agreement_threshold: float = 0.2

    @model_validator(mode="before")
    @classmethod
    def _fill_defaults(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        experiment = data.get("experiment")
        defaults = EXPERIMENT_DEFAULTS.get(experiment, {})
        filled = dict(data)
        for key, value in defaults.items():
            if filled.get(key) is None:
                filled[key] = value
        return filled

    @field_validator("ensemble")
    @classmethod
    def _known_ensemble(cls, value: str) -> str:
        if value not in ENSEMBLES:
            raise ConfigurationError(f"unknown ensemble {value!r}; expected one of {ENSEMBLES}")
        return value

    @field_validator("set_size")
    @classmethod
    def _set_size_rule(cls, value: Union[int, str]) -> Union[int, str]:
        if isinstance(value, str):
            if value.strip().lstrip("-").isdigit():
                return int(value)
            match = _EXPONENT_RULE.match(value)
            if not match:
                raise ConfigurationError(f"set size must be an integer or 'N^a', got {value!r}")
            alpha = float(match.group(1))
            if not 0.0 < alpha < 1.0:
                raise ConfigurationError(f"set size exponent must lie in (0, 1), got {alpha}")
        return value

    @model_validator(mode="after")
    def _check(self) -> "ExperimentConfig":
        if self.n < 2:
            raise ConfigurationError(f"N must be at least 2, got {self.n}")
        if self.samples < 1:
            raise ConfigurationError(f"samples must be at least 1, got {self.samples}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be at least 1, got {self.workers}")
        size = self.resolved_set_size
        if not 1 <= size <= self.n:
            raise ConfigurationError(f"|I| = {size} outside [1, N={self.n}]")
        self.resolved_index  # raises on out-of-range explicit indices
        if not 0.0 <= self.profile_spread < 1.0:
            raise ConfigurationError(f"profile spread must lie in [0, 1), got {self.profile_spread}")
        if not 0.0 <= self.ou_time <= 1.0:
            raise ConfigurationError(f"OU time must lie in [0, 1], got {self.ou_time}")
        if any(not 0.0 < t <= 1.0 for t in self.times):
            raise ConfigurationError(f"DBM times must lie in (0, 1], got {self.times}")
        if not self.epsilon2 > self.delta2 > 0:
            raise ConfigurationError(f"need epsilon2 > delta2 > 0, got ({self.epsilon2}, {self.delta2})")
        if self.experiment == "flow-check" and self.n < FLOW_CHECK_MIN_N:
            raise ConfigurationError(f"flow-check needs N >= {FLOW_CHECK_MIN_N} for its six-vector bindings, got {self.n}")
        if not 1e-6 <= self.flow_step <= 1e-3:
            raise ConfigurationError(f"flow step must lie in [1e-6, 1e-3], got {self.flow_step}")
        return self

    @property
    def resolved_set_size(self) -> int:
        """|I| for this N: the integer rule as given, 'N^a' as ⌊N^a⌋ (at least 1)."""
        if isinstance(self.set_size, int):
            return self.set_size
        alpha = float(_EXPONENT_RULE.match(self.set_size).group(1))
        # Guard against ⌊N^a⌋ landing one below an exact power through rounding.
        return max(1, int(self.n**alpha + 1e-9))

    @property
    def resolved_index(self) -> int:
        """0-based eigenvector index: bulk ⌊N/2⌋, edge 0, or the explicit value."""
        if self.index == "bulk":
            return self.n // 2
        if self.index == "edge":
            return 0
        if not 0 <= self.index < self.n:
            raise ConfigurationError(f"index {self.index} outside [0, {self.n})")
        return int(self.index)

    @property
    def distribution(self) -> Optional[EntryDistribution]:
        """Entry law of a generalized Wigner ensemble; None for GOE."""
        if self.ensemble == "goe":
            return None
        return EntryDistribution(self.ensemble.split(":", 1)[1])

    def echo(self) -> Dict[str, Any]:
        """JSON-ready copy of the configuration."""
        return self.model_dump(mode="json")

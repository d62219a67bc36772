"""State definition for the experiment workflow."""

from typing import Any, Dict, List, Optional, TypedDict


class ExperimentState(TypedDict):
    """
    State passed through the experiment graph and updated by each node.
    """

    # Raw settings as merged by the config parser (defaults < env < file < flags)
    settings: Dict[str, Any]

    # Validated ExperimentConfig, set by the validate node
    config: Optional[Any]

    # One dict per sample, ordered by sample index
    rows: List[Dict[str, Any]]

    summary: Optional[Dict[str, Any]]
    gates: Optional[Dict[str, bool]]

    # Paths written by the persist node
    artifacts: List[str]

    # Metadata
    step_count: int
    started_at: float
    wall_time: float

    # Error tracking: node name -> message
    errors: Optional[Dict[str, str]]

"""Generator-versus-flow residuals of every observable kind on random well-separated instances."""

from typing import Any, Dict, List

import numpy as np

from experiments.base import Experiment, Row
from rmt.flowlab import FlowKind, f_matching_verdict, generator_flow_residual, random_instance, random_observable

BINDINGS = (
    ("g_paired", FlowKind.G_PAIRED, False),
    ("g4", FlowKind.G4, False),
    ("g4_diagonal", FlowKind.G4, True),
    ("h4", FlowKind.H4, False),
    ("h4_diagonal", FlowKind.H4, True),
)
GATED = tuple(key for key, _, _ in BINDINGS)


class FlowCheckExperiment(Experiment):
    """
    Each row draws one random spectrum and frame and one random binding per observable kind.
    The f_matching residuals are reported with a verdict but never gated.
    """

    name = "flow-check"

    def sample(self, index: int, rng: np.random.Generator) -> Row:
        n, h = self.config.n, self.config.flow_step
        s = random_instance(n, rng)

        def residual(kind: FlowKind, diagonal: bool = False):
            return generator_flow_residual(random_observable(kind, n, rng, diagonal=diagonal), s, h)

        matching = residual(FlowKind.F_MATCHING)
        row: Row = {
            "constant": residual(FlowKind.CONSTANT).relative,
            "f_matching": matching.relative,
            "f_matching_half_rate": matching.half_rate_relative,
        }
        for key, kind, diagonal in BINDINGS:
            r = residual(kind, diagonal)
            row[key] = r.relative
            row[f"{key}_strict"] = r.strict_relative
        return row

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        keys = ("constant", "f_matching", "f_matching_half_rate") + GATED
        summary: Dict[str, Any] = {"instances": len(rows), "n": self.config.n, "step": self.config.flow_step}
        summary["max_residual"] = {key: float(np.max(self.column(rows, key))) for key in keys}
        # Reported only: L F can cancel far below the finite-difference error scale
        summary["max_strict_residual"] = {key: float(np.max(self.column(rows, f"{key}_strict"))) for key in GATED}
        summary["f_matching_verdict"] = f_matching_verdict(
            self.column(rows, "f_matching"), self.column(rows, "f_matching_half_rate"), self.config.flow_tolerance
        )
        return summary

    def gates(self, summary: Dict[str, Any]) -> Dict[str, bool]:
        worst = summary["max_residual"]
        verdicts = {key: worst[key] <= self.config.flow_tolerance for key in GATED}
        verdicts["constant"] = worst["constant"] <= self.config.constant_tolerance
        return verdicts

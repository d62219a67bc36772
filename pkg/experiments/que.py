"""Sup statistics of the rescaled overlaps hat_p_kℓ against the N^ε bound."""

from typing import Any, Dict, List

import numpy as np

from experiments.base import Experiment, Row
from rmt.observables import hat_p_matrix, overlaps
from rmt.spectral import decompose

QUANTILES = (0.5, 0.9, 0.99, 1.0)


class QueExperiment(Experiment):
    name = "que"

    def sample(self, index: int, rng: np.random.Generator) -> Row:
        s = decompose(self.draw_matrix(rng))
        hat = np.abs(hat_p_matrix(overlaps(s, self.build_family(rng))))
        diagonal = np.diag(hat)
        off = hat[~np.eye(len(hat), dtype=bool)]
        return {
            "sup_diagonal": float(diagonal.max()),
            "sup_off_diagonal": float(off.max()) if off.size else 0.0,
            "sup_all": float(hat.max()),
        }

    def exceedance(self, rows: List[Row], epsilon: float) -> float:
        """Fraction of samples with sup_{k,ℓ} |hat_p_kℓ| > N^ε."""
        return float(np.mean(self.column(rows, "sup_all") > self.config.n**epsilon))

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        summary: Dict[str, Any] = {"samples": len(rows), "set_size": self.config.resolved_set_size}
        for key in ("sup_diagonal", "sup_off_diagonal", "sup_all"):
            values = self.column(rows, key)
            summary[key] = {f"q{q:g}": float(np.quantile(values, q)) for q in QUANTILES}
        summary["exceedance"] = {f"{eps:g}": self.exceedance(rows, eps) for eps in self.config.epsilons}
        summary["gate_exceedance"] = self.exceedance(rows, self.config.que_gate_epsilon)
        return summary

    def gates(self, summary: Dict[str, Any]) -> Dict[str, bool]:
        return {"exceedance": summary["gate_exceedance"] <= self.config.que_gate_fraction}

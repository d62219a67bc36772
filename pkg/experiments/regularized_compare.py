"""Regularized observables v(k, ℓ) and q_ℓℓ against the raw rescaled overlaps."""

from typing import Any, Dict, List

import numpy as np

from experiments.base import Experiment, Row
from rmt import greenreg
from rmt.observables import hat_p_matrix, overlaps
from rmt.spectral import decompose

MARGIN_FLOOR = -1e-12
# N^{δ₃} cap on eigenvalue counts in the micro-intervals
B3_EXPONENT = 0.1


class RegularizedCompare(Experiment):
    name = "regularized-compare"

    @property
    def params(self) -> greenreg.RegParams:
        return greenreg.RegParams(delta2=self.config.delta2, epsilon2=self.config.epsilon2)

    @property
    def offsets(self) -> List[int]:
        d = self.config.neighbor_window
        return list(range(-d, d + 1))

    def sample(self, index: int, rng: np.random.Generator) -> Row:
        cfg, params = self.config, self.params
        s = decompose(self.draw_matrix(rng))
        family = self.build_family(rng)
        table = overlaps(s, family)
        hat = hat_p_matrix(table)
        l = cfg.resolved_index
        window = greenreg.window_factor(cfg.n, params) ** 2

        q = greenreg.q_ll(s, family, l, params)
        row: Row = {"q_ll": q, "hat_p_ll": float(hat[l, l]), "abs_diff": abs(q - float(hat[l, l]))}
        margins = []
        for d in self.offsets:
            k = l + d
            if not 0 <= k < cfg.n:
                row.update({f"v@{d:+d}": np.nan, f"hat_p_sq@{d:+d}": np.nan, f"margin@{d:+d}": np.nan})
                continue
            v = greenreg.v_from_table(table, k, l, params)
            margin = v - window * float(hat[k, l]) ** 2
            margins.append(margin)
            row.update({f"v@{d:+d}": v, f"hat_p_sq@{d:+d}": float(hat[k, l]) ** 2, f"margin@{d:+d}": margin})
        row["min_margin"] = float(min(margins))
        row["b3"] = greenreg.b3_event(s.lambdas, l, l, cfg.delta2, B3_EXPONENT)
        return row

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        diff = self.column(rows, "abs_diff")
        summary: Dict[str, Any] = {
            "samples": len(rows),
            "index": self.config.resolved_index,
            "window_factor": greenreg.window_factor(self.config.n, self.params),
            "median_abs_diff": float(np.median(diff)),
            "q90_abs_diff": float(np.quantile(diff, 0.9)),
            "min_margin": float(np.min(self.column(rows, "min_margin"))),
            "b3_fraction": float(np.mean(self.column(rows, "b3"))),
        }
        summary["mean_v"] = {
            f"{d:+d}": float(np.nanmean(self.column(rows, f"v@{d:+d}")))
            for d in self.offsets
            if not np.all(np.isnan(self.column(rows, f"v@{d:+d}")))
        }
        return summary

    def gates(self, summary: Dict[str, Any]) -> Dict[str, bool]:
        return {
            "domination": summary["min_margin"] >= MARGIN_FLOOR,
            "agreement": summary["median_abs_diff"] <= self.config.agreement_threshold,
        }

"""Gaussian fluctuations of the eigenvector mass p_kk at a fixed index."""

from typing import Any, Dict, List

import numpy as np

from experiments.base import Experiment, Row
from experiments.statistics import defined_gates, moment_table, raw_moment, variance, within_se
from rmt.matchings import configuration, single_site
from rmt.observables import clt_statistic, gaussian_matching_target, matching_moment, overlaps
from rmt.spectral import decompose

# Moments of a standard Gaussian: (n−1)!! for even n
GAUSSIAN_MOMENTS = {1: 0.0, 2: 1.0, 3: 0.0, 4: 3.0, 5: 0.0, 6: 15.0}


class CltExperiment(Experiment):
    """
    Per sample: the standardized statistic √(N²/(2|I|))·p_kk at the configured index, and the
    rescaled two-particle matching moments for ξ = {k:2} and ξ = {k:1, k':1}.
    """

    name = "clt"

    def sample(self, index: int, rng: np.random.Generator) -> Row:
        cfg = self.config
        s = decompose(self.draw_matrix(rng))
        table = overlaps(s, self.build_family(rng))
        k = cfg.resolved_index
        neighbor = k + 1 if k + 1 < cfg.n else k - 1
        return {
            "statistic": clt_statistic(table, k),
            "matching_single_site": matching_moment(table, single_site(cfg.n, k, 2)),
            "matching_two_sites": matching_moment(table, configuration(cfg.n, {k: 1, neighbor: 1})),
        }

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        x = self.column(rows, "statistic")
        var, var_se = variance(x)
        summary: Dict[str, Any] = {
            "samples": len(rows),
            "index": self.config.resolved_index,
            "set_size": self.config.resolved_set_size,
            "moments": moment_table(x, GAUSSIAN_MOMENTS),
            "variance": {"value": var, "se": var_se, "target": 1.0},
        }
        target = gaussian_matching_target(2)
        for key in ("matching_single_site", "matching_two_sites"):
            value, se = raw_moment(self.column(rows, key), 1)
            summary[key] = {"value": value, "se": se, "target": target}
        if len(rows) < 2:
            summary["note"] = "single sample: standard errors undefined"
        return summary

    def gates(self, summary: Dict[str, Any]) -> Dict[str, bool]:
        k = self.config.gate_se
        moments = summary["moments"]
        return defined_gates(
            [
                ("mean", within_se(moments["m1"]["value"], 0.0, moments["m1"]["se"], k)),
                ("variance", within_se(summary["variance"]["value"], 1.0, summary["variance"]["se"], k)),
                ("fourth_moment", within_se(moments["m4"]["value"], 3.0, moments["m4"]["se"], k)),
                *(
                    (key, within_se(summary[key]["value"], summary[key]["target"], summary[key]["se"], k))
                    for key in ("matching_single_site", "matching_two_sites")
                ),
            ]
        )

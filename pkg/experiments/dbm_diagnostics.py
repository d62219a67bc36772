"""Local law, rigidity, QUE ratio and level repulsion along the Dyson Brownian motion."""

from typing import Any, Dict, List

import numpy as np

from experiments.base import Experiment, Row
from rmt.diagnostics import (
    ks_to_semicircle,
    local_law_grid,
    local_law_residual,
    normalized_gaps,
    que_ratio,
    rigidity_bound,
    rigidity_residual,
)
from rmt.ensembles import integrate_dbm, ou_interpolate
from rmt.observables import overlaps
from rmt.spectral import SpectralData, decompose

METRICS = ("ks", "local_law", "rigidity", "que_ratio", "min_bulk_gap", "index_gap")


def metric_key(metric: str, t: float) -> str:
    return f"{metric}@{t:g}"


class DbmDiagnostics(Experiment):
    """
    Each sample starts from one ensemble draw H₀ and looks at the spectrum and frame at
    every configured time, either through the exact-in-law OU marginal or one Euler–Maruyama
    trajectory of the coupled SDEs.
    """

    name = "dbm-diagnostics"

    def _states(self, rng: np.random.Generator) -> Dict[float, SpectralData]:
        cfg = self.config
        h0 = self.draw_matrix(rng)
        if cfg.dbm_method == "ou":
            return {t: decompose(ou_interpolate(h0, t, rng)) for t in cfg.times}
        trajectory = integrate_dbm(decompose(h0), max(cfg.times), cfg.dt, rng, snapshot_times=cfg.times)
        return dict(zip(trajectory.times, trajectory.states))

    def sample(self, index: int, rng: np.random.Generator) -> Row:
        cfg = self.config
        grid = local_law_grid(cfg.n, cfg.omega)
        family = self.build_family(rng)
        k = cfg.resolved_index
        gap_index = k if k < cfg.n - 1 else k - 1
        bulk = slice(cfg.n // 4, (3 * cfg.n) // 4)
        row: Row = {}
        for t, s in self._states(rng).items():
            gaps = normalized_gaps(s.lambdas)
            row[metric_key("ks", t)] = ks_to_semicircle(s.lambdas)
            row[metric_key("local_law", t)] = local_law_residual(s, grid, scaled=True)
            row[metric_key("rigidity", t)] = rigidity_residual(s.lambdas)
            row[metric_key("que_ratio", t)] = que_ratio(overlaps(s, family), t)
            row[metric_key("min_bulk_gap", t)] = float(gaps[bulk].min())
            row[metric_key("index_gap", t)] = float(gaps[gap_index])
        return row

    def repulsion_probability(self, rows: List[Row]) -> float:
        """P(normalized gap at the configured index < N^{-δ}), pooled over samples and times."""
        threshold = self.config.n ** (-self.config.repulsion_delta)
        gaps = np.concatenate([self.column(rows, metric_key("index_gap", t)) for t in self.config.times])
        return float(np.mean(gaps < threshold))

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        cfg = self.config
        medians = {
            f"{t:g}": {metric: float(np.median(self.column(rows, metric_key(metric, t)))) for metric in METRICS}
            for t in cfg.times
        }
        return {
            "samples": len(rows),
            "method": cfg.dbm_method,
            "medians": medians,
            "repulsion_probability": self.repulsion_probability(rows),
            "repulsion_threshold": cfg.n ** (-cfg.repulsion_delta),
            "que_ratio_bound": cfg.n**cfg.que_ratio_exponent,
            "rigidity_bound": rigidity_bound(cfg.n),
            "rigidity_within_bound": {
                f"{t:g}": float(np.mean(self.column(rows, metric_key("rigidity", t)) <= rigidity_bound(cfg.n)))
                for t in cfg.times
            },
        }

    def gates(self, summary: Dict[str, Any]) -> Dict[str, bool]:
        cfg = self.config
        medians = summary["medians"]
        last = f"{max(cfg.times):g}"
        verdicts = {"ks_final": medians[last]["ks"] <= cfg.ks_threshold}
        for t, row in medians.items():
            verdicts[f"que_ratio@{t}"] = row["que_ratio"] <= summary["que_ratio_bound"]
        verdicts["level_repulsion"] = summary["repulsion_probability"] <= cfg.repulsion_fraction
        return verdicts

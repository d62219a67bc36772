"""Common machinery for the experiment classes."""

from abc import ABC, abstractmethod
from functools import cached_property
from typing import Any, Dict, List

import numpy as np

from experiments.config import ExperimentConfig
from rmt.ensembles import VarianceProfile, build_variance_profile, ou_interpolate, sample_goe, sample_wigner
from rmt.observables import TestFamily, coordinate_family, random_family
from rmt.spectral import SymmetricMatrix
from utils.logger import get_logger
from utils.seeding import stream_rng

Row = Dict[str, Any]


class Experiment(ABC):
    """
    One Monte Carlo or deterministic experiment.

    `sample` maps a sample index and its private generator to one row of statistics;
    `summarize` and `gates` only ever look at the rows, so a persisted CSV is enough to
    recompute the summary.
    """

    name: str = "experiment"

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.logger = get_logger(f"experiments.{self.name}")

    @abstractmethod
    def sample(self, index: int, rng: np.random.Generator) -> Row:
        ...

    @abstractmethod
    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        ...

    @abstractmethod
    def gates(self, summary: Dict[str, Any]) -> Dict[str, bool]:
        ...

    @cached_property
    def profile(self) -> VarianceProfile:
        """Variance profile, drawn once per run from the master seed."""
        cfg = self.config
        return build_variance_profile(cfg.n, cfg.profile_spread, stream_rng(cfg.seed, "profile"))

    def draw_matrix(self, rng: np.random.Generator) -> SymmetricMatrix:
        """Ensemble sample, OU-interpolated towards GOE when ou_time > 0."""
        cfg = self.config
        if cfg.distribution is None:
            h = sample_goe(cfg.n, rng)
        else:
            h = sample_wigner(self.profile, cfg.distribution, rng)
        if cfg.ou_time > 0:
            h = ou_interpolate(h, cfg.ou_time, rng)
        return h

    def build_family(self, rng: np.random.Generator) -> TestFamily:
        """The first |I| coordinate vectors, or |I| Haar-random orthonormal vectors."""
        cfg = self.config
        size = cfg.resolved_set_size
        if cfg.family == "coord":
            return coordinate_family(cfg.n, range(size))
        return random_family(cfg.n, size, rng)

    def column(self, rows: List[Row], key: str) -> np.ndarray:
        return np.array([row[key] for row in rows], dtype=float)

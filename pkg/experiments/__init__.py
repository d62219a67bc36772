"""Experiment registry: name -> class."""

from typing import Dict, Type

from experiments.base import Experiment
from experiments.clt import CltExperiment
from experiments.config import ExperimentConfig
from experiments.dbm_diagnostics import DbmDiagnostics
from experiments.flow_check import FlowCheckExperiment
from experiments.identity_suite import IdentitySuite
from experiments.que import QueExperiment
from experiments.record import RunRecord
from experiments.regularized_compare import RegularizedCompare

REGISTRY: Dict[str, Type[Experiment]] = {
    cls.name: cls
    for cls in (CltExperiment, QueExperiment, IdentitySuite, FlowCheckExperiment, DbmDiagnostics, RegularizedCompare)
}


def build_experiment(config: ExperimentConfig) -> Experiment:
    return REGISTRY[config.experiment](config)


__all__ = ["Experiment", "ExperimentConfig", "RunRecord", "REGISTRY", "build_experiment"]

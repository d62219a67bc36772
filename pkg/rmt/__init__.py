"""Numerical library: ensembles, spectral machinery, overlap and moment observables."""

from rmt.spectral import SpectralData, SpectralPoint, SymmetricMatrix, decompose
from rmt.observables import OverlapTable, TestFamily, coordinate_family, overlaps, random_family
from rmt.matchings import ParticleConfiguration, configuration

__all__ = [
    "SymmetricMatrix",
    "SpectralData",
    "SpectralPoint",
    "decompose",
    "TestFamily",
    "OverlapTable",
    "coordinate_family",
    "random_family",
    "overlaps",
    "ParticleConfiguration",
    "configuration",
]

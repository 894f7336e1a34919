"""Spectral evolution of Levy process densities and Levy-Schrodinger wave packets.

The main entry points:

* :mod:`levypacket.laws` - the law catalog, Levy triplets and the law grammar,
* :mod:`levypacket.evolution` - scenarios and the spectral engine,
* :mod:`levypacket.solutions` - closed-form references,
* :mod:`levypacket.analysis` - norms, variances and modes.
"""
from .errors import *  # noqa: F401,F403
from .evolution import InitialState, Scenario, evolve_process, evolve_wavepacket, process_residual, schrodinger_residual
from .laws import Family, LawSpec, parse_law
from .poisson import CompoundSpec
from .solutions import Noise
from .spectral import ComplexField, GridPair

__version__ = "0.1.0"

__all__ = [
    "ComplexField",
    "CompoundSpec",
    "Family",
    "GridPair",
    "InitialState",
    "LawSpec",
    "Noise",
    "Scenario",
    "evolve_process",
    "evolve_wavepacket",
    "parse_law",
    "process_residual",
    "schrodinger_residual",
]

"""Modelling toolkit for holey-fiber Fabry-Perot microcavities.

Submodules: :mod:`specfun` (Bessel kernels), :mod:`fiber` (vector mode
solver), :mod:`cavity` (Airy model, Q), :mod:`design` (core-diameter
sweeps), :mod:`scanio` (scan reduction) and :mod:`cli`.
"""
from . import cavity, design, fiber, scanio, specfun
from .cavity import CavityFigures, CavitySpec, TransmissionSpectrum
from .design import DesignPoint
from .fiber import FiberGeometry, ModeSolution, WavelengthContext

__version__ = "0.1.0"

__all__ = [
    "cavity", "design", "fiber", "scanio", "specfun",
    "CavityFigures", "CavitySpec", "TransmissionSpectrum", "DesignPoint",
    "FiberGeometry", "ModeSolution", "WavelengthContext",
]

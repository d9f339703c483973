"""Photon production from a sudden refractive-index change in a dielectric sphere."""
from __future__ import annotations

from .config import ConfigError, RunConfig, load_config
from .kernel import CutoffProfile, d_exact, f_exact, f_factorized
from .matching import MediumConfig
from .quadrature import QuadratureError, QuadratureSpec, integrate
from .spectrum import SpectrumResult, dn_dx, infinite_volume_totals, totals

__all__ = [
    "ConfigError",
    "CutoffProfile",
    "MediumConfig",
    "QuadratureError",
    "QuadratureSpec",
    "RunConfig",
    "SpectrumResult",
    "d_exact",
    "dn_dx",
    "f_exact",
    "f_factorized",
    "infinite_volume_totals",
    "integrate",
    "load_config",
    "totals",
]

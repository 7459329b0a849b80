"""Generalized rotating-wave approximation ground state (comparison baseline).

Only the ground level is provided. The adiabatic approximation gives the
same ground-state line, so it has no separate implementation.
"""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class GrwaResult:
    energy: float
    mean_photon: float


def grwa_energy(params):
    """``omega/2 - g^2/omega - (Omega/2) exp[-2 (g/omega)^2]``."""
    w, W, g = params.omega, params.Omega, params.g
    return 0.5 * w - g * g / w - 0.5 * W * math.exp(-2.0 * (g / w) ** 2)


def grwa_mean_photon(params):
    """``g^2 / omega^2``, independent of ``Omega``."""
    return params.g * params.g / (params.omega * params.omega)


def grwa(params):
    return GrwaResult(grwa_energy(params), grwa_mean_photon(params))

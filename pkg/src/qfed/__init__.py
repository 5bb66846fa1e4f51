"""Quantized fluctuational electrodynamics for one-dimensional lossy layered media.

Photon energies are in eV, lengths in um and temperatures in K.
"""
from .dos import LdosBreakdown, LosslessOuterLayer, dos_sample, ifdos_integral, ldos, ldos_closed_form
from .greens import fresnel, greens, solve_outgoing
from .lossless import cavity_coefficients, lossless_photon_numbers
from .observables import (FieldObservables, effective_temperature, field_observables,
                          observables_at, photon_number_directional, photon_number_total)
from .quadrature import BACKEND, QuadratureNotConverged
from .stack import Layer, LayerStack, StackError, bose_einstein

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "FieldObservables", "Layer", "LayerStack", "LdosBreakdown", "LosslessOuterLayer",
    "QuadratureNotConverged", "StackError", "bose_einstein", "cavity_coefficients", "dos_sample",
    "effective_temperature", "field_observables", "fresnel", "greens", "ifdos_integral", "ldos",
    "ldos_closed_form", "lossless_photon_numbers", "observables_at", "photon_number_directional",
    "photon_number_total", "solve_outgoing", "__version__",
]

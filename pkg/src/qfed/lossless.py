"""Closed-form directional photon numbers of a lossless three-layer cavity.

The cavity (layer 2, thickness d2) sits between two lossless half-spaces.
Given the photon numbers incident from the left (n1_plus) and from the
right (n3_minus), the outgoing and intracavity directional photon numbers
follow from the generalized reflection and transmission coefficients of the
structure.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .greens import fresnel
from .stack import free_space_wavenumber

POLE_TOLERANCE = 1e-12


class PoleAtResonance(ArithmeticError):
    """1 + r1 r2 exp(2 i k2 d2) vanishes (unit-reflectivity input)."""


@dataclass(frozen=True)
class CavityCoefficients:
    nu2: complex
    R1: complex
    R2: complex
    T1: complex
    T2: complex
    R1p: complex
    R2p: complex
    T1p: complex
    T2p: complex
    k2: complex
    d2: float
    eps1: float
    eps2: float
    eps3: float

    @property
    def round_trip(self) -> complex:
        return cmath.exp(2j * self.k2 * self.d2)


@dataclass(frozen=True)
class CavityInputs:
    n1_plus: float
    n3_minus: float

    def __post_init__(self):
        if self.n1_plus < 0 or self.n3_minus < 0:
            raise ValueError("input photon numbers must be >= 0")


@dataclass(frozen=True)
class CavityPhotonNumbers:
    n1_minus: float
    n2_plus: float
    n2_minus: float
    n3_plus: float


def cavity_coefficients(n1: float, n2: float, n3: float, d2: float, E: float) -> CavityCoefficients:
    for name, n in (("n1", n1), ("n2", n2), ("n3", n3)):
        if not (np.isreal(n) and float(np.real(n)) > 0):
            raise ValueError(f"{name} must be a positive real index, got {n}")
    if not d2 > 0:
        raise ValueError(f"cavity thickness must be > 0, got {d2}")
    n1, n2, n3 = float(np.real(n1)), float(np.real(n2)), float(np.real(n3))
    i1 = fresnel(n1, n2)
    i2 = fresnel(n2, n3)
    k2 = free_space_wavenumber(E) * n2
    phase = cmath.exp(2j * k2 * d2)
    denom = 1 + i1.r * i2.r * phase
    if abs(denom) < POLE_TOLERANCE:
        raise PoleAtResonance(f"|1 + r1 r2 exp(2ik2d2)| = {abs(denom):.2e}")
    nu2 = 1 / denom
    return CavityCoefficients(
        nu2=nu2,
        R1=(i1.r + i2.r * phase) * nu2,
        R2=i2.r,
        T1=i1.t * nu2,
        T2=i2.t,
        R1p=i1.r_prime,
        R2p=(i2.r_prime + i1.r_prime * phase) * nu2,
        T1p=i1.t_prime,
        T2p=i2.t_prime * nu2,
        k2=k2, d2=float(d2),
        eps1=n1 * n1, eps2=n2 * n2, eps3=n3 * n3,
    )


def lossless_photon_numbers(c: CavityCoefficients, inputs: CavityInputs) -> CavityPhotonNumbers:
    a = inputs.n1_plus
    b = inputs.n3_minus
    s21 = math.sqrt(c.eps2 / c.eps1)
    s23 = math.sqrt(c.eps2 / c.eps3)
    denom = (1 + 2 * c.R1p * c.R2 * c.nu2 * c.round_trip).real
    return CavityPhotonNumbers(
        n1_minus=abs(c.R1) ** 2 * a + math.sqrt(c.eps1 / c.eps3) * abs(c.T1p * c.T2p) ** 2 * b,
        n2_plus=(s21 * abs(c.T1) ** 2 * a + s23 * abs(c.T2p * c.R1p) ** 2 * b) / denom,
        n2_minus=(s21 * abs(c.T1 * c.R2) ** 2 * a + s23 * abs(c.T2p) ** 2 * b) / denom,
        n3_plus=math.sqrt(c.eps3 / c.eps1) * abs(c.T1 * c.T2) ** 2 * a + abs(c.R2p) ** 2 * b,
    )


def lossless_photon_numbers_array(n1, n2, n3, d2, E, n1_plus, n3_minus):
    """Vectorized form over numpy arrays of configurations; returns four arrays."""
    n1, n2, n3, d2, E, a, b = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in
                                                   (n1, n2, n3, d2, E, n1_plus, n3_minus)))
    r1 = (n1 - n2) / (n1 + n2)
    t1 = 2 * n1 / (n1 + n2)
    r1p, t1p = -r1, 2 * n2 / (n1 + n2)
    r2 = (n2 - n3) / (n2 + n3)
    t2 = 2 * n2 / (n2 + n3)
    r2p, t2p = -r2, 2 * n3 / (n2 + n3)
    phase = np.exp(2j * free_space_wavenumber(E) * n2 * d2)
    nu2 = 1 / (1 + r1 * r2 * phase)
    R1 = (r1 + r2 * phase) * nu2
    T1 = t1 * nu2
    R2p = (r2p + r1p * phase) * nu2
    T2p = t2p * nu2
    denom = np.real(1 + 2 * r1p * r2 * nu2 * phase)
    e1, e2, e3 = n1 ** 2, n2 ** 2, n3 ** 2
    out1 = np.abs(R1) ** 2 * a + np.sqrt(e1 / e3) * np.abs(t1p * T2p) ** 2 * b
    out2p = (np.sqrt(e2 / e1) * np.abs(T1) ** 2 * a + np.sqrt(e2 / e3) * np.abs(T2p * r1p) ** 2 * b) / denom
    out2m = (np.sqrt(e2 / e1) * np.abs(T1 * r2) ** 2 * a + np.sqrt(e2 / e3) * np.abs(T2p) ** 2 * b) / denom
    out3 = np.sqrt(e3 / e1) * np.abs(T1 * t2) ** 2 * a + np.abs(R2p) ** 2 * b
    return out1, out2p, out2m, out3

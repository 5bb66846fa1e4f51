"""Layered-medium model, physical constants and the thermal source field.

Units used throughout the package: photon energy in eV, lengths in um,
temperatures in K. The free-space wavenumber of a photon of energy ``E`` is
``E / HBAR_C`` in 1/um.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# CODATA 2018
HBAR_C_EV_NM = 197.3269804
HBAR_C = HBAR_C_EV_NM * 1e-3  # eV um
K_B = 8.617333262e-5  # eV / K
C_LIGHT = 2.99792458e8  # m / s
QUANTIZATION_AREA = 1.0

SEMI_INFINITE = "semi-infinite"


class StackError(ValueError):
    """Invalid layer or stack definition."""


@dataclass(frozen=True)
class Layer:
    """Homogeneous, nonmagnetic, passive layer.

    ``thickness`` is in um, or ``None`` for a semi-infinite outer layer.
    """

    refractive_index: complex
    thickness: float | None
    temperature: float = 0.0

    def __post_init__(self):
        n = complex(self.refractive_index)
        object.__setattr__(self, "refractive_index", n)
        if not n.real > 0:
            raise StackError(f"refractive index must have n_r > 0, got {n}")
        if n.imag < 0:
            raise StackError(f"gain media are not supported (n_i < 0), got {n}")
        if not self.temperature >= 0:
            raise StackError(f"temperature must be >= 0 K, got {self.temperature}")
        if self.thickness is not None:
            d = float(self.thickness)
            if not (d > 0 and math.isfinite(d)):
                raise StackError(f"thickness must be finite and > 0 um, got {d}")
            object.__setattr__(self, "thickness", d)

    @property
    def semi_infinite(self) -> bool:
        return self.thickness is None

    @property
    def permittivity(self) -> complex:
        return self.refractive_index ** 2


@dataclass(frozen=True)
class LayerStack:
    """Ordered layers, left to right; the first interface sits at x = 0.

    A position exactly on an interface belongs to the layer on its right.
    """

    layers: tuple[Layer, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        if len(layers) < 2:
            raise StackError("a stack needs at least two layers")
        if not (layers[0].semi_infinite and layers[-1].semi_infinite):
            raise StackError("first and last layers must be semi-infinite")
        for i, layer in enumerate(layers[1:-1], start=1):
            if layer.semi_infinite:
                raise StackError(f"inner layer {i} must have a finite thickness")

    @classmethod
    def from_layers(cls, layers: Iterable[Layer]) -> LayerStack:
        return cls(tuple(layers))

    @property
    def interfaces(self) -> tuple[float, ...]:
        z = [0.0]
        for layer in self.layers[1:-1]:
            z.append(z[-1] + layer.thickness)
        return tuple(z)

    def __len__(self) -> int:
        return len(self.layers)

    def layer_index(self, x: float) -> int:
        return bisect.bisect_right(self.interfaces, x)

    def layer_at(self, x: float) -> Layer:
        return self.layers[self.layer_index(x)]

    def bounds(self, j: int) -> tuple[float, float]:
        """Left and right edge of layer ``j`` (infinite for outer layers)."""
        z = self.interfaces
        lo = -math.inf if j == 0 else z[j - 1]
        hi = math.inf if j == len(self.layers) - 1 else z[j]
        return lo, hi

    def reversed(self) -> LayerStack:
        """Mirror image: layer order reversed, x -> -x shifted so the first interface is at 0."""
        return LayerStack(self.layers[::-1])

    def with_temperatures(self, temperatures: Sequence[float]) -> LayerStack:
        if len(temperatures) != len(self.layers):
            raise StackError("one temperature per layer required")
        return LayerStack(tuple(
            Layer(l.refractive_index, l.thickness, float(t))
            for l, t in zip(self.layers, temperatures)))


def free_space_wavenumber(E: float) -> float:
    """k0 = E / (hbar c) in 1/um."""
    return E / HBAR_C


def permittivity_at(stack: LayerStack, x: float, E: float) -> complex:
    """Relative permittivity at ``x``; dispersion-free, so ``E`` only checks the domain."""
    _check_energy(E)
    return stack.layer_at(x).permittivity


def wavenumber_at(stack: LayerStack, x: float, E: float) -> complex:
    _check_energy(E)
    return free_space_wavenumber(E) * stack.layer_at(x).refractive_index


def propagation_velocity(stack: LayerStack, x: float, E: float) -> float:
    """Energy propagation velocity c / n_r in m/s."""
    _check_energy(E)
    return C_LIGHT / stack.layer_at(x).refractive_index.real


def bose_einstein(E, T):
    """Mean thermal photon number 1 / (exp(E / k_B T) - 1); exactly 0 at T = 0.

    Accepts scalars or numpy arrays.
    """
    if np.ndim(E) == 0 and np.ndim(T) == 0:
        if T == 0:
            return 0.0
        x = E / (K_B * T)
        # e^-x / (1 - e^-x) underflows gracefully instead of overflowing for x >> 1
        return math.exp(-x) / -math.expm1(-x)
    E, T = np.broadcast_arrays(np.asarray(E, dtype=float), np.asarray(T, dtype=float))
    out = np.zeros(E.shape)
    hot = T > 0
    x = E[hot] / (K_B * T[hot])
    out[hot] = np.exp(-x) / -np.expm1(-x)
    return out


def source_photon_numbers(stack: LayerStack, E: float) -> np.ndarray:
    """Per-layer source-field photon number <eta> set by each layer's temperature."""
    return np.array([bose_einstein(E, l.temperature) for l in stack.layers])


def uniform_grid(start: float, stop: float, count: int) -> np.ndarray:
    if count < 1:
        raise StackError("grid needs at least one point")
    if count == 1:
        return np.array([float(start)])
    if not stop > start:
        raise StackError("grid stop must exceed start")
    return np.linspace(start, stop, count)


def check_grid(values: Sequence[float], *, positive: bool = False) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise StackError("grid must be a non-empty 1D sequence")
    if np.any(np.diff(arr) <= 0):
        raise StackError("grid must be strictly increasing")
    if positive and np.any(arr <= 0):
        raise StackError("energies must be > 0")
    return arr


def _check_energy(E: float) -> None:
    if not E > 0:
        raise StackError(f"photon energy must be > 0 eV, got {E}")

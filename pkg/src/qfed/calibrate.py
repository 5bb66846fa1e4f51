"""Cavity-thickness calibration against a target first-resonance energy.

The middle layer of a three-layer stack is resized until the lowest-energy
maximum of a resonance indicator sits at the target. Indicators:

``resonance``
    Round-trip enhancement ``|1 / (1 + r12 r23 exp(2 i k2 d2))|`` of the
    cavity, with complex Fresnel coefficients (default).
``ldos-average``
    LDOS averaged over the cavity.
``ldos-center``
    LDOS at the cavity centre.

Maxima are located on a uniform energy scan and refined by golden-section
search; the thickness is then found by Brent's method.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, replace

import numpy as np
from scipy import optimize

from .dos import source_integrals
from .greens import fresnel
from .stack import Layer, LayerStack, free_space_wavenumber

CRITERIA = ("resonance", "ldos-average", "ldos-center")
SCAN_POINTS = 600
CAVITY_SAMPLES = 33


class NoResonanceFound(RuntimeError):
    """No maximum of the indicator lies inside the scan range."""


@dataclass(frozen=True)
class CalibrationResult:
    thickness: float
    maxima: tuple[float, ...]
    criterion: str
    scan_range: tuple[float, float]

    @property
    def first(self) -> float:
        return self.maxima[0]


def _with_thickness(stack: LayerStack, d: float) -> LayerStack:
    layers = list(stack.layers)
    layers[1] = replace(layers[1], thickness=float(d))
    return LayerStack(tuple(layers))


def indicator(stack: LayerStack, criterion: str = "resonance", rtol: float = 1e-10):
    """Vectorized function E -> indicator value for a three-layer ``stack``."""
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}, got {criterion!r}")
    n1, n2, n3 = (l.refractive_index for l in stack.layers)
    d = stack.layers[1].thickness
    if criterion == "resonance":
        r12 = fresnel(n1, n2).r
        r23 = fresnel(n2, n3).r

        def f(E):
            k2 = free_space_wavenumber(np.asarray(E, dtype=float)) * n2
            return 1.0 / np.abs(1 + r12 * r23 * np.exp(2j * k2 * d))
        return f

    if criterion == "ldos-center":
        xs = np.array([0.5 * d])
    else:
        # midpoint rule over the cavity
        xs = (np.arange(CAVITY_SAMPLES) + 0.5) * d / CAVITY_SAMPLES

    def f(E):
        E = np.atleast_1d(np.asarray(E, dtype=float))
        out = np.array([source_integrals(stack, float(e), xs, rtol).nl_integral().mean() for e in E])
        return out
    return f


def find_maxima(f, lo: float, hi: float, points: int = SCAN_POINTS) -> list[float]:
    """Interior local maxima of ``f`` on [lo, hi], refined by golden-section search."""
    grid = np.linspace(lo, hi, points)
    vals = np.asarray(f(grid), dtype=float)
    peaks = []
    for i in range(1, points - 1):
        if vals[i] > vals[i - 1] and vals[i] >= vals[i + 1]:
            res = optimize.minimize_scalar(lambda e: -float(np.asarray(f(e)).reshape(-1)[0]),
                                           bracket=(grid[i - 1], grid[i], grid[i + 1]),
                                           method="golden", tol=1e-10)
            peaks.append(float(res.x))
    return peaks


def calibrate_thickness(stack: LayerStack, target: float, *, criterion: str = "resonance",
                        scan: tuple[float, float] | None = None,
                        points: int = SCAN_POINTS) -> CalibrationResult:
    """Thickness of layer 1 that puts the first indicator maximum at ``target`` (eV).

    Parameters
    ----------
    stack : LayerStack
        Three-layer structure; the current cavity thickness seeds the search.
    target : float
        Desired first-maximum energy in eV, inside ``scan``.
    scan : (float, float), optional
        Energy window searched for maxima; defaults to [target / 2, 4 target].

    Raises
    ------
    NoResonanceFound
        If no maximum exists in the scan window for the seed or bracketing thicknesses.
    """
    if len(stack) != 3:
        raise ValueError(f"calibration needs a three-layer stack, got {len(stack)} layers")
    lo, hi = scan if scan is not None else (0.5 * target, 4.0 * target)
    if not lo < target < hi:
        raise ValueError(f"target {target} eV outside the scan range [{lo}, {hi}]")

    def first_peak(d):
        peaks = find_maxima(indicator(_with_thickness(stack, d), criterion), lo, hi, points)
        if not peaks:
            raise NoResonanceFound(f"no {criterion} maximum in [{lo}, {hi}] eV for d = {d} um")
        return peaks[0]

    d0 = stack.layers[1].thickness
    # peaks scale as 1/d for dispersion-free indices
    guess = d0 * first_peak(d0) / target
    a, b = 0.9 * guess, 1.1 * guess
    ga, gb = first_peak(a) - target, first_peak(b) - target
    if ga * gb > 0:
        raise NoResonanceFound(
            f"first {criterion} maximum does not cross {target} eV for d in [{a:.4g}, {b:.4g}] um")
    d = optimize.brentq(lambda t: first_peak(t) - target, a, b, xtol=1e-9, rtol=1e-12)
    peaks = find_maxima(indicator(_with_thickness(stack, d), criterion), lo, hi, points)
    return CalibrationResult(float(d), tuple(peaks), criterion, (lo, hi))

"""One-dimensional Helmholtz Green's function of a layer stack.

The Green's function solves

    (d^2/dx^2 + k0^2 eps(x)) G(x, x') = -delta(x - x')

and is assembled from the two outgoing homogeneous solutions, ``psi_L``
(decaying as x -> -inf) and ``psi_R`` (decaying as x -> +inf):

    G(x, x') = -psi_L(x_<) psi_R(x_>) / W,    W = psi_L psi_R' - psi_L' psi_R.

In a uniform medium this reduces to G = (i / 2k) exp(ik|x - x'|).

Inside layer ``j`` each solution is stored as

    psi(x) = P_j exp(-i k_j (x - zP_j)) + Q_j exp(i k_j (x - zQ_j))

with the left-going term referenced to the right edge of the layer and the
right-going term to the left edge, so neither exponential exceeds unit
modulus inside a finite layer. Amplitudes come from a reflection-coefficient
recursion across the interfaces; no transfer matrices of lossy layers are
ever multiplied together.
"""
from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import numpy as np

from .stack import LayerStack, free_space_wavenumber

#: |W| below this fraction of its natural scale is treated as a bound mode.
WRONSKIAN_RTOL = 1e-14
#: relative spread of W across interfaces tolerated by the consistency check.
WRONSKIAN_CONSISTENCY = 1e-10


class DegenerateWronskian(ArithmeticError):
    """The outgoing solutions are linearly dependent (a true bound mode)."""


class InconsistentWronskian(ArithmeticError):
    """W differs between interfaces; the recursion lost accuracy."""


@dataclass(frozen=True)
class InterfaceCoefficients:
    """Normal-incidence Fresnel amplitudes; unprimed for incidence from the left."""

    r: complex
    t: complex
    r_prime: complex
    t_prime: complex


def fresnel(n_left: complex, n_right: complex) -> InterfaceCoefficients:
    n_left, n_right = complex(n_left), complex(n_right)
    if not (n_left.real > 0 and n_right.real > 0):
        raise ValueError("refractive indices need a positive real part")
    s = n_left + n_right
    r = (n_left - n_right) / s
    return InterfaceCoefficients(r=r, t=2 * n_left / s, r_prime=-r, t_prime=2 * n_right / s)


@dataclass(frozen=True)
class Mode:
    """Piecewise plane-wave representation of one homogeneous solution."""

    k: np.ndarray
    p: np.ndarray
    zp: np.ndarray
    q: np.ndarray
    zq: np.ndarray

    def terms(self, j: int, x: float) -> tuple[complex, complex]:
        """Left- and right-going parts of psi at ``x`` inside layer ``j``."""
        k = self.k[j]
        p, q = self.p[j], self.q[j]
        # a vanishing amplitude must not be multiplied by an overflowing exponential
        a = p * cmath.exp(-1j * k * (x - self.zp[j])) if p != 0 else 0j
        b = q * cmath.exp(1j * k * (x - self.zq[j])) if q != 0 else 0j
        return a, b

    def value(self, j: int, x: float) -> complex:
        a, b = self.terms(j, x)
        return a + b

    def derivative(self, j: int, x: float) -> complex:
        a, b = self.terms(j, x)
        return 1j * self.k[j] * (b - a)

    def mirrored(self, total: float) -> Mode:
        """Mode of the mirror stack expressed back in original coordinates.

        Under x -> total - x a left-going term becomes right-going and vice
        versa, and the layer order flips.
        """
        return Mode(k=self.k[::-1].copy(), p=self.q[::-1].copy(), zp=total - self.zq[::-1],
                    q=self.p[::-1].copy(), zq=total - self.zp[::-1])


def _left_outgoing(stack: LayerStack, E: float) -> Mode:
    """psi_L, normalized to a unit left-going amplitude at the last interface."""
    ns = [l.refractive_index for l in stack.layers]
    z = stack.interfaces
    last = len(ns) - 1
    k0 = free_space_wavenumber(E)
    k = [k0 * n for n in ns]
    d = [0.0] + [l.thickness for l in stack.layers[1:-1]] + [0.0]

    coeffs = [fresnel(ns[j], ns[j + 1]) for j in range(last)]
    # gamma_edge[j]: right/left amplitude ratio at the left edge of layer j
    # gamma_hat[j]: the same ratio at the right edge of layer j
    gamma_edge = [0j] * (last + 1)
    gamma_hat = [0j] * (last + 1)
    for j in range(last):
        r = coeffs[j].r
        g = gamma_hat[j]
        gamma_edge[j + 1] = (g - r) / (1 - r * g)
        if j + 1 < last:
            gamma_hat[j + 1] = gamma_edge[j + 1] * cmath.exp(2j * k[j + 1] * d[j + 1])

    p = [0j] * (last + 1)
    q = [0j] * (last + 1)
    zp = [0.0] * (last + 1)
    zq = [0.0] * (last + 1)
    p[last] = 1.0 + 0j
    q[last] = gamma_edge[last]
    zp[last] = zq[last] = z[-1]
    incident = 1.0 + 0j
    for j in range(last - 1, -1, -1):
        c = coeffs[j]
        p[j] = c.t_prime * incident / (1 - c.r * gamma_hat[j])
        zp[j] = z[j]
        if j > 0:
            phase = cmath.exp(1j * k[j] * d[j])
            q[j] = gamma_edge[j] * p[j] * phase
            zq[j] = z[j - 1]
            incident = p[j] * phase
        else:
            zq[j] = z[0]
    return Mode(k=np.array(k), p=np.array(p), zp=np.array(zp), q=np.array(q), zq=np.array(zq))


@dataclass(frozen=True)
class OutgoingSolutions:
    """psi_L, psi_R and their Wronskian for one (stack, E)."""

    stack: LayerStack
    energy: float
    left: Mode
    right: Mode
    wronskian: complex
    wronskian_spread: float

    def wronskian_at(self, x: float) -> complex:
        j = self.stack.layer_index(x)
        return (self.left.value(j, x) * self.right.derivative(j, x)
                - self.left.derivative(j, x) * self.right.value(j, x))


@functools.lru_cache(maxsize=4096)
def solve_outgoing(stack: LayerStack, E: float) -> OutgoingSolutions:
    """Outgoing solutions of the homogeneous Helmholtz equation.

    Results are cached per (stack, E) and shared read-only.

    Raises
    ------
    DegenerateWronskian
        If psi_L and psi_R are numerically linearly dependent.
    InconsistentWronskian
        If W evaluated on the two sides of every interface is not constant to
        ``WRONSKIAN_CONSISTENCY``.
    """
    if not E > 0:
        raise ValueError(f"photon energy must be > 0 eV, got {E}")
    z = stack.interfaces
    left = _left_outgoing(stack, E)
    right = _left_outgoing(stack.reversed(), E).mirrored(z[-1])

    samples = []
    scales = []
    for i, zi in enumerate(z):
        for j in (i, i + 1):
            a, da = left.value(j, zi), left.derivative(j, zi)
            b, db = right.value(j, zi), right.derivative(j, zi)
            samples.append(a * db - da * b)
            scales.append(abs(a * db) + abs(da * b))
    w = samples[0]
    if not all(map(cmath.isfinite, samples)) or not all(map(math.isfinite, scales)):
        raise DegenerateWronskian("non-finite outgoing solutions")
    if abs(w) <= WRONSKIAN_RTOL * scales[0] or w == 0:
        raise DegenerateWronskian(f"|W| = {abs(w):.3e} underflows at E = {E} eV")
    spread = max(abs(s - w) for s in samples) / abs(w)
    if spread > WRONSKIAN_CONSISTENCY:
        raise InconsistentWronskian(f"Wronskian varies by {spread:.2e} across interfaces")
    return OutgoingSolutions(stack, float(E), left, right, w, spread)


@dataclass(frozen=True)
class GreensEvaluation:
    G: complex
    dG_dx: complex


def greens(stack: LayerStack, E: float, x: float, x_src: float) -> GreensEvaluation:
    """G(x, x') and dG/dx with respect to the field point.

    At x == x' the derivative has a unit jump; the average of the two
    one-sided limits is returned there.
    """
    sol = solve_outgoing(stack, E)
    jx = stack.layer_index(x)
    js = stack.layer_index(x_src)
    w = sol.wronskian
    if x > x_src:
        s = sol.left.value(js, x_src) / w
        return GreensEvaluation(-s * sol.right.value(jx, x), -s * sol.right.derivative(jx, x))
    if x < x_src:
        s = sol.right.value(js, x_src) / w
        return GreensEvaluation(-s * sol.left.value(jx, x), -s * sol.left.derivative(jx, x))
    a, b = sol.left.value(jx, x), sol.right.value(jx, x)
    da, db = sol.left.derivative(jx, x), sol.right.derivative(jx, x)
    return GreensEvaluation(-a * b / w, -0.5 * (a * db + da * b) / w)

"""Nonlocal, interference and local densities of states.

For a field point ``x`` the Green's function factorizes, so every kernel's
dependence on the source point is |psi_L(x')|^2 for x' < x and |psi_R(x')|^2
for x' > x. Source integrals therefore reduce to per-layer integrals of
those two intensities: whole layers are integrated once per energy and
cached, the layer holding ``x`` is split at ``x``. Semi-infinite outer
layers are integrated in closed form.

Values are computed internally in the units of 2/(pi c S) used for LDOS
maps (a uniform medium has LDOS n_r / 2 there); ``RAW_PER_REDUCED``
converts to 1/(eV um), i.e. states per unit photon energy per unit length
for S = 1.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .greens import greens, solve_outgoing
from .quadrature import (DEFAULT_RTOL, QuadratureNotConverged, exact_intensity_integral,
                         integrate_intensity, integrate_intensity_batch)
from .stack import HBAR_C, LayerStack, free_space_wavenumber

RAW_PER_REDUCED = 2.0 / (math.pi * HBAR_C)


class LosslessOuterLayer(ValueError):
    """An outer layer has eps_i = 0; use :mod:`qfed.lossless` for that case."""


@dataclass(frozen=True)
class DosSample:
    rho_nl: float
    rho_if: float


@dataclass(frozen=True)
class LdosBreakdown:
    """LDOS and its electric / magnetic parts, in 1/(eV um) unless ``reduced``."""

    total: float
    electric: float
    magnetic: float
    error: float = 0.0
    reduced: bool = False

    def to_reduced(self) -> LdosBreakdown:
        if self.reduced:
            return self
        s = 1.0 / RAW_PER_REDUCED
        return LdosBreakdown(self.total * s, self.electric * s, self.magnetic * s,
                             self.error * s, True)


def _kernel_prefactors(stack: LayerStack, E: float, x: float, x_src: float):
    k0 = free_space_wavenumber(E)
    n = stack.layer_at(x).refractive_index
    eps_i_src = stack.layer_at(x_src).permittivity.imag
    return k0, n, eps_i_src


def nldos(stack: LayerStack, E: float, x: float, x_src: float) -> float:
    """rho_NL(x, E, x') in 1/(eV um^2), straight from G and dG/dx."""
    k0, n, eps_i = _kernel_prefactors(stack, E, x, x_src)
    if eps_i == 0:
        return 0.0
    g = greens(stack, E, x, x_src)
    k = k0 * n
    reduced = 0.5 * k0 ** 3 * abs(n * n) * eps_i * (abs(g.G) ** 2 + abs(g.dG_dx / k) ** 2)
    return RAW_PER_REDUCED * reduced


def ifdos(stack: LayerStack, E: float, x: float, x_src: float) -> float:
    """rho_IF(x, E, x') in 1/(eV um^2); positive for net flow towards +x."""
    k0, n, eps_i = _kernel_prefactors(stack, E, x, x_src)
    if eps_i == 0:
        return 0.0
    g = greens(stack, E, x, x_src)
    reduced = k0 ** 2 * n.real * eps_i * (1j * g.G * g.dG_dx.conjugate()).real
    return RAW_PER_REDUCED * reduced


def dos_sample(stack: LayerStack, E: float, x: float, x_src: float) -> DosSample:
    return DosSample(nldos(stack, E, x, x_src), ifdos(stack, E, x, x_src))


def _require_lossy_outer(stack: LayerStack) -> None:
    for side, layer in (("left", stack.layers[0]), ("right", stack.layers[-1])):
        if layer.permittivity.imag <= 0:
            raise LosslessOuterLayer(
                f"{side} outer layer is lossless; the source integral has no decaying tail")


@dataclass(frozen=True)
class _LayerIntegrals:
    """eps_i-weighted whole-layer intensity integrals for one (stack, E, rtol)."""

    left: np.ndarray
    left_err: np.ndarray
    right: np.ndarray
    right_err: np.ndarray


def _layer_integral(mode, j, a, b, eps_i, rtol, finite):
    if eps_i == 0 or b <= a:
        return 0.0, 0.0
    args = (mode.p[j], mode.zp[j], mode.q[j], mode.zq[j], mode.k[j], a, b)
    if finite:
        val, err = integrate_intensity(*args, rtol=rtol)
    else:
        val, err = exact_intensity_integral(*args), 0.0
    return eps_i * val, eps_i * err


@functools.lru_cache(maxsize=1024)
def _layer_integrals(stack: LayerStack, E: float, rtol: float) -> _LayerIntegrals:
    sol = solve_outgoing(stack, E)
    last = len(stack) - 1
    left = np.zeros(last + 1)
    left_err = np.zeros(last + 1)
    right = np.zeros(last + 1)
    right_err = np.zeros(last + 1)
    for j, layer in enumerate(stack.layers):
        lo, hi = stack.bounds(j)
        eps_i = layer.permittivity.imag
        finite = 0 < j < last
        if j < last:
            left[j], left_err[j] = _layer_integral(sol.left, j, lo, hi, eps_i, rtol, finite)
        if j > 0:
            right[j], right_err[j] = _layer_integral(sol.right, j, lo, hi, eps_i, rtol, finite)
    for arr in (left, left_err, right, right_err):
        arr.setflags(write=False)
    return _LayerIntegrals(left, left_err, right, right_err)


def _mode_at(mode, js, xs):
    """Vectorized psi and psi' for positions ``xs`` lying in layers ``js``."""
    k = mode.k[js]
    p, q = mode.p[js], mode.q[js]
    with np.errstate(over="ignore", invalid="ignore"):
        a = np.where(p != 0, p * np.exp(-1j * k * (xs - mode.zp[js])), 0j)
        b = np.where(q != 0, q * np.exp(1j * k * (xs - mode.zq[js])), 0j)
    return a + b, 1j * k * (b - a)


@dataclass(frozen=True)
class SourceIntegrals:
    """Source-point integrals at field points ``x`` (arrays) for one energy.

    ``left_parts[i, m]`` is the eps_i-weighted integral of |psi_L|^2 over the
    part of layer ``m`` left of ``x[i]``; ``right_parts`` likewise for psi_R
    to the right. The coefficient arrays carry the 1/|W|^2 normalization and
    kernel prefactors (reduced units), e.g. the electric LDOS is
    ``electric_left * left_parts.sum(1) + electric_right * right_parts.sum(1)``.
    Per-layer ``weights`` (such as source photon numbers) enter the sums.
    """

    x: np.ndarray
    energy: float
    layer: np.ndarray
    left_parts: np.ndarray
    right_parts: np.ndarray
    left_err: np.ndarray
    right_err: np.ndarray
    electric_left: np.ndarray
    electric_right: np.ndarray
    magnetic_left: np.ndarray
    magnetic_right: np.ndarray
    interference_left: np.ndarray
    interference_right: np.ndarray

    def _combine(self, cl, cr, weights):
        if weights is None:
            sl, sr = self.left_parts.sum(axis=1), self.right_parts.sum(axis=1)
        else:
            w = np.asarray(weights, dtype=float)
            sl = (self.left_parts * w).sum(axis=1)
            sr = (self.right_parts * w).sum(axis=1)
        return cl * sl + cr * sr

    def nl_integral(self, weights=None) -> np.ndarray:
        """Integral over x' of rho_NL times the per-layer weight (reduced units)."""
        return self._combine(self.electric_left + self.magnetic_left,
                             self.electric_right + self.magnetic_right, weights)

    def electric_integral(self, weights=None) -> np.ndarray:
        return self._combine(self.electric_left, self.electric_right, weights)

    def magnetic_integral(self, weights=None) -> np.ndarray:
        return self._combine(self.magnetic_left, self.magnetic_right, weights)

    def if_integral(self, weights=None) -> np.ndarray:
        """Integral over x' of rho_IF times the per-layer weight (reduced units)."""
        return self._combine(self.interference_left, self.interference_right, weights)

    def _err(self, cl, cr, weights):
        wmax = 1.0 if weights is None else float(np.max(np.abs(weights)))
        return wmax * (np.abs(cl) * self.left_err + np.abs(cr) * self.right_err)

    def nl_error(self, weights=None) -> np.ndarray:
        return self._err(self.electric_left + self.magnetic_left,
                         self.electric_right + self.magnetic_right, weights)

    def if_error(self, weights=None) -> np.ndarray:
        return self._err(self.interference_left, self.interference_right, weights)


def _split_integrals(mode, stack, j, lo_arr, hi_arr, rtol):
    """eps_i-weighted integrals of |psi|^2 over [lo_arr, hi_arr] inside layer ``j``."""
    n = len(lo_arr)
    eps_i = stack.layers[j].permittivity.imag
    if eps_i == 0 or n == 0:
        return np.zeros(n), np.zeros(n)
    args = (mode.p[j], mode.zp[j], mode.q[j], mode.zq[j], mode.k[j])
    if np.isinf(lo_arr).any() or np.isinf(hi_arr).any():
        vals = np.array([exact_intensity_integral(*args, a, b) for a, b in zip(lo_arr, hi_arr)])
        return eps_i * vals, np.zeros(n)
    vals, errs = integrate_intensity_batch(*args, lo_arr, hi_arr, rtol=rtol)
    return eps_i * vals, eps_i * errs


def source_integrals(stack: LayerStack, E: float, xs, rtol: float = DEFAULT_RTOL) -> SourceIntegrals:
    """Source integrals split at each field point in ``xs`` for photon energy ``E``.

    Raises
    ------
    LosslessOuterLayer
        If either semi-infinite layer has eps_i = 0.
    QuadratureNotConverged
        If an interval integral misses ``rtol``.
    """
    _require_lossy_outer(stack)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    sol = solve_outgoing(stack, E)
    try:
        table = _layer_integrals(stack, E, rtol)
    except QuadratureNotConverged as exc:
        exc.energy = float(E)
        raise
    nl = len(stack)
    last = nl - 1
    js = np.searchsorted(np.asarray(stack.interfaces), xs, side="right")

    below = np.arange(nl)[None, :] < js[:, None]
    above = np.arange(nl)[None, :] > js[:, None]
    left_parts = np.where(below, table.left[None, :], 0.0)
    right_parts = np.where(above, table.right[None, :], 0.0)
    left_err = np.where(below, table.left_err[None, :], 0.0).sum(axis=1)
    right_err = np.where(above, table.right_err[None, :], 0.0).sum(axis=1)

    rows = np.arange(len(xs))
    for j in np.unique(js):
        sel = rows[js == j]
        lo, hi = stack.bounds(int(j))
        x_sel = xs[sel]
        try:
            vals, errs = _split_integrals(sol.left, stack, int(j), np.full(len(sel), lo), x_sel, rtol)
            left_parts[sel, j] = vals
            left_err[sel] += errs
            vals, errs = _split_integrals(sol.right, stack, int(j), x_sel, np.full(len(sel), hi), rtol)
            right_parts[sel, j] = vals
            right_err[sel] += errs
        except QuadratureNotConverged as exc:
            exc.x = float(x_sel[exc.index]) if exc.index is not None else None
            exc.energy = float(E)
            raise

    k0 = free_space_wavenumber(E)
    n = np.array([l.refractive_index for l in stack.layers])[js]
    k = k0 * n
    w = abs(sol.wronskian)
    a, da = _mode_at(sol.left, js, xs)
    b, db = _mode_at(sol.right, js, xs)
    a, da, b, db = a / w, da / w, b / w, db / w
    c_nl = 0.5 * k0 ** 3 * np.abs(n * n)
    c_if = k0 ** 2 * n.real
    # sources left of x see psi_R(x); sources right of x see psi_L(x)
    return SourceIntegrals(
        x=xs, energy=float(E), layer=js,
        left_parts=left_parts, right_parts=right_parts,
        left_err=left_err, right_err=right_err,
        electric_left=c_nl * np.abs(b) ** 2,
        electric_right=c_nl * np.abs(a) ** 2,
        magnetic_left=c_nl * np.abs(db / k) ** 2,
        magnetic_right=c_nl * np.abs(da / k) ** 2,
        interference_left=c_if * (b.conjugate() * db).imag,
        interference_right=c_if * (a.conjugate() * da).imag,
    )


def ldos(stack: LayerStack, E: float, x: float, rtol: float = DEFAULT_RTOL) -> LdosBreakdown:
    """Local density of states, the integral of rho_NL over all source points."""
    si = source_integrals(stack, E, x, rtol)
    e = float(si.electric_integral()[0])
    m = float(si.magnetic_integral()[0])
    return LdosBreakdown(RAW_PER_REDUCED * (e + m), RAW_PER_REDUCED * e,
                         RAW_PER_REDUCED * m, RAW_PER_REDUCED * float(si.nl_error()[0]))


def ifdos_integral(stack: LayerStack, E: float, x: float, rtol: float = DEFAULT_RTOL) -> float:
    """Integral of rho_IF over all source points, 1/(eV um); zero up to quadrature error."""
    return RAW_PER_REDUCED * float(source_integrals(stack, E, x, rtol).if_integral()[0])


def commutator_norm(stack: LayerStack, E: float, x: float, sign: int,
                    rtol: float = DEFAULT_RTOL) -> float:
    """Integral of (rho_NL +/- rho_IF) over x' divided by the LDOS; equals 1."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    si = source_integrals(stack, E, x, rtol)
    rho = float(si.nl_integral()[0])
    return (rho + sign * float(si.if_integral()[0])) / rho


def ldos_closed_form(stack: LayerStack, E: float, x: float) -> LdosBreakdown:
    """LDOS from the outgoing solutions at ``x`` alone, without any source integral.

    Uses the flux identity d/dx Im(conj(psi) psi') = -k0^2 eps_i |psi|^2, so the
    eps_i-weighted intensity integrals collapse to boundary values. For a
    lossless outer layer the result is the limit n_i -> 0+, where the
    infinitely long, vanishingly weak tail still carries the outgoing flux.
    """
    sol = solve_outgoing(stack, E)
    j = stack.layer_index(x)
    k0 = free_space_wavenumber(E)
    n = stack.layers[j].refractive_index
    k = k0 * n
    w = abs(sol.wronskian)
    a, da = sol.left.value(j, x), sol.left.derivative(j, x)
    b, db = sol.right.value(j, x), sol.right.derivative(j, x)
    # each factor carries one power of 1/|W| so extreme optical depths stay in range
    int_left = -(a.conjugate() * da).imag / (k0 ** 2 * w)
    int_right = (b.conjugate() * db).imag / (k0 ** 2 * w)
    c = 0.5 * k0 ** 3 * abs(n * n)
    e = c * (abs(b) ** 2 / w * int_left + abs(a) ** 2 / w * int_right)
    m = c * (abs(db / k) ** 2 / w * int_left + abs(da / k) ** 2 / w * int_right)
    return LdosBreakdown(float(RAW_PER_REDUCED * (e + m)), float(RAW_PER_REDUCED * e),
                         float(RAW_PER_REDUCED * m))

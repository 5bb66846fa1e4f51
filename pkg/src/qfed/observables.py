"""Photon numbers, Poynting vector, energy density and effective temperatures.

All observables at (x, E) are weighted averages of the per-layer source
photon numbers, with weights from :func:`qfed.dos.source_integrals`.

Spectral quantities are per unit photon-energy bandwidth and per unit
quantization area: the Poynting vector in eV/s per eV (i.e. 1/s) and the
energy density in eV/um per eV (i.e. 1/um).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .dos import RAW_PER_REDUCED, SourceIntegrals, source_integrals
from .quadrature import DEFAULT_RTOL
from .stack import C_LIGHT, K_B, LayerStack, source_photon_numbers

C_UM_PER_S = C_LIGHT * 1e6


def effective_temperature(E, n):
    """Temperature whose Bose-Einstein occupation at ``E`` equals ``n``; 0 K for n = 0."""
    if np.ndim(E) == 0 and np.ndim(n) == 0:
        if n < 0:
            raise ValueError(f"photon number must be >= 0, got {n}")
        if n == 0:
            return 0.0
        return E / (K_B * math.log1p(1.0 / n))
    E, n = np.broadcast_arrays(np.asarray(E, dtype=float), np.asarray(n, dtype=float))
    if np.any(n < 0):
        raise ValueError("photon numbers must be >= 0")
    out = np.zeros(n.shape)
    pos = n > 0
    out[pos] = E[pos] / (K_B * np.log1p(1.0 / n[pos]))
    return out


@dataclass(frozen=True)
class FieldObservables:
    """Observables at field point(s) ``x`` for one energy.

    Fields are numpy arrays over ``x`` when produced by :func:`observables_at`
    and floats from :func:`field_observables`. LDOS values are in 1/(eV um);
    ``errors`` maps quantity names to quadrature-derived error estimates.
    """

    x: np.ndarray
    energy: float
    ldos: np.ndarray
    ldos_electric: np.ndarray
    ldos_magnetic: np.ndarray
    n_total: np.ndarray
    n_plus: np.ndarray
    n_minus: np.ndarray
    poynting: np.ndarray
    poynting_directional: np.ndarray
    energy_density: np.ndarray
    energy_density_directional: np.ndarray
    t_eff_total: np.ndarray
    t_eff_plus: np.ndarray
    t_eff_minus: np.ndarray
    commutator_plus: np.ndarray
    commutator_minus: np.ndarray
    errors: dict

    def at(self, i: int) -> FieldObservables:
        vals = {f.name: getattr(self, f.name) for f in fields(self)}
        out = {k: (float(v[i]) if isinstance(v, np.ndarray) else v) for k, v in vals.items()}
        out["errors"] = {k: float(v[i]) for k, v in self.errors.items()}
        return FieldObservables(**out)


def _clip0(n):
    # photon numbers are non-negative; quadrature noise can leave -1e-17
    return np.maximum(n, 0.0)


def from_source_integrals(stack: LayerStack, si: SourceIntegrals) -> FieldObservables:
    E = si.energy
    eta = source_photon_numbers(stack, E)
    n_r = np.array([l.refractive_index.real for l in stack.layers])[si.layer]
    v = C_UM_PER_S / n_r

    rho = si.nl_integral()
    if_total = si.if_integral()
    nl_eta = si.nl_integral(eta)
    if_eta = si.if_integral(eta)

    n_total = nl_eta / rho
    # rho_IF integrates to zero, so the LDOS alone normalizes n+ and n-
    n_plus = (nl_eta + if_eta) / rho
    n_minus = (nl_eta - if_eta) / rho

    rho_raw = RAW_PER_REDUCED * rho
    poynting = E * v * RAW_PER_REDUCED * if_eta
    poynting_dir = E * v * 0.5 * rho_raw * (n_plus - n_minus)
    u = E * rho_raw * (n_total + 0.5)
    u_dir = E * 0.5 * rho_raw * (n_plus + 0.5) + E * 0.5 * rho_raw * (n_minus + 0.5)

    rho_err = si.nl_error()
    nl_eta_err = si.nl_error(eta)
    if_eta_err = si.if_error(eta)
    rel = rho_err / rho
    n_err = nl_eta_err / rho + np.abs(n_total) * rel
    dir_err = (nl_eta_err + if_eta_err) / rho + np.maximum(np.abs(n_plus), np.abs(n_minus)) * rel
    errors = {
        "ldos": RAW_PER_REDUCED * rho_err,
        "n_total": n_err,
        "n_plus": dir_err,
        "n_minus": dir_err,
        "poynting": E * v * RAW_PER_REDUCED * if_eta_err,
        "energy_density": E * RAW_PER_REDUCED * (rho_err * (n_total + 0.5) + rho * n_err),
        "commutator": (si.if_error() + np.abs(if_total) * rel) / rho,
    }
    return FieldObservables(
        x=si.x, energy=E,
        ldos=rho_raw,
        ldos_electric=RAW_PER_REDUCED * si.electric_integral(),
        ldos_magnetic=RAW_PER_REDUCED * si.magnetic_integral(),
        n_total=n_total, n_plus=n_plus, n_minus=n_minus,
        poynting=poynting, poynting_directional=poynting_dir,
        energy_density=u, energy_density_directional=u_dir,
        t_eff_total=effective_temperature(E, _clip0(n_total)),
        t_eff_plus=effective_temperature(E, _clip0(n_plus)),
        t_eff_minus=effective_temperature(E, _clip0(n_minus)),
        commutator_plus=(rho + if_total) / rho,
        commutator_minus=(rho - if_total) / rho,
        errors=errors,
    )


def observables_at(stack: LayerStack, E: float, xs, rtol: float = DEFAULT_RTOL) -> FieldObservables:
    """All observables on an array of field points at one photon energy."""
    return from_source_integrals(stack, source_integrals(stack, E, xs, rtol))


def field_observables(stack: LayerStack, E: float, x: float,
                      rtol: float = DEFAULT_RTOL) -> FieldObservables:
    return observables_at(stack, E, [x], rtol).at(0)


def photon_number_total(stack: LayerStack, E: float, x: float, rtol: float = DEFAULT_RTOL) -> float:
    si = source_integrals(stack, E, x, rtol)
    return float(si.nl_integral(source_photon_numbers(stack, E))[0] / si.nl_integral()[0])


def photon_number_directional(stack: LayerStack, E: float, x: float, sign: int,
                              rtol: float = DEFAULT_RTOL) -> float:
    """Right- (sign = +1) or left-propagating (sign = -1) photon number."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    si = source_integrals(stack, E, x, rtol)
    eta = source_photon_numbers(stack, E)
    return float((si.nl_integral(eta)[0] + sign * si.if_integral(eta)[0]) / si.nl_integral()[0])


def photon_number_directional_full(stack: LayerStack, E: float, x: float, sign: int,
                                   rtol: float = DEFAULT_RTOL) -> float:
    """As :func:`photon_number_directional` but normalized by the integral of rho_NL +/- rho_IF."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    si = source_integrals(stack, E, x, rtol)
    eta = source_photon_numbers(stack, E)
    num = si.nl_integral(eta)[0] + sign * si.if_integral(eta)[0]
    return float(num / (si.nl_integral()[0] + sign * si.if_integral()[0]))


def poynting(stack: LayerStack, E: float, x: float,
             rtol: float = DEFAULT_RTOL) -> tuple[float, float]:
    """Spectral Poynting vector as (source-integral form, directional form), in 1/s."""
    obs = field_observables(stack, E, x, rtol)
    return obs.poynting, obs.poynting_directional


def energy_density(stack: LayerStack, E: float, x: float,
                   rtol: float = DEFAULT_RTOL) -> tuple[float, float]:
    """Spectral energy density as (total form, two-direction sum), in 1/um."""
    obs = field_observables(stack, E, x, rtol)
    return obs.energy_density, obs.energy_density_directional


def directional_weight_margin(si: SourceIntegrals) -> np.ndarray:
    """Smallest (rho_NL - |rho_IF|) / rho_NL over source points, per field point.

    For x' < x both kernels share the factor eps_i |psi_L(x')|^2 (psi_R for
    x' > x), so the ratio is constant on each side of ``x``. A non-negative
    margin means rho_NL +/- rho_IF >= 0 for every source point.
    """
    nl_l = si.electric_left + si.magnetic_left
    nl_r = si.electric_right + si.magnetic_right
    with np.errstate(invalid="ignore", divide="ignore"):
        left = np.where(nl_l > 0, (nl_l - np.abs(si.interference_left)) / nl_l, 0.0)
        right = np.where(nl_r > 0, (nl_r - np.abs(si.interference_right)) / nl_r, 0.0)
    return np.minimum(left, right)

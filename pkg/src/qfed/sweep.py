"""Grid sweeps over a scenario and the long-format result table.

Work is split by photon energy: one task evaluates every field point at one
energy, so the arithmetic done for a given (x, E) never depends on the
number of worker threads and the output is byte-identical across runs.
"""
from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dos import RAW_PER_REDUCED
from .observables import FieldObservables, observables_at
from .quadrature import QuadratureNotConverged
from .scenario import Scenario
from .stack import K_B

CSV_HEADER = "x_um,E_eV,quantity,value,error_estimate"


def _t_eff_error(E, n, t, n_err):
    # dT/dn = T / (n (n + 1) log(1 + 1/n))
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.where(n > 0, t * t * K_B / (E * n * (n + 1)), 0.0)
    return np.abs(slope) * n_err


def _columns(output: str, obs: FieldObservables) -> list[tuple[str, np.ndarray, np.ndarray]]:
    """(quantity name, values, error estimates) produced by one requested output."""
    err = obs.errors
    if output == "ldos":
        return [("ldos", obs.ldos / RAW_PER_REDUCED, err["ldos"] / RAW_PER_REDUCED)]
    if output == "ldos_raw":
        return [("ldos_raw", obs.ldos, err["ldos"])]
    if output == "ldos_em_split":
        e = err["ldos"] / RAW_PER_REDUCED
        return [("ldos_electric", obs.ldos_electric / RAW_PER_REDUCED, e),
                ("ldos_magnetic", obs.ldos_magnetic / RAW_PER_REDUCED, e)]
    if output in ("n_total", "n_plus", "n_minus", "poynting", "energy_density"):
        return [(output, getattr(obs, output), err[output])]
    if output.startswith("t_eff_"):
        which = output[len("t_eff_"):]
        key = "n_total" if which == "total" else f"n_{which}"
        t = getattr(obs, output)
        n = np.maximum(getattr(obs, key), 0.0)
        return [(output, t, _t_eff_error(obs.energy, n, t, err[key]))]
    if output == "commutator_norm":
        return [("commutator_minus", obs.commutator_minus, err["commutator"]),
                ("commutator_plus", obs.commutator_plus, err["commutator"])]
    raise ValueError(f"unknown output {output!r}")


@dataclass(frozen=True)
class ResultTable:
    """Long-format rows ordered by x, then E, then quantity name."""

    x: np.ndarray
    energy: np.ndarray
    quantity: tuple[str, ...]
    value: np.ndarray
    error: np.ndarray

    def __len__(self) -> int:
        return len(self.quantity)

    def select(self, quantity: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(x, E, value) arrays of the rows holding ``quantity``."""
        mask = np.array([q == quantity for q in self.quantity], dtype=bool)
        return self.x[mask], self.energy[mask], self.value[mask]

    def grid(self, quantity: str) -> np.ndarray:
        """Values of ``quantity`` reshaped to (n_x, n_E)."""
        x, e, v = self.select(quantity)
        nx = len(np.unique(x))
        return v.reshape(nx, -1)

    def write_csv(self, stream) -> None:
        stream.write(CSV_HEADER + "\n")
        for x, e, q, v, err in zip(self.x.tolist(), self.energy.tolist(), self.quantity,
                                   self.value.tolist(), self.error.tolist()):
            stream.write(f"{x!r},{e!r},{q},{v!r},{err!r}\n")

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


class SweepConvergenceError(ArithmeticError):
    """Quadrature failed at a grid point; carries the offending (x, E)."""

    def __init__(self, x, energy, detail):
        self.x = x
        self.energy = energy
        # whole-layer integrals are shared by every field point
        where = f"E = {energy!r} eV, " + (f"x = {x!r} um" if x is not None else "all x")
        super().__init__(f"quadrature did not converge at {where}: {detail}")


def run_sweep(scenario: Scenario, *, threads: int | None = None,
              tolerance: float | None = None) -> ResultTable:
    """Evaluate every requested output on the scenario grid."""
    threads = scenario.threads if threads is None else threads
    rtol = scenario.tolerance if tolerance is None else tolerance
    if threads < 1:
        raise ValueError("threads must be >= 1")
    xs = scenario.positions.points()
    energies = scenario.energies.points()
    stack = scenario.stack

    def task(E):
        try:
            return observables_at(stack, float(E), xs, rtol)
        except QuadratureNotConverged as exc:
            raise SweepConvergenceError(exc.x, float(E), str(exc)) from exc

    if threads == 1:
        per_energy = [task(E) for E in energies]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_energy = list(pool.map(task, energies))

    # columns[name] -> (values, errors), each shaped (n_E, n_x)
    columns: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for output in scenario.outputs:
        parts = [_columns(output, obs) for obs in per_energy]
        for i, (name, _, _) in enumerate(parts[0]):
            vals = np.array([p[i][1] for p in parts])
            errs = np.array([p[i][2] for p in parts])
            columns[name] = (vals, errs)
    names = sorted(columns)
    nx, ne, nq = len(xs), len(energies), len(names)
    # (n_x, n_E, n_q) layout flattens to x-major, then E, then quantity
    values = np.stack([columns[n][0].T for n in names], axis=-1)
    errors = np.stack([columns[n][1].T for n in names], axis=-1)
    return ResultTable(
        x=np.repeat(xs, ne * nq),
        energy=np.tile(np.repeat(energies, nq), nx),
        quantity=tuple(names) * (nx * ne),
        value=values.reshape(-1),
        error=errors.reshape(-1),
    )

"""Command-line interface: ``qfed run``, ``qfed calibrate``, ``qfed units``, ``qfed echo``.

Exit codes: 0 success, 2 invalid scenario or arguments, 3 quadrature
convergence failure, 4 I/O error.
"""
from __future__ import annotations

import math
import sys

import click

from . import __version__
from .calibrate import CRITERIA, NoResonanceFound, calibrate_thickness
from .dos import RAW_PER_REDUCED, LosslessOuterLayer
from .quadrature import BACKEND
from .scenario import ScenarioError, load_scenario
from .stack import C_LIGHT, HBAR_C, K_B, QUANTIZATION_AREA, StackError
from .sweep import SweepConvergenceError, run_sweep

EXIT_VALIDATION = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4


def _fail(message: str, code: int):
    click.echo(f"qfed: error: {message}", err=True)
    sys.exit(code)


def _load(path: str):
    try:
        return load_scenario(path)
    except OSError as exc:
        _fail(f"cannot read scenario: {exc}", EXIT_IO)
    except (ScenarioError, StackError) as exc:
        _fail(str(exc), EXIT_VALIDATION)


@click.group()
@click.version_option(__version__, prog_name="qfed")
def main():
    """Photon numbers, LDOS and energy flow in 1D lossy layered media."""


@main.command()
@click.argument("scenario", type=click.Path(dir_okay=False))
@click.option("--out", "out", type=click.Path(dir_okay=False), default=None,
              help="Write the CSV here instead of standard output.")
@click.option("--threads", type=click.IntRange(min=1), default=None,
              help="Worker threads (overrides numerics.threads).")
@click.option("--tol", type=click.FloatRange(min=0, max=1, min_open=True, max_open=True),
              default=None, help="Relative quadrature tolerance (overrides numerics.tolerance).")
def run(scenario, out, threads, tol):
    """Evaluate a scenario and emit long-format CSV."""
    sc = _load(scenario)
    try:
        table = run_sweep(sc, threads=threads, tolerance=tol)
    except SweepConvergenceError as exc:
        _fail(str(exc), EXIT_CONVERGENCE)
    except LosslessOuterLayer as exc:
        _fail(str(exc), EXIT_VALIDATION)
    if out is None:
        table.write_csv(sys.stdout)
        return
    try:
        with open(out, "w", newline="") as fh:
            table.write_csv(fh)
    except OSError as exc:
        _fail(f"cannot write output: {exc}", EXIT_IO)


@main.command()
@click.argument("scenario", type=click.Path(dir_okay=False))
@click.option("--target-ev", type=click.FloatRange(min=0, min_open=True), required=True,
              help="Energy (eV) of the first resonance.")
@click.option("--criterion", type=click.Choice(CRITERIA), default="resonance", show_default=True)
@click.option("--scan-min", type=float, default=None, help="Lower end of the energy scan (eV).")
@click.option("--scan-max", type=float, default=None, help="Upper end of the energy scan (eV).")
def calibrate(scenario, target_ev, criterion, scan_min, scan_max):
    """Find the cavity thickness that puts the first resonance at --target-ev.

    The scan window defaults to the scenario energy grid when it spans more
    than one point, otherwise to [target/2, 4 target].
    """
    sc = _load(scenario)
    energies = sc.energies.points()
    if len(energies) > 1:
        lo, hi = float(energies[0]), float(energies[-1])
    else:
        lo, hi = 0.5 * target_ev, 4.0 * target_ev
    lo = lo if scan_min is None else scan_min
    hi = hi if scan_max is None else scan_max
    try:
        res = calibrate_thickness(sc.stack, target_ev, criterion=criterion, scan=(lo, hi))
    except ValueError as exc:
        _fail(str(exc), EXIT_VALIDATION)
    except NoResonanceFound as exc:
        _fail(str(exc), EXIT_CONVERGENCE)
    click.echo(f"criterion: {res.criterion}")
    click.echo(f"scan_eV: [{lo!r}, {hi!r}]")
    click.echo(f"thickness_um: {res.thickness:.10g}")
    for i, e in enumerate(res.maxima[:3], start=1):
        click.echo(f"maximum_{i}_eV: {e:.6f}  (lambda = {2 * math.pi * HBAR_C / e:.4g} um)")


@main.command()
def units():
    """Print constants and unit conventions."""
    lines = [
        f"qfed {__version__} (quadrature backend: {BACKEND})",
        f"hbar*c      = {HBAR_C!r} eV um",
        f"k_B         = {K_B!r} eV/K",
        f"c           = {C_LIGHT!r} m/s",
        f"S           = {QUANTIZATION_AREA!r} (quantization area; cancels in photon numbers)",
        "energy: eV   length: um   temperature: K",
        f"ldos: units of 2/(pi c S); ldos_raw: 1/(eV um) = ldos * {RAW_PER_REDUCED!r}",
        "poynting: eV/s per eV of bandwidth (1/s), per unit S",
        "energy_density: eV/um per eV of bandwidth (1/um), per unit S",
        "photon numbers and commutator norms: dimensionless; t_eff: K",
    ]
    click.echo("\n".join(lines))


@main.command()
@click.argument("scenario", type=click.Path(dir_okay=False))
def echo(scenario):
    """Print the validated scenario in canonical form."""
    click.echo(_load(scenario).to_yaml(), nl=False)


if __name__ == "__main__":  # pragma: no cover
    main()

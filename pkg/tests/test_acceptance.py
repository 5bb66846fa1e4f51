"""Acceptance criteria 1-12, each at its stated tolerance.

Every check prints one ``criterion N: PASS|FAIL`` line (collected into the
pytest terminal summary). Run directly with ``python tests/test_acceptance.py``
for the lines alone.
"""
import cmath
import functools
import math
import time

import numpy as np
import pytest

from qfed.calibrate import calibrate_thickness, find_maxima, indicator
from qfed.dos import RAW_PER_REDUCED, ldos_closed_form, source_integrals
from qfed.greens import greens, solve_outgoing
from qfed.lossless import CavityInputs, cavity_coefficients, lossless_photon_numbers, \
    lossless_photon_numbers_array
from qfed.observables import C_UM_PER_S, observables_at, photon_number_directional
from qfed.scenario import bundled_scenario_path, load_scenario
from qfed.stack import Layer, LayerStack, bose_einstein, free_space_wavenumber
from qfed.sweep import run_sweep

import conftest
from conftest import CAVITY_D, cavity_stack, uniform_stack


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


@functools.lru_cache(maxsize=None)
def fig3_maps():
    sc = load_scenario(bundled_scenario_path("fig3"))
    xs = sc.positions.points()
    out = []
    for E in sc.energies.points():
        si = source_integrals(sc.stack, float(E), xs, sc.tolerance)
        out.append((si, observables_at(sc.stack, float(E), xs, sc.tolerance)))
    return sc, out


def random_points(n=100, seed=2024):
    rng = np.random.default_rng(seed)
    return rng.uniform(-30.0, 40.0, n), rng.uniform(0.01, 0.5, n)


def check_1():
    quoted = {300: (0.20, 0.005), 200: (0.074, 0.0005), 100: (0.0048, 0.00005)}
    three_figure = {300: 0.203, 200: 0.0745, 100: 0.00483}
    vals = {T: bose_einstein(0.046, T) for T in quoted}
    ok = all(abs(vals[T] - q) <= half for T, (q, half) in quoted.items())
    ok &= all(float(f"{vals[T]:.3g}") == v for T, v in three_figure.items())
    detail = ", ".join(f"{T} K -> {vals[T]:.6g}" for T in quoted)
    return ok, detail


def check_2():
    xs, es = random_points()
    worst = 0.0
    for x, E in zip(xs, es):
        si = source_integrals(cavity_stack(), float(E), [x])
        rho, rif = si.nl_integral()[0], si.if_integral()[0]
        for sign in (1, -1):
            worst = max(worst, abs((rho + sign * rif) / rho - 1.0))
    return worst <= 1e-6, f"max |[a,a+]_norm - 1| = {worst:.2e} over 100 points (tol 1e-6)"


def check_3():
    xs, es = random_points()
    worst = 0.0
    for x, E in zip(xs, es):
        si = source_integrals(cavity_stack(), float(E), [x])
        worst = max(worst, abs(si.if_integral()[0]) / si.nl_integral()[0])
    return worst <= 1e-6, f"max |int rho_IF| / rho = {worst:.2e} (tol 1e-6)"


def check_4():
    energies = np.geomspace(0.01, 1.0, 25)
    xs = np.array([-3.0, 0.0, 2.5])
    worst = 0.0
    for n in (1.0, 1.2 + 0.2j, 2.5 + 0.4j):
        s = uniform_stack(n)
        target = complex(n).real / 2
        for E in energies:
            # lossless medium: closed form in the n_i -> 0+ limit; lossy: source integrals too
            vals = [ldos_closed_form(s, float(E), x).total / RAW_PER_REDUCED for x in xs]
            if complex(n).imag > 0:
                vals += list(source_integrals(s, float(E), xs).nl_integral())
            worst = max(worst, max(abs(v / target - 1) for v in vals))
    return worst <= 1e-8, f"max relative deviation from n_r/2 = {worst:.2e} (tol 1e-8)"


def check_5():
    _, maps = fig3_maps()
    worst = worst_full = 0.0
    for si, o in maps:
        worst = max(worst, np.max(np.abs(o.n_total - 0.5 * (o.n_plus + o.n_minus)) / o.n_total))
        # independently normalized directional numbers, each by its own commutator
        eta = np.array([bose_einstein(si.energy, T) for T in (300, 200, 100)])
        nl_eta, if_eta = si.nl_integral(eta), si.if_integral(eta)
        rho, rif = si.nl_integral(), si.if_integral()
        n_p = (nl_eta + if_eta) / (rho + rif)
        n_m = (nl_eta - if_eta) / (rho - rif)
        worst_full = max(worst_full, np.max(np.abs(o.n_total - 0.5 * (n_p + n_m)) / o.n_total))
    ok = worst <= 1e-9 and worst_full <= 1e-9
    return ok, (f"400x200 grid: relative gap {worst:.2e}; with per-direction normalization "
                f"{worst_full:.2e} (tol 1e-9)")


def check_6():
    sc = load_scenario(bundled_scenario_path("fig3"))
    xs = sc.positions.points()
    worst_n = worst_s = 0.0
    for T in (300.0, 55.0):
        stack = sc.stack.with_temperatures([T, T, T])
        for E in sc.energies.points():
            o = observables_at(stack, float(E), xs, sc.tolerance)
            be = bose_einstein(float(E), T)
            for n in (o.n_total, o.n_plus, o.n_minus):
                worst_n = max(worst_n, np.max(np.abs(n - be)) / be)
            v = np.array([C_UM_PER_S / stack.layer_at(x).refractive_index.real for x in xs])
            scale = E * v * o.ldos * (be + 0.5)
            worst_s = max(worst_s, np.max(np.abs(o.poynting) / scale))
    ok = worst_n <= 1e-12 and worst_s <= 1e-12
    return ok, f"max |n - n_BE|/n_BE = {worst_n:.1e}; max |S| / (E v rho (n+1/2)) = {worst_s:.1e}"


def check_7():
    s = cavity_stack()
    E = 0.046
    k0 = free_space_wavenumber(E)
    l1 = 1 / (2 * k0 * 0.4)
    l3 = 1 / (2 * k0 * 0.5)
    right = [photon_number_directional(s, E, CAVITY_D + m * l3, +1) for m in (5, 8, 12)]
    left = [photon_number_directional(s, E, -m * l1, sg) for m in (5, 8, 12) for sg in (1, -1)]
    dev_r = max(abs(v - 0.00483) for v in right)
    dev_l = max(abs(v - 0.203) for v in left)
    ok = dev_r <= 1e-3 and dev_l <= 1e-3
    return ok, (f"n+ at 5 decay lengths into layer 3 = {right[0]:.5f} (max dev {dev_r:.1e}); "
                f"n+/- at 5 decay lengths into layer 1 = {left[0]:.4f}/{left[1]:.4f} (max dev {dev_l:.1e})")


def check_8():
    t0 = time.perf_counter()
    res = calibrate_thickness(cavity_stack(d=10.0), 0.046, scan=(0.02, 0.16))
    elapsed = time.perf_counter() - t0
    e2, e3 = res.maxima[1], res.maxima[2]
    ok = abs(res.first - 0.046) < 1e-6 and abs(e2 - 0.097) <= 0.002 and abs(e3 - 0.150) <= 0.002
    ok &= elapsed < 300
    # the LDOS-based indicators are reported for comparison, not asserted
    avg = find_maxima(indicator(cavity_stack(d=res.thickness), "ldos-average"), 0.02, 0.16, 140)
    return ok, (f"d2 = {res.thickness:.5f} um, resonances {res.first:.4f}/{e2:.4f}/{e3:.4f} eV "
                f"in {elapsed:.1f} s; cavity-averaged LDOS peaks at this d2: "
                + "/".join(f"{p:.4f}" for p in avg[:3]))


def check_9():
    d, loss = 10.0, 1e-6
    stack = LayerStack((Layer(2.5 + loss * 1j, None, 300), Layer(1.2 + loss * 1j, d, 200),
                        Layer(1.5 + loss * 1j, None, 100)))
    worst_bridge = 0.0
    for E in (0.03, 0.046, 0.07, 0.097, 0.15):
        ref = lossless_photon_numbers(cavity_coefficients(2.5, 1.2, 1.5, d, E),
                                      CavityInputs(bose_einstein(E, 300), bose_einstein(E, 100)))
        got = (photon_number_directional(stack, E, -d / 2, -1),
               photon_number_directional(stack, E, d / 2, +1),
               photon_number_directional(stack, E, d / 2, -1),
               photon_number_directional(stack, E, 1.5 * d, +1))
        want = (ref.n1_minus, ref.n2_plus, ref.n2_minus, ref.n3_plus)
        worst_bridge = max(worst_bridge, max(abs(g - w) for g, w in zip(got, want)))
    rng = np.random.default_rng(9)
    m = 10_000
    n1, n2, n3 = (rng.uniform(1.0, 4.0, m) for _ in range(3))
    dd, E = rng.uniform(0.1, 50.0, m), rng.uniform(0.005, 0.5, m)
    a, b = rng.uniform(0, 5, m), rng.uniform(0, 5, m)
    outs = lossless_photon_numbers_array(n1, n2, n3, dd, E, a, b)
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    tol = 1e-9 * np.maximum(hi, 1.0)
    bounded = all(np.all((o >= lo - tol) & (o <= hi + tol)) for o in outs)
    eq = lossless_photon_numbers_array(n1, n2, n3, dd, E, a, a)
    eq_dev = max(np.max(np.abs(o - a) / np.maximum(a, 1e-300)) for o in eq)
    ok = worst_bridge <= 1e-3 and bounded and eq_dev <= 1e-10
    return ok, (f"small-loss bridge max |diff| = {worst_bridge:.1e} (tol 1e-3); "
                f"10^4 configs bounded: {bounded}; equilibrium rel dev {eq_dev:.1e}")


def check_10():
    _, maps = fig3_maps()
    worst = max(np.max(np.abs(o.poynting - o.poynting_directional) / np.abs(o.poynting))
                for _, o in maps)
    return worst <= 1e-9, f"max relative gap over 400x200 grid = {worst:.2e} (tol 1e-9)"


def check_11():
    stack = cavity_stack()
    rng = np.random.default_rng(11)
    recip = max(abs(greens(stack, E, x, y).G / greens(stack, E, y, x).G - 1)
                for x, y, E in zip(rng.uniform(-15, 25, 50), rng.uniform(-15, 25, 50),
                                   rng.uniform(0.01, 0.5, 50)))
    sol = solve_outgoing(stack, 0.1)
    cont = 0.0
    for i, z in enumerate(stack.interfaces):
        for mode in (sol.left, sol.right):
            cont = max(cont, abs(mode.value(i, z) / mode.value(i + 1, z) - 1),
                       abs(mode.derivative(i, z) / mode.derivative(i + 1, z) - 1))
    jump = max(abs(greens(stack, 0.07, xs + 1e-9, xs).dG_dx - greens(stack, 0.07, xs - 1e-9, xs).dG_dx + 1)
               for xs in (-2.0, 0.0, 4.0, CAVITY_D, 14.0))
    orders = []
    for x0 in (-4.0, 1.0, 6.5, 13.0):
        k2 = (free_space_wavenumber(0.15) * stack.layer_at(x0).refractive_index) ** 2
        res = []
        for h in (0.2, 0.1, 0.05, 0.025):
            g = [greens(stack, 0.15, x0 + s * h, 2.0).G for s in (-1, 0, 1)]
            res.append(abs((g[0] - 2 * g[1] + g[2]) / h ** 2 + k2 * g[1]))
        orders += [math.log2(a / b) for a, b in zip(res, res[1:])]
    n = 1.5 + 1.0j
    d = 200.0 / (free_space_wavenumber(0.046) * n.imag)
    thick = LayerStack((Layer(1.2 + 0.1j, None), Layer(n, d), Layer(1.4 + 0.2j, None)))
    g = greens(thick, 0.046, d + 1.0, -1.0)
    deep = greens(thick, 0.046, d / 2, d / 2).G
    k = free_space_wavenumber(0.046) * n
    overflow_ok = (cmath.isfinite(g.G) and cmath.isfinite(g.dG_dx)
                   and abs(deep / (1j / (2 * k)) - 1) < 1e-12
                   and solve_outgoing(thick, 0.046).wronskian_spread < 1e-10)
    ok = recip < 1e-11 and cont < 1e-12 and jump < 1e-7 and min(orders) >= 1.9 and overflow_ok
    return ok, (f"reciprocity {recip:.1e}, continuity {cont:.1e}, jump error {jump:.1e}, "
                f"FD order >= {min(orders):.3f}, Im(k)d = 200 finite: {overflow_ok}")


def check_12():
    results = {}
    for name in ("fig2", "fig3"):
        sc = load_scenario(bundled_scenario_path(name))
        outs = {t: run_sweep(sc, threads=t).to_csv().encode() for t in (1, 4, 8)}
        results[name] = len({*outs.values()}) == 1
    ok = all(results.values())
    return ok, ", ".join(f"{k}: {'identical' if v else 'DIFFERENT'} across threads 1/4/8"
                         for k, v in results.items())


CHECKS = {i: globals()[f"check_{i}"] for i in range(1, 13)}


@pytest.mark.parametrize("n", sorted(CHECKS))
def test_criterion(n):
    ok, detail = CHECKS[n]()
    assert report(n, ok, detail), detail


if __name__ == "__main__":
    for n in sorted(CHECKS):
        report(n, *CHECKS[n]())

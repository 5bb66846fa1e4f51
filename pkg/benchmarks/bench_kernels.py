"""Compiled vs pure-Python quadrature kernels.

Times the batch intensity integral on its own and a full observables sweep
over the bundled fig3 grid (or a coarser one with --coarse).

    python benchmarks/bench_kernels.py [--repeat 3] [--coarse]
"""
import argparse
import time

import numpy as np

from qfed import _quadrature_py, dos, quadrature
from qfed.observables import observables_at
from qfed.scenario import bundled_scenario_path, load_scenario

try:
    from qfed import _kernels
except ImportError:  # pragma: no cover
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_case(backend, n=2000):
    rng = np.random.default_rng(0)
    a = np.zeros(n)
    b = rng.uniform(0.1, 10.0, n)
    args = (0.4 + 0.1j, 10.0, 1.2 - 0.3j, 0.0, 0.28 + 0.047j)
    return lambda: quadrature.integrate_intensity_batch(*args, a, b, backend=backend), n


def sweep_case(backend, coarse):
    sc = load_scenario(bundled_scenario_path("fig3"))
    xs = sc.positions.points()
    energies = sc.energies.points()
    if coarse:
        xs, energies = xs[::4], energies[::4]

    def run():
        quadrature._backend = backend
        dos._layer_integrals.cache_clear()
        for E in energies:
            observables_at(sc.stack, float(E), xs, sc.tolerance)
    return run, len(xs) * len(energies)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--coarse", action="store_true", help="use every 4th grid point")
    args = parser.parse_args()
    backends = {"python": _quadrature_py}
    if _kernels is not None:
        backends["compiled"] = _kernels
    original = quadrature._backend
    rows = []
    try:
        for name, impl in backends.items():
            fn, n = kernel_case(impl)
            rows.append(("batch kernel", name, n, best_of(fn, args.repeat)))
            fn, n = sweep_case(impl, args.coarse)
            rows.append(("fig3 sweep", name, n, best_of(fn, args.repeat)))
    finally:
        quadrature._backend = original
        dos._layer_integrals.cache_clear()
    print(f"{'case':<14}{'backend':<10}{'points':>8}{'total s':>10}{'us/point':>10}")
    for case, name, n, t in rows:
        print(f"{case:<14}{name:<10}{n:>8}{t:>10.3f}{1e6 * t / n:>10.2f}")
    for case in ("batch kernel", "fig3 sweep"):
        t = {r[1]: r[3] for r in rows if r[0] == case}
        if "compiled" in t:
            print(f"{case}: compiled is {t['python'] / t['compiled']:.1f}x faster")


if __name__ == "__main__":
    main()

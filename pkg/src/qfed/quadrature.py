"""Integrals of |psi(x)|^2 for a single plane-wave pair psi = P e^{-ik(x-zP)} + Q e^{ik(x-zQ)}.

Finite intervals go through adaptive Gauss-Kronrod quadrature; the compiled
kernel is used when it imports, the pure-Python twin otherwise (or when the
environment variable ``QFED_PURE_PYTHON`` is set). ``exact_intensity_integral``
is the closed form, used for the semi-infinite tails and as a test oracle.
"""
from __future__ import annotations

import cmath
import math
import os

import numpy as np

from . import _quadrature_py

DEFAULT_RTOL = 1e-8
DEFAULT_LIMIT = 200

if os.environ.get("QFED_PURE_PYTHON"):
    _backend = _quadrature_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _backend
        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        _backend = _quadrature_py
        BACKEND = "python"


class QuadratureNotConverged(ArithmeticError):
    """The requested tolerance was not met within the subdivision limit.

    ``x`` and ``energy`` are filled in by callers that know the field point.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
        self.x = None
        self.energy = None


def interval_budget(k, length) -> int:
    """Default subdivision limit: a base budget plus a few intervals per cross-term period."""
    periods = abs(complex(k).real) * float(length) / math.pi
    return DEFAULT_LIMIT + 4 * math.ceil(periods)


def integrate_intensity(p, zp, q, zq, k, a, b, *, rtol=DEFAULT_RTOL, atol=0.0,
                        limit=None, backend=None):
    """Adaptive integral of the mode intensity over the finite interval [a, b].

    ``limit`` caps the number of subintervals; by default it grows with the
    number of oscillation periods in [a, b]. Returns ``(value, error_estimate)``.
    """
    impl = _backend if backend is None else backend
    if limit is None:
        limit = interval_budget(k, b - a)
    val, err, ok = impl.integrate_intensity(complex(p), float(zp), complex(q), float(zq),
                                            complex(k), float(a), float(b),
                                            float(rtol), float(atol), int(limit))
    if not ok:
        raise QuadratureNotConverged(
            f"intensity integral on [{a}, {b}] stalled at error {err:.3e} after {limit} intervals")
    return val, err


def integrate_intensity_batch(p, zp, q, zq, k, a, b, *, rtol=DEFAULT_RTOL, atol=0.0,
                              limit=None, backend=None):
    """:func:`integrate_intensity` over arrays of interval endpoints."""
    impl = _backend if backend is None else backend
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    if limit is None:
        limit = interval_budget(k, float(np.max(b - a, initial=0.0)))
    vals, errs, failed = impl.integrate_intensity_batch(
        complex(p), float(zp), complex(q), float(zq), complex(k), a, b,
        float(rtol), float(atol), int(limit))
    if failed >= 0:
        raise QuadratureNotConverged(
            f"intensity integral on [{a[failed]}, {b[failed]}] stalled after {limit} intervals",
            index=int(failed))
    return vals, errs


def _exp_integral(rate, a, b, ref):
    """Integral of exp(rate (x - ref)) over [a, b]; ``rate`` real, bounds may be infinite."""
    if rate == 0:
        if math.isinf(a) or math.isinf(b):
            raise ValueError("non-decaying term on an infinite interval")
        return b - a
    if math.isinf(b):
        if rate > 0:
            raise ValueError("growing term on an interval extending to +inf")
        return -math.exp(rate * (a - ref)) / rate
    if math.isinf(a):
        if rate < 0:
            raise ValueError("growing term on an interval extending to -inf")
        return math.exp(rate * (b - ref)) / rate
    return math.exp(rate * (a - ref)) * math.expm1(rate * (b - a)) / rate


def exact_intensity_integral(p, zp, q, zq, k, a, b):
    """Closed-form integral of |P e^{-ik(x-zP)} + Q e^{ik(x-zQ)}|^2 over [a, b].

    Either bound may be infinite provided the term that would diverge has
    zero amplitude.
    """
    if b <= a:
        return 0.0
    p, q, k = complex(p), complex(q), complex(k)
    kr, ki = k.real, k.imag
    total = 0.0
    if p != 0:
        total += abs(p) ** 2 * _exp_integral(2 * ki, a, b, zp)
    if q != 0:
        total += abs(q) ** 2 * _exp_integral(-2 * ki, a, b, zq)
    if p != 0 and q != 0:
        if math.isinf(a) or math.isinf(b):
            raise ValueError("two-wave intensity is not integrable on an infinite interval")
        # cross term 2 Re[P conj(Q) e^{-ik(x-zP)} e^{-i conj(k)(x-zQ)}], phase e^{-2i kr x}
        fa = p * q.conjugate() * cmath.exp(-1j * k * (a - zp) - 1j * k.conjugate() * (a - zq))
        length = b - a
        total += 2 * (fa * math.sin(kr * length) * cmath.exp(-1j * kr * length) / kr).real
    return total

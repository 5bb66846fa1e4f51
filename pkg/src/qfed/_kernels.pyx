# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled adaptive Gauss-Kronrod (7/15) integration of mode intensities."""

from libc.math cimport fabs, exp, cos, sin
from libc.stdlib cimport malloc, free

cdef double XGK[8]
cdef double WGK[8]
cdef double WG[4]

XGK[:] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
]
WGK[:] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
]
WG[:] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
]


cdef struct Mode:
    double pr, pi_, zp, qr, qi, zq, kr, ki


cdef inline double intensity(const Mode* m, double x) nogil:
    # p exp(-ik(x - zp)) with k = kr + i ki: modulus exp(ki (x - zp)), phase -kr (x - zp)
    cdef double u = x - m.zp
    cdef double ea = exp(m.ki * u)
    cdef double ca = cos(-m.kr * u) * ea
    cdef double sa = sin(-m.kr * u) * ea
    cdef double v = x - m.zq
    cdef double eb = exp(-m.ki * v)
    cdef double cb = cos(m.kr * v) * eb
    cdef double sb = sin(m.kr * v) * eb
    cdef double re = m.pr * ca - m.pi_ * sa + m.qr * cb - m.qi * sb
    cdef double im = m.pr * sa + m.pi_ * ca + m.qr * sb + m.qi * cb
    return re * re + im * im


cdef void gk15(const Mode* m, double a, double b, double* result, double* error) nogil:
    cdef double c = 0.5 * (a + b)
    cdef double h = 0.5 * (b - a)
    cdef double fc = intensity(m, c)
    cdef double resk = fc * WGK[7]
    cdef double resg = fc * WG[3]
    cdef double dx, f1, f2
    cdef int j
    for j in range(7):
        dx = h * XGK[j]
        f1 = intensity(m, c - dx)
        f2 = intensity(m, c + dx)
        resk += WGK[j] * (f1 + f2)
        if j % 2 == 1:
            resg += WG[j // 2] * (f1 + f2)
    result[0] = resk * h
    error[0] = fabs((resk - resg) * h)


cdef int adaptive(const Mode* m, double a, double b, double rtol, double atol, int limit,
                  double* lo, double* hi, double* val, double* err,
                  double* total_out, double* err_out) nogil:
    cdef int n = 1
    cdef int i, worst
    cdef double total, errsum, mid, tol
    lo[0] = a
    hi[0] = b
    gk15(m, a, b, &val[0], &err[0])
    total = val[0]
    errsum = err[0]
    while True:
        tol = rtol * fabs(total)
        if atol > tol:
            tol = atol
        if errsum <= tol:
            total_out[0] = total
            err_out[0] = errsum
            return 1
        if n >= limit:
            total_out[0] = total
            err_out[0] = errsum
            return 0
        worst = 0
        for i in range(1, n):
            if err[i] > err[worst]:
                worst = i
        mid = 0.5 * (lo[worst] + hi[worst])
        lo[n] = mid
        hi[n] = hi[worst]
        hi[worst] = mid
        gk15(m, lo[worst], hi[worst], &val[worst], &err[worst])
        gk15(m, lo[n], hi[n], &val[n], &err[n])
        n += 1
        total = 0.0
        errsum = 0.0
        for i in range(n):
            total += val[i]
            errsum += err[i]


def integrate_intensity(p, double zp, q, double zq, k, double a, double b,
                        double rtol, double atol, int limit):
    """Integrate |p e^{-ik(x-zp)} + q e^{ik(x-zq)}|^2 over the finite interval [a, b].

    Returns ``(value, error_estimate, converged)``.
    """
    if b <= a:
        return 0.0, 0.0, True
    cdef complex pc = p
    cdef complex qc = q
    cdef complex kc = k
    cdef Mode m
    m.pr = pc.real
    m.pi_ = pc.imag
    m.zp = zp
    m.qr = qc.real
    m.qi = qc.imag
    m.zq = zq
    m.kr = kc.real
    m.ki = kc.imag
    if limit < 1:
        limit = 1
    cdef double* buf = <double*> malloc(4 * limit * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double total = 0.0
    cdef double errsum = 0.0
    cdef int ok
    try:
        with nogil:
            ok = adaptive(&m, a, b, rtol, atol, limit, buf, buf + limit,
                          buf + 2 * limit, buf + 3 * limit, &total, &errsum)
    finally:
        free(buf)
    return total, errsum, bool(ok)


def integrate_intensity_batch(p, double zp, q, double zq, k, double[::1] a, double[::1] b,
                              double rtol, double atol, int limit):
    """Vectorized :func:`integrate_intensity` over interval arrays ``a``, ``b``.

    Returns ``(values, errors, first_failure)``; ``first_failure`` is -1 when
    every interval converged.
    """
    import numpy as np
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i
    values = np.zeros(n)
    errors = np.zeros(n)
    cdef double[::1] vv = values
    cdef double[::1] ev = errors
    cdef complex pc = p
    cdef complex qc = q
    cdef complex kc = k
    cdef Mode m
    m.pr = pc.real
    m.pi_ = pc.imag
    m.zp = zp
    m.qr = qc.real
    m.qi = qc.imag
    m.zq = zq
    m.kr = kc.real
    m.ki = kc.imag
    if limit < 1:
        limit = 1
    cdef double* buf = <double*> malloc(4 * limit * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t failed = -1
    try:
        with nogil:
            for i in range(n):
                if b[i] <= a[i]:
                    continue
                if not adaptive(&m, a[i], b[i], rtol, atol, limit, buf, buf + limit,
                                buf + 2 * limit, buf + 3 * limit, &vv[i], &ev[i]):
                    if failed < 0:
                        failed = i
    finally:
        free(buf)
    return values, errors, failed

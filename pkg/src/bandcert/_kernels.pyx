# cython: language_level=3
"""Compiled kernels: Bessel evaluation, zero refinement, spectral function.

Same algorithms as ``_pykernels``; results agree to rounding.
"""
from libc.math cimport fabs, sqrt

cdef double SERIES_LIMIT = 8.0
cdef double _BIG = 1e250
cdef double _SMALL = 1e-250


cdef double _series(int n, double x) nogil:
    cdef double half = 0.5 * x
    cdef double term = 1.0
    cdef double total
    cdef double q = half * half
    cdef int m
    for m in range(1, n + 1):
        term *= half / m
    total = term
    m = 0
    while True:
        m += 1
        term *= -q / (m * (m + n))
        total += term
        # "<=" so an underflowed series (tiny x, n >= 1) also stops
        if m > half and fabs(term) <= 1e-17 * fabs(total):
            return total


cdef void _miller_pair(int n, double x, double* jn_out, double* jn1_out) nogil:
    cdef double mx = x if x > n else <double>n
    cdef int start = n + <int>x + <int>(3.0 * sqrt(40.0 * mx)) + 30
    cdef double bjp = 0.0
    cdef double bj = 1.0
    cdef double bjm
    cdef double total = 0.0
    cdef double jn = 0.0
    cdef double jn1 = 0.0
    cdef double two_over_x = 2.0 / x
    cdef int k, idx
    start += start % 2
    for k in range(start, 0, -1):
        bjm = k * two_over_x * bj - bjp
        bjp = bj
        bj = bjm
        if fabs(bj) > _BIG:
            bj *= _SMALL
            bjp *= _SMALL
            total *= _SMALL
            jn *= _SMALL
            jn1 *= _SMALL
        idx = k - 1
        if idx == n:
            jn = bj
        elif idx == n + 1:
            jn1 = bj
        if idx > 0 and idx % 2 == 0:
            total += bj
    bjm = 2.0 * total + bj
    jn_out[0] = jn / bjm
    jn1_out[0] = jn1 / bjm


cdef double _bessel_j(int n, double x) nogil:
    cdef double a, b
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x <= SERIES_LIMIT:
        return _series(n, x)
    _miller_pair(n, x, &a, &b)
    return a


cdef void _bessel_j_pair(int n, double x, double* a, double* b) nogil:
    if x == 0.0:
        a[0] = 1.0 if n == 0 else 0.0
        b[0] = 0.0
    elif x <= SERIES_LIMIT:
        a[0] = _series(n, x)
        b[0] = _series(n + 1, x)
    else:
        _miller_pair(n, x, a, b)


cpdef double bessel_j(int n, double x):
    if x < 0.0 or n < 0:
        raise ValueError("bessel_j requires n >= 0 and x >= 0")
    return _bessel_j(n, x)


cpdef tuple bessel_j_pair(int n, double x):
    cdef double a, b
    if x < 0.0 or n < 0:
        raise ValueError("bessel_j_pair requires n >= 0 and x >= 0")
    _bessel_j_pair(n, x, &a, &b)
    return a, b


cpdef double refine_zero(int n, double lo, double hi, double x0, double rtol):
    cdef double flo = _bessel_j(n, lo)
    cdef double fhi = _bessel_j(n, hi)
    cdef double x, f, f1, deriv, step, trial, polished
    cdef int it
    cdef bint converged = False
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ValueError(
            f"no sign change of J_{n} on [{lo!r}, {hi!r}]: f = ({flo!r}, {fhi!r})"
        )
    x = x0 if lo < x0 < hi else 0.5 * (lo + hi)
    for it in range(200):
        _bessel_j_pair(n, x, &f, &f1)
        if f == 0.0:
            return x
        if (f > 0.0) == (flo > 0.0):
            lo = x
        else:
            hi = x
        deriv = n / x * f - f1
        step = f / deriv if deriv != 0.0 else 0.0
        trial = x - step
        if deriv == 0.0 or not (lo < trial < hi):
            trial = 0.5 * (lo + hi)
            step = x - trial
        x = trial
        if fabs(step) <= rtol * fabs(x) or hi - lo <= rtol * fabs(x):
            converged = True
            break
    if not converged:
        raise RuntimeError(f"zero refinement for J_{n} did not converge near {x!r}")
    _bessel_j_pair(n, x, &f, &f1)
    deriv = n / x * f - f1
    if deriv != 0.0:
        polished = x - f / deriv
        if fabs(polished - x) <= 4.0 * rtol * fabs(x):
            x = polished
    return x


cdef const double[:] _as_view(obj):
    import numpy as np
    return np.ascontiguousarray(obj, dtype=np.float64)


cdef double _spectral_value(double nu, const double[:] weights, const double[:] poles,
                            double n_disks, double tail) nogil:
    cdef Py_ssize_t i
    cdef double total = 0.0
    for i in range(weights.shape[0]):
        total += weights[i] / (nu - poles[i])
    return n_disks * nu * (total - tail) - 1.0


def spectral_value(double nu, weights, poles, double n_disks, double tail):
    cdef const double[:] w = _as_view(weights)
    cdef const double[:] p = _as_view(poles)
    return _spectral_value(nu, w, p, n_disks, tail)


def spectral_bisect(double lo, double hi, weights, poles, double n_disks,
                    double tail, double rtol):
    cdef const double[:] w = _as_view(weights)
    cdef const double[:] p = _as_view(poles)
    cdef double slo = _spectral_value(lo, w, p, n_disks, tail)
    cdef double shi = _spectral_value(hi, w, p, n_disks, tail)
    cdef double mid
    if not (slo > 0.0 and shi < 0.0):
        raise ValueError(
            f"spectral function has no sign change on [{lo!r}, {hi!r}]: "
            f"S = ({slo!r}, {shi!r})"
        )
    with nogil:
        while hi - lo > rtol * lo:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _spectral_value(mid, w, p, n_disks, tail) > 0.0:
                lo = mid
            else:
                hi = mid
    return 0.5 * (lo + hi)


"""Pure-Python kernels; same contract as the compiled ``_kernels`` module."""
import math

import numpy as np

SERIES_LIMIT = 8.0
_BIG = 1e250
_SMALL = 1e-250


def _series(n, x):
    half = 0.5 * x
    term = 1.0
    for m in range(1, n + 1):
        term *= half / m
    total = term
    q = half * half
    m = 0
    while True:
        m += 1
        term *= -q / (m * (m + n))
        total += term
        # "<=" so an underflowed series (tiny x, n >= 1) also stops
        if m > half and abs(term) <= 1e-17 * abs(total):
            return total


def _miller_pair(n, x):
    # backward recurrence from an even start index, normalised by
    # J_0 + 2 * sum_k J_2k = 1
    start = n + int(x) + int(3.0 * math.sqrt(40.0 * max(x, n))) + 30
    start += start % 2
    bjp = 0.0
    bj = 1.0
    total = 0.0
    jn = 0.0
    jn1 = 0.0
    two_over_x = 2.0 / x
    for k in range(start, 0, -1):
        bjm = k * two_over_x * bj - bjp
        bjp = bj
        bj = bjm
        if abs(bj) > _BIG:
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
    norm = 2.0 * total + bj
    return jn / norm, jn1 / norm


def bessel_j(n, x):
    if x < 0.0 or n < 0:
        raise ValueError("bessel_j requires n >= 0 and x >= 0")
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x <= SERIES_LIMIT:
        return _series(n, x)
    return _miller_pair(n, x)[0]


def bessel_j_pair(n, x):
    """Return ``(J_n(x), J_{n+1}(x))`` from a single evaluation pass."""
    if x < 0.0 or n < 0:
        raise ValueError("bessel_j_pair requires n >= 0 and x >= 0")
    if x == 0.0:
        return (1.0 if n == 0 else 0.0), 0.0
    if x <= SERIES_LIMIT:
        return _series(n, x), _series(n + 1, x)
    return _miller_pair(n, x)


def refine_zero(n, lo, hi, x0, rtol):
    """Safeguarded Newton iteration for a zero of J_n inside ``(lo, hi)``."""
    flo = bessel_j(n, lo)
    fhi = bessel_j(n, hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ValueError(
            f"no sign change of J_{n} on [{lo!r}, {hi!r}]: f = ({flo!r}, {fhi!r})"
        )
    x = x0 if lo < x0 < hi else 0.5 * (lo + hi)
    for _ in range(200):
        f, f1 = bessel_j_pair(n, x)
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
        if abs(step) <= rtol * abs(x) or hi - lo <= rtol * abs(x):
            break
    else:
        raise RuntimeError(f"zero refinement for J_{n} did not converge near {x!r}")
    # one polishing step; the bracket is already below tolerance
    f, f1 = bessel_j_pair(n, x)
    deriv = n / x * f - f1
    if deriv != 0.0:
        polished = x - f / deriv
        if abs(polished - x) <= 4.0 * rtol * abs(x):
            x = polished
    return x


def spectral_value(nu, weights, poles, n_disks, tail):
    total = float(np.sum(np.asarray(weights) / (nu - np.asarray(poles))))
    return n_disks * nu * (total - tail) - 1.0


def spectral_bisect(lo, hi, weights, poles, n_disks, tail, rtol):
    """Bisection for the root of the spectral function between two poles.

    ``lo`` must sit just right of a pole (S > 0) and ``hi`` just left of
    the next one (S < 0).
    """
    slo = spectral_value(lo, weights, poles, n_disks, tail)
    shi = spectral_value(hi, weights, poles, n_disks, tail)
    if not (slo > 0.0 and shi < 0.0):
        raise ValueError(
            f"spectral function has no sign change on [{lo!r}, {hi!r}]: "
            f"S = ({slo!r}, {shi!r})"
        )
    while hi - lo > rtol * lo:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if spectral_value(mid, weights, poles, n_disks, tail) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)

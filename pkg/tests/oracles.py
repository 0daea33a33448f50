"""Independent reference computations used only by the tests."""
import mpmath

mpmath.mp.dps = 40


def series_j(n, x):
    """``J_n(x)`` from its power series; the working precision grows with
    ``x`` to absorb the cancellation between terms of size ``e^x``."""
    with mpmath.workdps(40 + int(float(x) / 2.3)):
        return +_series(n, mpmath.mpf(x))


def _series(n, x):
    half = x / 2
    term = half**n / mpmath.factorial(n)
    total = term
    m = 0
    while abs(term) > mpmath.mpf(10) ** (-45) * max(1, abs(total)):
        m += 1
        term *= -(half * half) / (m * (m + n))
        total += term
    return total


def series_zero(n, lo, hi, tol=1e-16):
    """Bisection on the power series inside a sign-changing bracket."""
    lo, hi = mpmath.mpf(lo), mpmath.mpf(hi)
    flo = series_j(n, lo)
    assert flo * series_j(n, hi) < 0, "bracket has no sign change"
    while hi - lo > tol * hi:
        mid = (lo + hi) / 2
        fm = series_j(n, mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return float((lo + hi) / 2)


def exhaustive_half_distance(values, target, rtol=1e-9):
    """``1/2 min |1/target - 1/v|`` by scanning every pair."""
    best = float("inf")
    for v in values:
        if abs(v - target) <= rtol * target:
            continue
        best = min(best, abs(1.0 / target - 1.0 / v))
    return 0.5 * best

"""Bessel functions of the first kind and their positive zeros.

``J_n(x)`` is evaluated by its power series for ``x <= 8`` and by Miller's
backward recurrence above that; both branches agree to ~1e-14 on the
overlap.  Zeros of ``J_0`` are bracketed in ``((k - 1/2)pi, k pi)``; zeros of
``J_n`` are bracketed by consecutive zeros of ``J_{n-1}`` (interlacing), so
every bracket holds exactly one sign change.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from . import kernels

ZERO_RTOL = 1e-13


@dataclass(frozen=True)
class BesselZero:
    order: int
    index: int
    value: float


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind ``J_n(x)`` for integer ``n >= 0``, ``x >= 0``."""
    if n < 0 or x < 0:
        raise ValueError(f"bessel_j needs n >= 0 and x >= 0, got n={n}, x={x}")
    return kernels.bessel_j(int(n), float(x))


def bessel_j_derivative(n: int, x: float) -> float:
    if x == 0.0:
        return 0.5 if n == 1 else 0.0
    jn, jn1 = kernels.bessel_j_pair(int(n), float(x))
    return n / x * jn - jn1


def mcmahon_guess(n: int, k: int) -> float:
    """Large-``k`` asymptotic estimate of the ``k``-th zero of ``J_n``."""
    mu = 4.0 * n * n
    beta = (k + 0.5 * n - 0.25) * math.pi
    b8 = 8.0 * beta
    return (
        beta
        - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8**3)
        - 32.0 * (mu - 1.0) * (83.0 * mu**2 - 982.0 * mu + 3779.0) / (15.0 * b8**5)
    )


class _ZeroTable:
    """Memoised zeros per order; growth is serialised by a lock."""

    def __init__(self) -> None:
        self._zeros: dict[int, list[float]] = {}
        self._lock = threading.RLock()

    def get(self, n: int, count: int) -> list[float]:
        zeros = self._zeros.get(n)
        if zeros is not None and len(zeros) >= count:
            return zeros[:count]
        with self._lock:
            self._extend(n, count)
            return self._zeros[n][:count]

    def _extend(self, n: int, count: int) -> None:
        zeros = self._zeros.setdefault(n, [])
        if len(zeros) >= count:
            return
        if n > 0:
            self._extend(n - 1, count + 1)
            below = self._zeros[n - 1]
        for k in range(len(zeros) + 1, count + 1):
            guess = mcmahon_guess(n, k)
            if n == 0:
                lo, hi = (k - 0.5) * math.pi, k * math.pi
            else:
                lo, hi = below[k - 1], below[k]
            root = kernels.refine_zero(n, lo, hi, guess, ZERO_RTOL)
            if zeros and not root > zeros[-1]:
                raise RuntimeError(
                    f"zeros of J_{n} out of order at k={k}: {root!r} <= {zeros[-1]!r}"
                )
            zeros.append(root)

    def clear(self) -> None:
        with self._lock:
            self._zeros.clear()


_TABLE = _ZeroTable()


def clear_zero_cache() -> None:
    """Forget memoised zeros (used for cold-start timings)."""
    _TABLE.clear()


def bessel_zeros(n: int, count: int) -> np.ndarray:
    """The first ``count`` positive zeros of ``J_n`` as an array."""
    if n < 0 or count < 0:
        raise ValueError(f"need n >= 0 and count >= 0, got n={n}, count={count}")
    if count == 0:
        return np.empty(0)
    return np.array(_TABLE.get(int(n), int(count)))


def bessel_zero(n: int, k: int) -> BesselZero:
    """The ``k``-th positive zero of ``J_n`` (``k`` starts at 1)."""
    if k < 1:
        raise ValueError(f"zero index must be >= 1, got {k}")
    return BesselZero(order=n, index=k, value=float(bessel_zeros(n, k)[-1]))

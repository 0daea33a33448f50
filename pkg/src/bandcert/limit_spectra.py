"""High-contrast limit spectra for periodic arrays of identical disks.

Two sets matter for the certificates:

* ``sigma_dirichlet``: the Dirichlet spectrum of the inclusions, split into
  nonzero-mean values ``delta*_k = (eta_{0k}/a)^2`` and zero-mean values
  ``(eta_{nk}/a)^2`` with ``n >= 1``;
* ``sigma_N``: the zero-mean Dirichlet values together with the roots of the
  spectral function ``S``.

``S`` is truncated after ``K`` poles.  The remainder is summed in closed
form: for ``nu`` well below the omitted poles,
``sum_{k>K} a_k^2 / (nu - delta_k) ~ -sum_{k>K} a_k^2 / delta_k`` and
``sum_k a_k^2 / delta_k = pi a^4 / 8`` exactly (from ``sum_k eta_{0k}^-4 = 1/32``).
"""
from __future__ import annotations

import enum
import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .geometry import DiskCrystal
from .specfun import bessel_zeros

POLE_SHRINK = 1e-9


class MeanClass(str, enum.Enum):
    NONZERO_MEAN = "nonzero_mean"
    ZERO_MEAN = "zero_mean"


class Provenance(str, enum.Enum):
    DIRICHLET_ZERO_MEAN = "dirichlet_zero_mean"
    DIRICHLET_NONZERO_MEAN = "dirichlet_nonzero_mean"
    ROOT_OF_S = "root_of_S"


class SpectralRootError(RuntimeError):
    """A pole interval of ``S`` shows no sign change."""


class MultiplicityWarning(UserWarning):
    """Certificates assume simple nonzero-mean values; N > 1 disks break that."""


@dataclass(frozen=True)
class DirichletMode:
    order: int
    radial_index: int
    eigenvalue: float
    multiplicity: int
    mean_class: MeanClass
    average: float = 0.0


@dataclass(frozen=True)
class SpectralValue:
    value: float
    provenance: Provenance
    order: int | None = None
    radial_index: int | None = None
    multiplicity: int = 1

    def as_record(self) -> dict:
        return {
            "value": self.value,
            "provenance": self.provenance.value,
            "order": self.order,
            "radial_index": self.radial_index,
            "multiplicity": self.multiplicity,
        }


@dataclass(frozen=True)
class LimitSpectra:
    """Sorted limit sets.  Entries at or above ``complete_below`` may be
    missing neighbours and must not be used for distance computations."""

    sigma_dirichlet: tuple[SpectralValue, ...]
    sigma_n: tuple[SpectralValue, ...]
    complete_below: float = math.inf
    n_disks: int = 1
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        for name in ("sigma_dirichlet", "sigma_n"):
            entries = tuple(getattr(self, name))
            object.__setattr__(self, name, entries)
            values = [e.value for e in entries]
            if any(not v > 0 for v in values):
                raise ValueError(f"{name} holds a non-positive value")

    def nonzero_mean_values(self) -> np.ndarray:
        """The ``delta*`` values in increasing order."""
        return np.array(
            [e.value for e in self.sigma_dirichlet
             if e.provenance is Provenance.DIRICHLET_NONZERO_MEAN]
        )

    def roots(self) -> np.ndarray:
        return np.array(
            [e.value for e in self.sigma_n if e.provenance is Provenance.ROOT_OF_S]
        )

    def dirichlet_values(self) -> np.ndarray:
        return np.array([e.value for e in self.sigma_dirichlet])

    def neumann_values(self) -> np.ndarray:
        return np.array([e.value for e in self.sigma_n])

    def zero_mean_neumann_count_below(self, value: float) -> int:
        """Number of ``sigma_N`` entries strictly below ``value``, with multiplicity."""
        return sum(e.multiplicity for e in self.sigma_n if e.value < value)

    def dirichlet_count_below(self, value: float) -> int:
        return sum(e.multiplicity for e in self.sigma_dirichlet if e.value < value)


@dataclass(frozen=True)
class SpectralFunctionConfig:
    n_disks: int
    radius: float
    truncation: int = 200
    tolerance: float = 1e-12

    def __post_init__(self) -> None:
        if self.n_disks < 1:
            raise ValueError(f"n_disks must be positive, got {self.n_disks}")
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.truncation < 50:
            raise ValueError(f"truncation K must be at least 50, got {self.truncation}")
        if not 0 < self.tolerance <= 1e-9:
            raise ValueError(f"root tolerance must lie in (0, 1e-9], got {self.tolerance}")


def mode_average(a: float, k: int) -> float:
    """Integral over the disk of the k-th normalised radial Dirichlet mode."""
    if not a > 0:
        raise ValueError(f"radius must be positive, got {a}")
    if k < 1:
        raise ValueError(f"radial index must be >= 1, got {k}")
    eta = float(bessel_zeros(0, k)[-1])
    return 2.0 * math.sqrt(math.pi) * a / eta


def disk_dirichlet_spectrum(
    a: float, n_max: int, k_max: int, n_disks: int = 1
) -> list[DirichletMode]:
    """All disk Dirichlet modes with ``n <= n_max`` and ``k <= k_max``, ascending.

    ``n_disks`` multiplies every multiplicity (the inclusion set is a
    disjoint union of identical disks).
    """
    if not a > 0:
        raise ValueError(f"radius must be positive, got {a}")
    if n_max < 0 or k_max < 1:
        raise ValueError(f"need n_max >= 0 and k_max >= 1, got {n_max}, {k_max}")
    modes = []
    for n in range(n_max + 1):
        etas = bessel_zeros(n, k_max)
        for k, eta in enumerate(etas, start=1):
            if n == 0:
                modes.append(DirichletMode(
                    0, k, float((eta / a) ** 2), n_disks, MeanClass.NONZERO_MEAN,
                    2.0 * math.sqrt(math.pi) * a / float(eta),
                ))
            else:
                modes.append(DirichletMode(
                    n, k, float((eta / a) ** 2), 2 * n_disks, MeanClass.ZERO_MEAN, 0.0,
                ))
    modes.sort(key=lambda m: (m.eigenvalue, m.order))
    return modes


@functools.lru_cache(maxsize=64)
def _terms(cfg: SpectralFunctionConfig) -> tuple[np.ndarray, np.ndarray, float]:
    etas = bessel_zeros(0, cfg.truncation)
    a = cfg.radius
    poles = (etas / a) ** 2
    weights = 4.0 * math.pi * a * a / etas**2
    tail = math.pi * a**4 / 8.0 - float(np.sum(weights / poles))
    poles.setflags(write=False)
    weights.setflags(write=False)
    return weights, poles, tail


def spectral_terms(cfg: SpectralFunctionConfig) -> tuple[np.ndarray, np.ndarray, float]:
    """``(a_k^2, delta*_k, tail)`` used to evaluate ``S``."""
    return _terms(cfg)


def spectral_function(nu: float, cfg: SpectralFunctionConfig) -> float:
    """``S(nu) = N nu sum_k a_k^2/(nu - delta*_k) - 1`` with the remainder summed."""
    if not nu > 0:
        raise ValueError(f"nu must be positive, got {nu}")
    weights, poles, tail = _terms(cfg)
    near = np.abs(nu - poles) < cfg.tolerance * poles
    if near.any():
        k = int(np.argmax(near)) + 1
        raise ValueError(
            f"nu={nu!r} is within tolerance of the pole delta*_{k}={poles[k - 1]!r}"
        )
    if nu > poles[-1]:
        raise ValueError(
            f"nu={nu!r} lies above the last retained pole {poles[-1]!r}; raise K"
        )
    return float(kernels.spectral_value(float(nu), weights, poles, float(cfg.n_disks), tail))


def spectral_roots(cfg: SpectralFunctionConfig, j_max: int) -> list[float]:
    """The first ``j_max`` roots of ``S``, one per pole interval."""
    if j_max < 1:
        raise ValueError(f"j_max must be >= 1, got {j_max}")
    weights, poles, tail = _terms(cfg)
    if j_max + 1 > len(poles):
        raise ValueError(f"j_max={j_max} needs at least {j_max + 1} poles; K={cfg.truncation}")
    n = float(cfg.n_disks)
    # below the first pole every term is negative, so S < -1 there
    probe = poles[0] * np.linspace(0.05, 1.0 - 1e-6, 12)
    if any(kernels.spectral_value(float(x), weights, poles, n, tail) >= -1.0 for x in probe):
        raise SpectralRootError("spectral function is not below -1 under the first pole")
    roots = []
    for j in range(j_max):
        lo = poles[j] * (1.0 + POLE_SHRINK)
        hi = poles[j + 1] * (1.0 - POLE_SHRINK)
        try:
            r = kernels.spectral_bisect(lo, hi, weights, poles, n, tail, cfg.tolerance)
        except ValueError as exc:
            raise SpectralRootError(
                f"no root of S in ({lo!r}, {hi!r}) between delta*_{j + 1} and "
                f"delta*_{j + 2}; the truncation K={cfg.truncation} may be too small"
            ) from exc
        roots.append(float(r))
    return roots


def assemble_limit_spectra(
    geom: DiskCrystal,
    n_max: int,
    k_max: int,
    j_max: int,
    truncation: int = 200,
    tolerance: float = 1e-12,
) -> LimitSpectra:
    """Build ``sigma_dirichlet`` and ``sigma_N`` for a disk crystal.

    ``complete_below`` is the smallest value that the cutoffs might have
    missed: the first omitted Dirichlet eigenvalue or the pole after the
    last computed root.
    """
    if geom.dimension != 2:
        raise ValueError("closed-form limit spectra are available for 2-d disks only")
    a, n_disks = geom.radius, geom.n_disks
    modes = disk_dirichlet_spectrum(a, n_max, k_max, n_disks)
    cfg = SpectralFunctionConfig(n_disks, a, truncation, tolerance)
    roots = spectral_roots(cfg, j_max)

    eta_next_order = bessel_zeros(n_max + 1, 1)[0]
    eta_next_radial = bessel_zeros(0, k_max + 1)[-1]
    _, poles, _ = _terms(cfg)
    complete_below = min(
        float((eta_next_order / a) ** 2),
        float((eta_next_radial / a) ** 2),
        float(poles[j_max]),
    )

    dirichlet = []
    zero_mean = []
    for m in modes:
        if m.mean_class is MeanClass.NONZERO_MEAN:
            prov = Provenance.DIRICHLET_NONZERO_MEAN
        else:
            prov = Provenance.DIRICHLET_ZERO_MEAN
        entry = SpectralValue(m.eigenvalue, prov, m.order, m.radial_index, m.multiplicity)
        dirichlet.append(entry)
        if prov is Provenance.DIRICHLET_ZERO_MEAN:
            zero_mean.append(entry)
    neumann = zero_mean + [
        SpectralValue(r, Provenance.ROOT_OF_S, 0, j, 1) for j, r in enumerate(roots, start=1)
    ]
    neumann.sort(key=lambda e: e.value)

    notes = []
    if n_disks > 1:
        msg = (
            f"with N={n_disks} disks every nonzero-mean Dirichlet value has "
            f"multiplicity {n_disks}; the certificate theorems assume a simple value"
        )
        warnings.warn(msg, MultiplicityWarning, stacklevel=2)
        notes.append(msg)
    return LimitSpectra(
        tuple(_merge_equal(dirichlet)), tuple(_merge_equal(neumann)),
        complete_below, n_disks, tuple(notes),
    )


def _merge_equal(entries: Sequence[SpectralValue]) -> list[SpectralValue]:
    # Bessel zeros of different orders never coincide, but guard anyway so the
    # lists stay strictly increasing
    out: list[SpectralValue] = []
    for e in entries:
        if out and e.value == out[-1].value:
            prev = out[-1]
            out[-1] = SpectralValue(
                prev.value, prev.provenance, prev.order, prev.radial_index,
                prev.multiplicity + e.multiplicity,
            )
        else:
            out.append(e)
    return out


@dataclass(frozen=True)
class InterlacingReport:
    ok: bool
    violations: tuple[tuple[float | None, float, float | None], ...]
    messages: tuple[str, ...]


def interlacing_check(spectra: LimitSpectra) -> InterlacingReport:
    """Check that nonzero-mean values and roots of ``S`` alternate.

    Within ``complete_below`` the merged sequence must read
    ``delta*_1 < nu_1 < delta*_2 < nu_2 < ...``.  A violation is reported as
    the triple ``(previous, offending, next)`` of merged values.
    """
    deltas = [e.value for e in spectra.sigma_dirichlet
              if e.provenance is Provenance.DIRICHLET_NONZERO_MEAN]
    roots = [e.value for e in spectra.sigma_n if e.provenance is Provenance.ROOT_OF_S]
    violations: list[tuple[float | None, float, float | None]] = []
    messages: list[str] = []
    for name, seq in (("nonzero-mean values", deltas), ("roots of S", roots)):
        for x, y in zip(seq, seq[1:]):
            if not x < y:
                violations.append((x, y, None))
                messages.append(f"{name} not strictly increasing at {x!r}, {y!r}")

    limit = spectra.complete_below
    merged = sorted(
        [(v, "delta") for v in deltas if v < limit] + [(v, "root") for v in roots if v < limit]
    )
    if merged and merged[0][1] == "root":
        nxt = merged[1][0] if len(merged) > 1 else None
        violations.append((None, merged[0][0], nxt))
        messages.append(f"root {merged[0][0]!r} lies below the first nonzero-mean value")
    # the root list may stop early: deltas past the last root are unmatched
    # by construction, not out of order
    last = max((i for i, (_, kind) in enumerate(merged) if kind == "root"), default=-1)
    for i in range(1, last + 1):
        if merged[i][1] == merged[i - 1][1]:
            nxt = merged[i + 1][0] if i + 1 < len(merged) else None
            violations.append((merged[i - 1][0], merged[i][0], nxt))
            kind = "nonzero-mean values" if merged[i][1] == "delta" else "roots"
            messages.append(
                f"two consecutive {kind} {merged[i - 1][0]!r}, {merged[i][0]!r} "
                "without an element of the other set between them"
            )
    # the last in-range delta* needs its root unless the root list stops there
    in_range_roots = [v for v, kind in merged if kind == "root"]
    if in_range_roots:
        last_root = in_range_roots[-1]
        missing = [v for v, kind in merged if kind == "delta" and v < last_root]
        if len(missing) != len(in_range_roots):
            messages.append(
                f"{len(missing)} nonzero-mean values precede the last root but "
                f"{len(in_range_roots)} roots were found"
            )
            if not violations:
                violations.append((None, last_root, None))
    return InterlacingReport(not violations, tuple(violations), tuple(messages))


def spectra_records(entries: Iterable[SpectralValue]) -> list[dict]:
    return [e.as_record() for e in sorted(entries, key=lambda e: e.value)]

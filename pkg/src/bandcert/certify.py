"""Band-gap and passband certificates with explicit contrast thresholds.

A gap certificate around the nonzero-mean Dirichlet value ``delta*_j`` reads

    no spectrum in (delta*_j, nu (1 - nu d_j / (k r_bar - 1)))   for k > k_bar_j,
    k_bar_j = (1 + d_j nu / (1 - delta*_j / nu)) / r_bar,

with ``nu`` the next element of ``sigma_N``.  A passband certificate is the
mirror statement below ``delta*_j`` using the Dirichlet spectrum.  The dual
crystal (coefficients swapped and divided by ``k``) has the same intervals
scaled by ``1/k``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence, Union

import numpy as np

from .geometry import DiskCrystal, GeneralCrystal
from .limit_spectra import (
    LimitSpectra,
    MultiplicityWarning,
    Provenance,
    SpectralValue,
    interlacing_check,
)
from .resonance import (
    LAMBDA_NEUMANN,
    LiteralRadius,
    ResonanceBounds,
    Variant,
    convergence_radius,
    lambda_passband,
    paper_literal_disk_radius,
    resonance_bounds,
)

__all__ = [
    "BelowThreshold",
    "CertificateError",
    "CertificateProvenance",
    "DiskCrystal",
    "GapCertificate",
    "GeneralCrystal",
    "InsufficientRange",
    "NotSimple",
    "PassbandCertificate",
    "certificate_record",
    "certify_gap",
    "certify_passband",
    "dual_certificate",
    "gap_distance_d_j",
    "passband_distance_d_j",
    "series_error_bound",
]

SIMPLE_RTOL = 1e-9

Crystal = Union[DiskCrystal, GeneralCrystal]


class CertificateError(ValueError):
    pass


class InsufficientRange(CertificateError):
    """The computed spectra do not reach far enough to fix ``d_j``."""


class NotSimple(CertificateError):
    pass


class BelowThreshold(CertificateError):
    """The contrast does not exceed the certificate threshold."""


@dataclass(frozen=True)
class CertificateProvenance:
    theta: float
    mu_star: float
    z_star: float
    lambda_floor: float
    radius_formula: str

    def as_record(self) -> dict:
        return {
            "theta": self.theta,
            "mu_star": self.mu_star,
            "z_star": self.z_star,
            "lambda_floor": self.lambda_floor,
            "radius_formula": self.radius_formula,
        }


@dataclass(frozen=True)
class GapCertificate:
    j: int
    delta_star: float
    nu_next: float
    d_j: float
    r_bar: float
    k_threshold: float
    variant: Variant
    provenance: CertificateProvenance
    dual: bool = False
    notes: tuple[str, ...] = field(default=())

    kind = "gap"

    @property
    def neighbor(self) -> float:
        return self.nu_next

    @property
    def radius(self) -> float:
        return self.r_bar

    def upper_endpoint(self, k: float) -> float:
        """Primal upper endpoint without the threshold check."""
        nu = self.nu_next
        return nu * (1.0 - nu * self.d_j / (k * self.r_bar - 1.0))

    def interval(self, k: float) -> tuple[float, float]:
        _require_above(self, k)
        lo, hi = self.delta_star, self.upper_endpoint(k)
        if self.dual:
            return lo / k, hi / k
        return lo, hi


@dataclass(frozen=True)
class PassbandCertificate:
    j: int
    delta_star: float
    nu_prev: float
    d_j: float
    r_under: float
    k_threshold: float
    variant: Variant
    provenance: CertificateProvenance
    dual: bool = False
    notes: tuple[str, ...] = field(default=())

    kind = "passband"

    @property
    def neighbor(self) -> float:
        return self.nu_prev

    @property
    def radius(self) -> float:
        return self.r_under

    def upper_endpoint(self, k: float) -> float:
        ds = self.delta_star
        return ds * (1.0 - ds * self.d_j / (k * self.r_under - 1.0))

    def interval(self, k: float) -> tuple[float, float]:
        _require_above(self, k)
        lo, hi = self.nu_prev, self.upper_endpoint(k)
        if self.dual:
            return lo / k, hi / k
        return lo, hi


Certificate = Union[GapCertificate, PassbandCertificate]


def _require_above(cert: Certificate, k: float) -> None:
    if not k > cert.k_threshold:
        raise BelowThreshold(
            f"k={k!r} does not exceed the {cert.kind} threshold {cert.k_threshold!r} "
            f"for j={cert.j}; the certificate makes no claim here"
        )


def _distinct(values: Iterable[float]) -> list[float]:
    out: list[float] = []
    for v in sorted(values):
        v = float(v)
        if not out or v > out[-1] * (1.0 + SIMPLE_RTOL):
            out.append(v)
    return out


def _half_reciprocal_distance(values: Sequence[float], target: float, complete_below: float) -> float:
    """``1/2 min |1/target - 1/v|`` over ``values`` other than ``target``.

    Only values below ``complete_below`` are trusted; if the trusted set ends
    above ``target`` the unseen part of the spectrum is bounded below by
    ``complete_below`` and must be provably farther than the nearest seen value.
    """
    if not target < complete_below:
        raise InsufficientRange(
            f"target {target!r} is not below the completeness bound {complete_below!r}; "
            "increase the spectral cutoffs"
        )
    trusted = [v for v in _distinct(values) if v < complete_below]
    others = [v for v in trusted if abs(v - target) > SIMPLE_RTOL * target]
    below = [v for v in others if v < target]
    above = [v for v in others if v > target]
    gap_below = 1.0 / below[-1] - 1.0 / target if below else math.inf
    if above:
        gap_above = 1.0 / target - 1.0 / above[0]
    else:
        unseen = 1.0 / target - 1.0 / complete_below
        if gap_below > unseen:
            raise InsufficientRange(
                f"the nearest neighbour of {target!r} may lie above the computed range "
                f"(complete below {complete_below!r}); increase the spectral cutoffs"
            )
        gap_above = math.inf
    gap = min(gap_below, gap_above)
    if not math.isfinite(gap):
        raise InsufficientRange(f"no other spectral value near {target!r}")
    return 0.5 * gap


def _nonzero_mean(spectra: LimitSpectra, j: int) -> SpectralValue:
    entries = [e for e in spectra.sigma_dirichlet
               if e.provenance is Provenance.DIRICHLET_NONZERO_MEAN]
    if j < 1:
        raise CertificateError(f"j must be >= 1, got {j}")
    if j > len(entries):
        raise InsufficientRange(
            f"j={j} exceeds the {len(entries)} computed nonzero-mean values"
        )
    entry = entries[j - 1]
    if not entry.value < spectra.complete_below:
        raise InsufficientRange(
            f"delta*_{j}={entry.value!r} is outside the complete range "
            f"(< {spectra.complete_below!r})"
        )
    return entry


def _next_neumann(spectra: LimitSpectra, delta_star: float) -> float:
    above = [e.value for e in spectra.sigma_n if e.value > delta_star]
    if not above or not above[0] < spectra.complete_below:
        raise InsufficientRange(f"no computed sigma_N element above {delta_star!r}")
    return above[0]


def gap_distance_d_j(spectra: LimitSpectra, j: int) -> float:
    """Half the reciprocal isolation of ``nu_{j+1}`` inside ``sigma_N``."""
    ds = _nonzero_mean(spectra, j).value
    target = _next_neumann(spectra, ds)
    return _half_reciprocal_distance(spectra.neumann_values(), target, spectra.complete_below)


def passband_distance_d_j(spectra: LimitSpectra, j: int) -> float:
    """Half the reciprocal isolation of ``delta*_j`` inside the Dirichlet spectrum."""
    ds = _nonzero_mean(spectra, j).value
    return _half_reciprocal_distance(spectra.dirichlet_values(), ds, spectra.complete_below)


def _check_simple(crystal: Crystal, spectra: LimitSpectra, j: int) -> tuple[float, list[str]]:
    entry = _nonzero_mean(spectra, j)
    ds = entry.value
    notes: list[str] = []
    clash = [e.value for e in spectra.sigma_dirichlet
             if e is not entry and abs(e.value - ds) <= SIMPLE_RTOL * ds]
    if clash:
        raise NotSimple(
            f"delta*_{j}={ds!r} coincides with Dirichlet value(s) {clash!r} "
            f"to {SIMPLE_RTOL:g} relative"
        )
    if entry.multiplicity > 1:
        if isinstance(crystal, DiskCrystal) and crystal.n_disks > 1:
            msg = (
                f"delta*_{j} has multiplicity {entry.multiplicity} for "
                f"{crystal.n_disks} identical disks; certificate issued with the "
                "N-scaled spectral function"
            )
            warnings.warn(msg, MultiplicityWarning, stacklevel=3)
            notes.append(msg)
        else:
            raise NotSimple(f"delta*_{j}={ds!r} has multiplicity {entry.multiplicity}")
    report = interlacing_check(spectra)
    if not report.ok:
        raise CertificateError("interlacing violated: " + "; ".join(report.messages))
    return ds, notes


def _bounds(crystal: Crystal) -> ResonanceBounds:
    return resonance_bounds(crystal.theta)


def certify_gap(
    crystal: Crystal,
    spectra: LimitSpectra,
    j: int,
    variant: Variant | str = Variant.CANONICAL,
) -> GapCertificate:
    variant = Variant(variant)
    ds, notes = _check_simple(crystal, spectra, j)
    nu = _next_neumann(spectra, ds)
    d = gap_distance_d_j(spectra, j)
    bounds = _bounds(crystal)
    if variant is Variant.PAPER_LITERAL and isinstance(crystal, DiskCrystal):
        r = paper_literal_disk_radius(LiteralRadius.THM1_GAP, crystal.radius, crystal.buffer, d)
        formula = LiteralRadius.THM1_GAP.value
    else:
        r = convergence_radius(LAMBDA_NEUMANN, d, bounds).r_star
        formula = "master"
    k_bar = (1.0 + d * nu / (1.0 - ds / nu)) / r
    prov = CertificateProvenance(
        bounds.theta, bounds.mu_star, bounds.z_star, LAMBDA_NEUMANN, formula
    )
    cert = GapCertificate(j, ds, nu, d, r, k_bar, variant, prov, False, tuple(notes))
    lo, hi = cert.interval(k_bar * (1.0 + 1e-9))
    if not lo < hi:
        raise CertificateError(f"gap interval empty just above the threshold: ({lo!r}, {hi!r})")
    return cert


def certify_passband(
    crystal: Crystal,
    spectra: LimitSpectra,
    j: int,
    variant: Variant | str = Variant.CANONICAL,
) -> PassbandCertificate:
    variant = Variant(variant)
    ds, notes = _check_simple(crystal, spectra, j)
    below = [e.value for e in spectra.sigma_n if e.value < ds]
    if below:
        nu_prev = below[-1]
    else:
        # nothing in sigma_N lies under delta*_j: the band starts at the
        # bottom of the acoustic branch
        nu_prev = 0.0
        notes.append(f"no sigma_N element below delta*_{j}; lower endpoint set to 0")
    d = passband_distance_d_j(spectra, j)
    bounds = _bounds(crystal)
    floor = lambda_passband(crystal.dimension)
    if variant is Variant.PAPER_LITERAL and isinstance(crystal, DiskCrystal):
        r = paper_literal_disk_radius(LiteralRadius.THM1_PASS, crystal.radius, crystal.buffer, d)
        formula = LiteralRadius.THM1_PASS.value
    else:
        r = convergence_radius(floor, d, bounds).r_star
        formula = "master"
    k_under = (1.0 + d * ds / (1.0 - nu_prev / ds)) / r
    prov = CertificateProvenance(bounds.theta, bounds.mu_star, bounds.z_star, floor, formula)
    cert = PassbandCertificate(j, ds, nu_prev, d, r, k_under, variant, prov, False, tuple(notes))
    lo, hi = cert.interval(k_under * (1.0 + 1e-9))
    if not lo < hi:
        raise CertificateError(f"band interval empty just above the threshold: [{lo!r}, {hi!r}]")
    return cert


def dual_certificate(cert: Certificate, k: float) -> Certificate:
    """The same certificate for the reciprocal crystal; applying it twice
    returns the original."""
    _require_above(cert, k)
    return replace(cert, dual=not cert.dual)


def series_error_bound(p: int, z: float, r_star: float, d_hat: float) -> float:
    """Remainder bound ``d_hat |z|^(p+1) / (r*^p (r* - |z|))`` after ``p`` terms."""
    if p < 0:
        raise ValueError(f"p must be nonnegative, got {p}")
    if not abs(z) < r_star:
        raise ValueError(f"|z|={abs(z)!r} is outside the convergence disk r*={r_star!r}")
    az = abs(z)
    return d_hat * az ** (p + 1) / (r_star**p * (r_star - az))


def interval_table(cert: Certificate, ks: Sequence[float]) -> list[dict]:
    rows = []
    for k in ks:
        try:
            lo, hi = cert.interval(k)
        except BelowThreshold:
            rows.append({"k": float(k), "status": "below_threshold"})
        else:
            rows.append({"k": float(k), "status": "certified", "lower": lo, "upper": hi})
    return rows


def certificate_record(cert: Certificate, ks: Sequence[float] = ()) -> dict:
    """JSON-ready dictionary for a certificate."""
    return {
        "type": cert.kind,
        "dual": cert.dual,
        "variant": cert.variant.value,
        "j": cert.j,
        "delta_star": cert.delta_star,
        "neighbor": cert.neighbor,
        "d_j": cert.d_j,
        "r": cert.radius,
        "k_threshold": cert.k_threshold,
        "interval_at": interval_table(cert, ks),
        "provenance": cert.provenance.as_record(),
        "notes": list(cert.notes),
    }


"""Compare certificates with oracle data and check the reciprocal relation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from ..certify import GapCertificate, PassbandCertificate, passband_distance_d_j
from ..geometry import DiskCrystal
from ..limit_spectra import LimitSpectra
from ..resonance import convergence_radius, resonance_bounds
from .bands import BandData, NeumannData, default_alpha_grid
from .field import CoefficientField
from .limits import DiscreteLimits, expand_multiplicity
from .operator import BlochProblem, assemble_operator, stiffness
from .solve import eigen_solve

# discrete min-max inequalities are exact; allow for eigensolver rounding
SOLVER_RTOL = 1e-7

NULL_FACTOR = 1e3

PASS, FAIL, INAPPLICABLE = "pass", "fail", "inapplicable"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    margin: float
    worst: float
    detail: str = ""

    def as_record(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "passed": self.status != FAIL,
            "margin": self.margin,
            "worst": self.worst,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class VerificationReport:
    certificate: str
    j: int
    k: float
    applicable: bool
    checks: tuple[CheckResult, ...]
    notes: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def status(self) -> str:
        if not self.passed:
            return FAIL
        return PASS if self.applicable else INAPPLICABLE

    def as_record(self) -> dict:
        return {
            "certificate": self.certificate,
            "j": self.j,
            "k": self.k,
            "applicable": self.applicable,
            "status": self.status,
            "checks": [c.as_record() for c in self.checks],
            "notes": list(self.notes),
        }


def _tol(x) -> float:
    return SOLVER_RTOL * (1.0 + float(np.max(np.abs(x))))


def _limit_defects(spectra: LimitSpectra, limits: Optional[DiscreteLimits]):
    if limits is None:
        return None, None
    exact_d = expand_multiplicity(spectra.sigma_dirichlet)
    exact_n = expand_multiplicity(spectra.sigma_n)
    nd = min(len(exact_d), len(limits.dirichlet))
    nn = min(len(exact_n), len(limits.neumann))
    return limits.dirichlet[:nd] - exact_d[:nd], limits.neumann[:nn] - exact_n[:nn]


def verify_certificate(
    cert: GapCertificate | PassbandCertificate,
    band_data: BandData,
    neumann_data: NeumannData,
    spectra: LimitSpectra,
    limits: Optional[DiscreteLimits] = None,
) -> VerificationReport:
    """Run the five oracle checks for one certificate.

    Margins combine the two-grid Richardson estimate with, when ``limits`` is
    given, the gap between the discrete and exact limit spectra on the same
    grid.  Checks that rest on ``k`` exceeding a threshold are reported as
    inapplicable below it.
    """
    k = band_data.k
    if not math.isclose(neumann_data.k, k):
        raise ValueError("band and Neumann data were computed at different contrasts")
    lam = band_data.primal_frame()
    mu_zero_mean = neumann_data.primal_frame()
    scale = k if band_data.dual else 1.0
    rich = band_data.margins * scale
    rich_n = neumann_data.margins * scale
    defect_d, defect_n = _limit_defects(spectra, limits)
    ds = cert.delta_star
    big_j = spectra.dirichlet_count_below(ds) + 1  # min-max index of delta*_j
    notes = []
    applicable = k > cert.k_threshold
    if not applicable:
        notes.append(
            f"k={k!r} does not exceed the threshold {cert.k_threshold!r}; "
            "the certificate is inapplicable here, not wrong"
        )

    def defect(arr, idx):
        if arr is None or idx >= len(arr):
            return 0.0
        return float(abs(arr[idx]))

    checks = []
    # (i) certified interval against the sampled spectrum; every band gets
    # its own two-grid margin, widened by the limit defect on its side
    band_margins = rich[: lam.shape[0]].copy()
    below_defect = defect(defect_d, big_j - 1)
    band_margins[:big_j] = np.maximum(band_margins[:big_j], below_defect)
    if isinstance(cert, GapCertificate):
        i_nu = spectra.zero_mean_neumann_count_below(cert.nu_next)
        band_margins[big_j:] = np.maximum(band_margins[big_j:], defect(defect_n, i_nu))
        adjacent = band_margins[max(big_j - 1, 0): big_j + 1]
    else:
        adjacent = band_margins[:big_j]
    margin_i = float(adjacent.max()) if adjacent.size else 0.0
    if applicable:
        lo, hi = replace(cert, dual=False).interval(k)
        if isinstance(cert, GapCertificate):
            marg = band_margins[:, None]
            hit = (lam > lo + marg) & (lam < hi - marg)
            inside = lam[hit]
            worst = float(np.min(np.minimum(inside - lo, hi - inside))) if inside.size else 0.0
            status = PASS if inside.size == 0 else FAIL
            detail = f"gap ({lo!r}, {hi!r}); {inside.size} eigenvalues inside beyond the margin"
        else:
            uncovered = _uncovered(band_data.bands(), lo + margin_i, hi - margin_i, scale)
            worst = uncovered
            status = PASS if uncovered <= 0.0 else FAIL
            detail = f"band [{lo!r}, {hi!r}]; uncovered length {uncovered!r}"
        checks.append(CheckResult("interval", status, margin_i, worst, detail))
    else:
        checks.append(CheckResult("interval", INAPPLICABLE, margin_i, 0.0, "below threshold"))

    # (ii) Neumann eigenvalues, counting the constant mode, sit below Bloch ones
    mu = np.concatenate([[0.0], mu_zero_mean])
    count = min(len(mu), lam.shape[0])
    excess = mu[:count, None] - lam[:count, :]
    tol = _tol(lam)
    worst = float(excess.max())
    checks.append(CheckResult(
        "neumann_below_bloch", PASS if worst <= tol else FAIL, tol, worst,
        f"max over m<={count} and all alpha of mu_m - lambda_m",
    ))

    # (iii) the first big_j Bloch eigenvalues stay under delta*_j
    margin_iii = max(defect(defect_d, big_j - 1),
                     float(rich[big_j - 1]) if big_j <= len(rich) else 0.0) + _tol(lam)
    if big_j <= lam.shape[0]:
        over = float((lam[:big_j, :] - ds).max())
        status = PASS if over <= margin_iii else FAIL
        checks.append(CheckResult(
            "bloch_below_dirichlet", status, margin_iii, over,
            f"max over m<={big_j} of lambda_m - delta*_j",
        ))
    else:
        checks.append(CheckResult("bloch_below_dirichlet", INAPPLICABLE, margin_iii, 0.0,
                                  f"only {lam.shape[0]} bands computed, need {big_j}"))

    # (iv) per-alpha distance of lambda_J to delta*_j
    bounds = resonance_bounds(cert.provenance.theta)
    d_pass = passband_distance_d_j(spectra, cert.j)
    margin_iv = max(float(rich[big_j - 1]) if big_j <= len(rich) else 0.0,
                    defect(defect_d, big_j - 1))
    rows = []
    for col, alpha in enumerate(band_data.alphas):
        a2 = float(sum(x * x for x in alpha))
        if big_j > lam.shape[0] or a2 == 0.0:
            continue
        r = convergence_radius(a2, d_pass, bounds).r_star
        if k * r <= 1.0:
            continue
        bound = ds * ds * d_pass / (k * r - 1.0)
        rows.append(abs(lam[big_j - 1, col] - ds) - bound)
    if rows:
        worst = float(max(rows))
        checks.append(CheckResult(
            "bloch_near_dirichlet", PASS if worst <= margin_iv else FAIL, margin_iv, worst,
            f"{len(rows)} of {len(band_data.alphas)} alpha samples satisfy k r(|alpha|^2) > 1",
        ))
    else:
        checks.append(CheckResult("bloch_near_dirichlet", INAPPLICABLE, margin_iv, 0.0,
                                  "no alpha sample with k r(|alpha|^2) > 1"))

    # (v) Neumann eigenvalue near nu_{j+1}
    if isinstance(cert, GapCertificate):
        i_nu = spectra.zero_mean_neumann_count_below(cert.nu_next)
        margin_v = max(float(rich_n[i_nu]) if i_nu < len(rich_n) else 0.0, defect(defect_n, i_nu))
        if applicable and i_nu < len(mu_zero_mean):
            bound = cert.nu_next**2 * cert.d_j / (k * cert.r_bar - 1.0)
            worst = abs(float(mu_zero_mean[i_nu]) - cert.nu_next) - bound
            checks.append(CheckResult(
                "neumann_near_limit", PASS if worst <= margin_v else FAIL, margin_v, worst,
                f"|nu_{i_nu + 1}(k) - nu| minus its bound {bound!r}",
            ))
        else:
            checks.append(CheckResult("neumann_near_limit", INAPPLICABLE, margin_v, 0.0,
                                      "below threshold or too few Neumann values"))
    else:
        checks.append(CheckResult("neumann_near_limit", INAPPLICABLE, 0.0, 0.0,
                                  "not part of a passband certificate"))
    return VerificationReport(cert.kind, cert.j, k, applicable, tuple(checks), tuple(notes))


def _uncovered(bands, lo: float, hi: float, scale: float) -> float:
    """Length of ``[lo, hi]`` not covered by the union of sampled bands."""
    if hi <= lo:
        return 0.0
    pieces = sorted((a * scale, b * scale) for a, b in bands)
    covered = 0.0
    cursor = lo
    for a, b in pieces:
        a, b = max(a, cursor), min(b, hi)
        if b > a:
            covered += b - a
            cursor = b
    return (hi - lo) - covered


@dataclass(frozen=True)
class ReciprocalReport:
    k: float
    max_relative_error: float
    homogeneity_error: float
    tolerance: float
    null_modes: int = 0

    @property
    def passed(self) -> bool:
        return self.max_relative_error <= self.tolerance and self.homogeneity_error <= self.tolerance

    def as_record(self) -> dict:
        return {
            "k": self.k,
            "max_relative_error": self.max_relative_error,
            "homogeneity_error": self.homogeneity_error,
            "tolerance": self.tolerance,
            "null_modes": self.null_modes,
            "passed": self.passed,
        }


def reciprocal_check(
    geom: DiskCrystal,
    k: float,
    alpha_grid: Sequence[Sequence[float]] | None = None,
    m: int = 5,
    n: int = 32,
    tolerance: float = 1e-10,
    t: float = 3.0,
) -> ReciprocalReport:
    """Dual spectra against ``1/k`` times primal spectra, plus the matrix
    identity ``A(t a_in, a_out) = t A(a_in, a_out / t)``."""
    alphas = alpha_grid or default_alpha_grid(geom.dimension)
    primal = CoefficientField.from_geometry(geom, n, k)
    dual = CoefficientField.from_geometry(geom, n, k, dual=True)
    worst = 0.0
    null_modes = 0
    for alpha in alphas:
        op_p = assemble_operator(BlochProblem(primal, tuple(alpha), m=m))
        op_d = assemble_operator(BlochProblem(dual, tuple(alpha), m=m))
        lp = eigen_solve(op_p, m).values / k
        ld = eigen_solve(op_d, m).values
        # an exact null mode (alpha = 0) has no relative accuracy; both
        # sides must vanish to rounding of the dual operator norm
        zero_scale = NULL_FACTOR * np.finfo(float).eps * abs(op_d.matrix).sum(axis=1).max()
        null = (np.abs(lp) <= zero_scale) & (np.abs(ld) <= zero_scale)
        null_modes += int(null.sum())
        if (~null).any():
            rel = np.abs(ld - lp)[~null] / np.abs(lp[~null])
            worst = max(worst, float(rel.max()))

    mask = primal.inclusion
    a_in, a_out = 1.0, float(k)
    lhs = stiffness(np.where(mask, t * a_in, a_out), alphas[-1])
    rhs = stiffness(np.where(mask, a_in, a_out / t), alphas[-1]) * t
    diff = abs(lhs - rhs).max()
    hom = float(diff / abs(lhs).max())
    return ReciprocalReport(float(k), worst, hom, tolerance, null_modes)

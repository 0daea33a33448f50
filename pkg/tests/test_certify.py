import math
import warnings

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from bandcert.certify import (
    BelowThreshold,
    CertificateProvenance,
    GapCertificate,
    InsufficientRange,
    NotSimple,
    PassbandCertificate,
    certificate_record,
    certify_gap,
    certify_passband,
    dual_certificate,
    gap_distance_d_j,
    passband_distance_d_j,
    series_error_bound,
)
from bandcert.geometry import DiskCrystal, GeneralCrystal
from bandcert.limit_spectra import (
    LimitSpectra,
    MultiplicityWarning,
    Provenance,
    SpectralValue,
    assemble_limit_spectra,
)
from bandcert.resonance import Variant

from .oracles import exhaustive_half_distance

PI2 = math.pi**2
PROV = CertificateProvenance(0.5, -0.25, -1 / 3, PI2, "synthetic")
NZ, ZM, ROOT = (Provenance.DIRICHLET_NONZERO_MEAN, Provenance.DIRICHLET_ZERO_MEAN,
                Provenance.ROOT_OF_S)


def sv(value, prov, mult=1):
    return SpectralValue(value, prov, 0, 1, mult)


def synthetic_spectra(dirichlet, neumann, complete_below=math.inf):
    return LimitSpectra(tuple(sv(v, p) for v, p in dirichlet),
                        tuple(sv(v, p) for v, p in neumann), complete_below)


def gap_cert(ds=1.0, nu=2.0, d=0.25, r=0.1):
    k_bar = (1 + d * nu / (1 - ds / nu)) / r
    return GapCertificate(1, ds, nu, d, r, k_bar, Variant.CANONICAL, PROV)


def pass_cert(nu_prev=1.0, ds=2.0, d=0.25, r=0.1):
    k = (1 + d * ds / (1 - nu_prev / ds)) / r
    return PassbandCertificate(1, ds, nu_prev, d, r, k, Variant.CANONICAL, PROV)


class TestDistances:
    def test_gap_two_element_set(self):
        spectra = synthetic_spectra([(1.5, NZ)], [(1.0, ZM), (2.0, ROOT)])
        assert gap_distance_d_j(spectra, 1) == pytest.approx(0.25)

    def test_passband_two_element_set(self):
        spectra = synthetic_spectra([(1.0, NZ), (3.0, ZM)], [(2.0, ROOT)])
        assert passband_distance_d_j(spectra, 1) == pytest.approx(1 / 3)

    def test_duplicate_target_excluded(self):
        spectra = synthetic_spectra([(1.5, NZ)], [(1.0, ZM), (2.0, ZM), (2.0, ROOT)])
        assert gap_distance_d_j(spectra, 1) == pytest.approx(0.25)

    def test_index_out_of_range(self, disk_spectra):
        with pytest.raises(InsufficientRange):
            gap_distance_d_j(disk_spectra, 40)

    def test_unseen_neighbour_rejected(self):
        # the only computed neighbour is far below, the unseen range is close above
        spectra = synthetic_spectra([(1.5, NZ)], [(1.0, ZM), (2.0, ROOT)], complete_below=2.1)
        with pytest.raises(InsufficientRange):
            gap_distance_d_j(spectra, 1)

    @pytest.mark.parametrize("j", [1, 2, 3])
    def test_disk_gap_distance_exhaustive(self, disk_spectra, j):
        values = [v for v in disk_spectra.neumann_values() if v < disk_spectra.complete_below]
        ds = disk_spectra.nonzero_mean_values()[j - 1]
        target = min(v for v in values if v > ds)
        assert gap_distance_d_j(disk_spectra, j) == pytest.approx(
            exhaustive_half_distance(values, target), rel=1e-14)

    @pytest.mark.parametrize("j", [1, 2, 3])
    def test_disk_passband_distance_exhaustive(self, disk_spectra, j):
        values = [v for v in disk_spectra.dirichlet_values() if v < disk_spectra.complete_below]
        target = disk_spectra.nonzero_mean_values()[j - 1]
        assert passband_distance_d_j(disk_spectra, j) == pytest.approx(
            exhaustive_half_distance(values, target), rel=1e-14)


class TestSyntheticAlgebra:
    def test_gap_threshold_and_interval(self):
        cert = gap_cert()
        assert cert.k_threshold == pytest.approx(20.0)
        lo, hi = cert.interval(40.0)
        assert (lo, hi) == pytest.approx((1.0, 5 / 3))

    def test_passband_threshold_and_interval(self):
        cert = pass_cert()
        assert cert.k_threshold == pytest.approx(20.0)
        assert cert.interval(40.0) == pytest.approx((1.0, 5 / 3))

    def test_dual_gap(self):
        dual = dual_certificate(gap_cert(), 40.0)
        assert dual.interval(40.0) == pytest.approx((0.025, 1 / 24))

    def test_dual_involution(self):
        cert = gap_cert()
        twice = dual_certificate(dual_certificate(cert, 40.0), 40.0)
        assert twice == cert
        assert twice.interval(40.0) == cert.interval(40.0)

    @pytest.mark.parametrize("k", [20.0, 19.0, 1.0])
    def test_refuses_at_or_below_threshold(self, k):
        cert = gap_cert()
        with pytest.raises(BelowThreshold):
            cert.interval(cert.k_threshold if k == 20.0 else k)
        with pytest.raises(BelowThreshold):
            dual_certificate(cert, k)


pos = st.floats(0.1, 100.0)


@settings(max_examples=200)
@given(ds=pos, gap=st.floats(1.01, 5.0), d=st.floats(1e-4, 0.5), r=st.floats(1e-3, 0.5),
       factor=st.floats(1.0001, 1e4))
def test_gap_certificate_invariants(ds, gap, d, r, factor):
    cert = gap_cert(ds, ds * gap, d, r)
    k_bar = cert.k_threshold
    assert cert.upper_endpoint(k_bar) == pytest.approx(ds, rel=1e-9)
    k = k_bar * factor
    lo, hi = cert.interval(k)
    assert lo < hi < cert.nu_next
    assert cert.interval(2 * k)[1] >= hi
    dlo, dhi = dual_certificate(cert, k).interval(k)
    assert dlo == lo / k and dhi == hi / k


@settings(max_examples=200)
@given(nu_prev=pos, ratio=st.floats(1.01, 5.0), d=st.floats(1e-4, 0.5),
       r=st.floats(1e-3, 0.5), factor=st.floats(1.0001, 1e4))
def test_passband_certificate_invariants(nu_prev, ratio, d, r, factor):
    cert = pass_cert(nu_prev, nu_prev * ratio, d, r)
    assert cert.upper_endpoint(cert.k_threshold) == pytest.approx(nu_prev, rel=1e-9)
    k = cert.k_threshold * factor
    lo, hi = cert.interval(k)
    assert lo < hi < cert.delta_star
    assert cert.interval(2 * k)[1] >= hi


@pytest.fixture(scope="module")
def gap(disk, disk_spectra):
    return certify_gap(disk, disk_spectra, 1)


@pytest.fixture(scope="module")
def band(disk, disk_spectra):
    return certify_passband(disk, disk_spectra, 1)


class TestDiskCertificates:
    def test_gap_by_independent_route(self, disk_spectra, gap):
        a2, b2 = 0.09, 0.2025
        ds = disk_spectra.nonzero_mean_values()[0]
        nu = disk_spectra.roots()[0]
        d = gap.d_j
        # master radius with mu* and z* written out for a buffered disk
        r = PI2 * d * (b2 - a2) / (2 * (b2 + a2) + PI2 * d * (b2 + 3 * a2))
        k_bar = (1 + d * nu / (1 - ds / nu)) / r
        assert gap.r_bar == pytest.approx(r, rel=1e-12)
        assert gap.k_threshold == pytest.approx(k_bar, rel=1e-12)
        k = 2 * k_bar
        hi = nu - nu * nu * d / (k * r - 1)
        assert gap.interval(k) == pytest.approx((ds, hi), rel=1e-12)
        assert gap.delta_star == ds and gap.nu_next == nu

    def test_gap_closes_at_threshold(self, gap):
        assert gap.upper_endpoint(gap.k_threshold) == pytest.approx(gap.delta_star, rel=1e-9)
        lo, hi = gap.interval(2 * gap.k_threshold)
        assert lo < hi

    def test_passband_below_dirichlet(self, band):
        lo, hi = band.interval(2 * band.k_threshold)
        assert lo <= hi < band.delta_star
        assert band.nu_prev == 0.0 and band.notes

    def test_passband_dual_at_100(self, band):
        k = 100.0
        assert k > band.k_threshold
        dual = dual_certificate(band, k)
        lo, hi = band.interval(k)
        assert dual.interval(k) == (lo * 0.01, hi * 0.01)

    def test_literal_variant_recorded(self, disk, disk_spectra):
        lit = certify_gap(disk, disk_spectra, 1, Variant.PAPER_LITERAL)
        assert lit.provenance.radius_formula == "thm1_gap"
        assert lit.variant is Variant.PAPER_LITERAL

    def test_record_is_plain(self, gap):
        rec = certificate_record(gap, [100.0, 2 * gap.k_threshold])
        assert rec["type"] == "gap"
        assert rec["interval_at"][0]["status"] == "below_threshold"
        assert rec["interval_at"][1]["status"] == "certified"
        assert all(type(rec[key]) is float for key in ("delta_star", "d_j", "r", "k_threshold"))

    def test_beyond_range(self, disk, disk_spectra):
        with pytest.raises(InsufficientRange):
            certify_gap(disk, disk_spectra, 30)

    def test_multiple_disks_warn(self):
        geom = DiskCrystal(2, 0.1, 0.2, centers=((0.25, 0.25), (0.75, 0.75)))
        with pytest.warns(MultiplicityWarning):
            spectra = assemble_limit_spectra(geom, 4, 4, 4)
            cert = certify_gap(geom, spectra, 1)
        assert cert.notes


def test_coincident_dirichlet_value_is_not_simple():
    spectra = synthetic_spectra([(1.0, NZ), (1.0, ZM), (3.0, NZ)],
                                [(0.5, ZM), (2.0, ROOT), (4.0, ROOT)])
    with pytest.raises(NotSimple):
        certify_gap(GeneralCrystal(0.5, 2, spectra), spectra, 1)


def test_general_crystal():
    spectra = synthetic_spectra([(10.0, NZ), (25.0, ZM), (40.0, NZ)],
                                [(15.0, ROOT), (25.0, ZM), (50.0, ROOT)])
    crystal = GeneralCrystal(0.4, 2, spectra)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        cert = certify_gap(crystal, spectra, 1)
    assert cert.nu_next == 15.0
    assert cert.d_j == pytest.approx(0.5 * (1 / 15 - 1 / 25))


class TestSeriesBound:
    def test_zero_offset(self):
        assert series_error_bound(0, 0.0, 0.3, 5.0) == 0.0

    def test_arithmetic(self):
        assert series_error_bound(0, 0.01, 0.02, 0.01) == pytest.approx(0.01)

    def test_outside_disk(self):
        with pytest.raises(ValueError):
            series_error_bound(1, 0.02, 0.02, 0.01)

    @settings(max_examples=100)
    @given(nu=pos, d=st.floats(1e-4, 1.0), r=st.floats(1e-3, 0.5), k=st.floats(1.0, 1e6))
    def test_matches_interval_correction(self, nu, d, r, k):
        assume(k * r > 1.001)
        bound = nu * nu * series_error_bound(0, 1 / k, r, d)
        assert bound == pytest.approx(nu * nu * d / (k * r - 1), rel=1e-12)

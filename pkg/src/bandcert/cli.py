"""``bandcert`` command line: spectra, certificates, band sweeps, verification.

Exit codes: 0 success (or inapplicable), 1 invalid input, 2 numerical
failure, 3 a verification check failed.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy

from . import __version__, kernels
from .certify import (
    BelowThreshold,
    CertificateError,
    InsufficientRange,
    NotSimple,
    certificate_record,
    certify_gap,
    certify_passband,
    dual_certificate,
)
from .config import ConfigError, RunConfig, load_config, parse_k_list, with_overrides
from .export import band_header, band_rows, write_csv, write_json, write_spectra_csv, read_spectra_csv
from .geometry import DiskCrystal, GeneralCrystal, GeometryError
from .limit_spectra import (
    LimitSpectra,
    Provenance,
    SpectralRootError,
    assemble_limit_spectra,
    interlacing_check,
)
from .oracle import (
    EigenSolveError,
    band_sweep,
    default_alpha_grid,
    discrete_limits,
    interior_samples,
    neumann_spectrum,
    reciprocal_check,
    verify_certificate,
    voxelize,
    zone_path,
)
from .resonance import InvalidGeometry
from .svg import band_diagram

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_CHECK = 0, 1, 2, 3


def versions() -> dict:
    return {
        "bandcert": __version__,
        "kernels": kernels.BACKEND,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def _header(cfg: RunConfig) -> dict:
    return {"config_hash": cfg.digest(), "versions": versions()}


def _k_tag(k: float) -> str:
    return repr(float(k)).replace(".", "p").replace("+", "")


def build_crystal(cfg: RunConfig):
    """Crystal and limit spectra for the configured geometry."""
    g = cfg.geometry
    if g.kind == "disk":
        crystal = DiskCrystal(g.n_disks, g.radius, g.buffer, g.dimension, g.centers)
        if g.dimension != 2:
            raise ConfigError(
                "closed-form limit spectra exist for 2-d disks only; "
                "supply spectra through a general geometry"
            )
        sp = cfg.spectra
        spectra = assemble_limit_spectra(crystal, sp.n_max, sp.k_max, sp.j_max, sp.truncation)
        return crystal, spectra
    dirichlet = read_spectra_csv(Path(g.sigma_dirichlet))
    neumann = read_spectra_csv(Path(g.sigma_n))
    for name, entries in (("sigma_dirichlet", dirichlet), ("sigma_n", neumann)):
        values = [e.value for e in entries]
        if not values:
            raise ConfigError(f"{name}: the spectra file is empty")
        if any(not v > 0 for v in values):
            raise ConfigError(f"{name}: values must be positive")
        if any(not b > a for a, b in zip(values, values[1:])):
            raise ConfigError(f"{name}: values must be strictly increasing")
    if any(e.provenance is Provenance.ROOT_OF_S for e in dirichlet):
        raise ConfigError("sigma_dirichlet: root_of_S entries belong in sigma_n")
    complete = g.complete_below
    if complete is None:
        # nothing is known beyond the last supplied value
        complete = min(dirichlet[-1].value, neumann[-1].value)
    spectra = LimitSpectra(tuple(dirichlet), tuple(neumann), complete)
    return GeneralCrystal(g.theta, g.dimension, spectra), spectra


def _require_disk(crystal) -> DiskCrystal:
    if not isinstance(crystal, DiskCrystal):
        raise ConfigError("the oracle needs a disk geometry it can voxelize")
    return crystal


def _alpha_grid(cfg: RunConfig, dimension: int):
    kind = cfg.oracle.alpha
    if kind == "path":
        return zone_path(dimension), len(zone_path(dimension))
    if kind == "interior":
        return interior_samples(dimension), 0
    return default_alpha_grid(dimension), len(zone_path(dimension))


def _certificates(cfg: RunConfig, crystal, spectra):
    certs = []
    for j in cfg.certify.j:
        for kind in cfg.certify.types:
            fn = certify_gap if kind == "gap" else certify_passband
            try:
                certs.append(fn(crystal, spectra, j, cfg.certify.variant))
            except CertificateError as exc:
                raise type(exc)(f"{kind} certificate for j={j}: {exc}") from exc
    return certs


def cmd_spectra(cfg: RunConfig, out: Path) -> int:
    crystal, spectra = build_crystal(cfg)
    write_spectra_csv(out / "sigma_dirichlet.csv", spectra.sigma_dirichlet)
    write_spectra_csv(out / "sigma_N.csv", spectra.sigma_n)
    report = interlacing_check(spectra)
    write_json(out / "interlacing.json", {
        **_header(cfg),
        "interlacing": report.ok,
        "violations": [list(v) for v in report.violations],
        "messages": list(report.messages),
        "complete_below": spectra.complete_below,
        "notes": list(spectra.notes),
    })
    print(f"interlacing: {str(report.ok).lower()}")
    return EXIT_OK if report.ok else EXIT_CHECK


def _certify_doc(cfg: RunConfig, dual: bool) -> dict:
    crystal, spectra = build_crystal(cfg)
    records = []
    for cert in _certificates(cfg, crystal, spectra):
        records.append(certificate_record(cert, cfg.certify.k))
        if dual:
            records.append(certificate_record(_toggle(cert), cfg.certify.k))
    return {**_header(cfg), "certificates": records}


def _toggle(cert):
    # the dual flag does not depend on k; any k above threshold will do
    return dual_certificate(cert, cert.k_threshold * 2.0)


def cmd_certify(cfg: RunConfig, out: Path) -> int:
    doc = _certify_doc(cfg, cfg.certify.dual)
    write_json(out / "certificates.json", doc)
    for rec in doc["certificates"]:
        tag = "dual " if rec["dual"] else ""
        print(f"{tag}{rec['type']} j={rec['j']}: k_threshold={rec['k_threshold']!r}")
    return EXIT_OK


def cmd_dual(cfg: RunConfig, out: Path) -> int:
    crystal, spectra = build_crystal(cfg)
    records = [certificate_record(_toggle(c), cfg.certify.k)
               for c in _certificates(cfg, crystal, spectra)]
    write_json(out / "dual_certificates.json", {**_header(cfg), "certificates": records})
    for rec in records:
        print(f"dual {rec['type']} j={rec['j']}: k_threshold={rec['k_threshold']!r}")
    return EXIT_OK


def _oracle_k(cfg: RunConfig) -> tuple[float, ...]:
    if not cfg.oracle.k:
        raise ConfigError("no contrast values: set [oracle] k or pass --k")
    return cfg.oracle.k


def cmd_bands(cfg: RunConfig, out: Path) -> int:
    crystal, spectra = build_crystal(cfg)
    geom = _require_disk(crystal)
    alphas, path_count = _alpha_grid(cfg, geom.dimension)
    certs = _certificates(cfg, crystal, spectra)
    o = cfg.oracle
    for k in _oracle_k(cfg):
        data = band_sweep(geom, k, alphas, o.m, o.grid, o.dual, workers=o.workers)
        tag = _k_tag(k)
        write_csv(out / f"bands_k{tag}.csv", band_header(geom.dimension),
                  band_rows(data.alphas, data.eigenvalues))
        shaded = []
        for cert in certs:
            if cert.kind != "gap":
                continue
            try:
                lo, hi = (_toggle(cert) if o.dual else cert).interval(k)
            except BelowThreshold:
                continue
            shaded.append((lo, hi, f"certified gap j={cert.j}"))
        write_json(out / f"bands_k{tag}.json", {
            **_header(cfg),
            "k": k,
            "n": data.n,
            "dual": data.dual,
            "alphas": [list(a) for a in data.alphas],
            "bands": [list(b) for b in data.bands()],
            "margins": data.margins,
            "gaps": [
                {"band": g.band, "lower": g.lower, "upper": g.upper,
                 "margin": g.margin, "reported": g.reported}
                for g in data.gaps()
            ],
            "certified": [{"lower": lo, "upper": hi, "label": lab} for lo, hi, lab in shaded],
        })
        ylabel = "k^-1 lambda (dual crystal)" if o.dual else "lambda"
        (out / f"bands_k{tag}.svg").write_text(
            band_diagram(data.eigenvalues, path_count, shaded, f"k = {k:g}, n = {data.n}", ylabel),
            encoding="utf-8",
        )
        print(f"k={k!r}: {len(data.reported_gaps())} gap(s) above the discretisation margin")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out: Path) -> int:
    crystal, spectra = build_crystal(cfg)
    geom = _require_disk(crystal)
    alphas, _ = _alpha_grid(cfg, geom.dimension)
    certs = _certificates(cfg, crystal, spectra)
    o = cfg.oracle
    count = max(o.m, 16)
    limits = discrete_limits(voxelize(geom, o.grid), count)
    reports = []
    for k in _oracle_k(cfg):
        data = band_sweep(geom, k, alphas, o.m, o.grid, o.dual, workers=o.workers)
        neumann = neumann_spectrum(geom, k, o.m, o.grid, o.dual)
        for cert in certs:
            report = verify_certificate(cert, data, neumann, spectra, limits)
            reports.append(report.as_record())
            print(f"k={k!r} {cert.kind} j={cert.j}: {report.status}")
    recips = []
    for k in o.reciprocal_k:
        rep = reciprocal_check(geom, k, alphas, m=min(o.m, 5), n=min(o.grid, 32))
        recips.append(rep.as_record())
        print(f"reciprocal k={k!r}: {'pass' if rep.passed else 'fail'} "
              f"(max relative error {rep.max_relative_error:.2e})")
    failed = any(r["status"] == "fail" for r in reports) or any(not r["passed"] for r in recips)
    write_json(out / "verification.json", {
        **_header(cfg),
        "reports": reports,
        "reciprocal": recips,
        "status": "fail" if failed else "pass",
    })
    return EXIT_CHECK if failed else EXIT_OK


COMMANDS = {
    "spectra": cmd_spectra,
    "certify": cmd_certify,
    "bands": cmd_bands,
    "verify": cmd_verify,
    "dual": cmd_dual,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bandcert",
        description="Certified band gaps and passbands for high-contrast periodic media.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "spectra": "limit spectra CSVs and the interlacing report",
        "certify": "gap and passband certificates as JSON",
        "bands": "oracle band data (CSV, JSON) and an SVG band diagram",
        "verify": "check certificates and the reciprocal relation against the oracle",
        "dual": "certificates for the reciprocal crystal",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--config", required=True, metavar="PATH", help="run configuration (INI)")
        p.add_argument("--out", metavar="DIR", help="output directory (overrides [output] dir)")
        p.add_argument("--variant", choices=("canonical", "paper-literal", "paper_literal"),
                       help="radius formula used for thresholds")
        p.add_argument("--dual", action="store_true", help="also emit / use the dual crystal")
        p.add_argument("--grid", type=int, metavar="N", help="oracle cells per axis")
        p.add_argument("--k", metavar="LIST", help="comma-separated contrasts, overrides config")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        ks = parse_k_list(args.k) if args.k is not None else None
        cfg = with_overrides(cfg, args.out, args.variant, args.dual, args.grid, ks)
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, out)
    except (ConfigError, GeometryError, InvalidGeometry, InsufficientRange, NotSimple) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (SpectralRootError, EigenSolveError, CertificateError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

"""Run configuration read from an INI file.

Grammar (``configparser`` syntax; ``#`` starts a comment, ``;`` only at line start)::

    [geometry]
    type = disk              # or: general
    n_disks = 1
    radius = 0.3
    buffer = 0.45
    dimension = 2
    centers = 0.25 0.25; 0.75 0.75     # optional, points separated by ';'
    # general geometries instead give
    # theta = 0.38
    # sigma_dirichlet = dirichlet.csv  (paths relative to the config file)
    # sigma_n = neumann.csv
    # complete_below = 500.0           (optional)

    [spectra]
    n_max = 8
    k_max = 8
    j_max = 8
    truncation = 200

    [certify]
    j = 1, 2
    types = gap, passband
    variant = canonical      # or: paper_literal
    k = 800, 1600
    dual = false

    [oracle]
    grid = 64
    alpha = default          # default | path | interior
    m = 8
    k = 800
    dual = false
    workers = 1
    reciprocal_k = 2, 10, 100

    [output]
    dir = out

Every section except ``[geometry]`` is optional.
"""
from __future__ import annotations

import configparser
import hashlib
import re
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

from .export import dumps
from .resonance import Variant


class ConfigError(ValueError):
    """A configuration value is missing or violates an invariant."""


@dataclass(frozen=True)
class GeometryConfig:
    kind: str = "disk"
    n_disks: int = 1
    radius: float = 0.0
    buffer: float = 0.0
    dimension: int = 2
    centers: Optional[tuple[tuple[float, ...], ...]] = None
    theta: float = 0.0
    sigma_dirichlet: Optional[str] = None
    sigma_n: Optional[str] = None
    complete_below: Optional[float] = None


@dataclass(frozen=True)
class SpectraConfig:
    n_max: int = 8
    k_max: int = 8
    j_max: int = 8
    truncation: int = 200


@dataclass(frozen=True)
class CertifyConfig:
    j: tuple[int, ...] = (1,)
    types: tuple[str, ...] = ("gap", "passband")
    variant: str = Variant.CANONICAL.value
    k: tuple[float, ...] = ()
    dual: bool = False


@dataclass(frozen=True)
class OracleConfig:
    grid: int = 64
    alpha: str = "default"
    m: int = 8
    k: tuple[float, ...] = ()
    dual: bool = False
    workers: int = 1
    reciprocal_k: tuple[float, ...] = (2.0,)


@dataclass(frozen=True)
class RunConfig:
    geometry: GeometryConfig
    spectra: SpectraConfig = field(default_factory=SpectraConfig)
    certify: CertifyConfig = field(default_factory=CertifyConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    output_dir: str = "out"
    source: Optional[str] = None

    def canonical(self) -> dict:
        data = asdict(self)
        data.pop("source")
        data.pop("output_dir")
        return data

    def digest(self) -> str:
        """SHA-256 of the resolved configuration, ignoring file layout and output location."""
        return hashlib.sha256(dumps(self.canonical()).encode()).hexdigest()


class _Reader:
    def __init__(self, parser: configparser.ConfigParser, text: str, path: str):
        self.parser = parser
        self.lines = text.splitlines()
        self.path = path

    def where(self, section: str, key: str) -> str:
        current = None
        for lineno, line in enumerate(self.lines, start=1):
            stripped = line.strip()
            head = re.match(r"\[(.+)\]", stripped)
            if head:
                current = head.group(1).strip()
            elif current == section and re.match(rf"{re.escape(key)}\s*[=:]", stripped):
                return f"{self.path}:{lineno}"
        return f"{self.path}:[{section}]"

    def fail(self, section: str, key: str, msg: str):
        raise ConfigError(f"{self.where(section, key)}: {section}.{key}: {msg}")

    def has(self, section: str, key: str) -> bool:
        return self.parser.has_option(section, key)

    def raw(self, section: str, key: str, default=None):
        if not self.has(section, key):
            return default
        return self.parser.get(section, key).strip()

    def integer(self, section, key, default=None, minimum=None) -> int:
        raw = self.raw(section, key)
        if raw is None:
            if default is None:
                self.fail(section, key, "required")
            return default
        try:
            value = int(raw)
        except ValueError:
            self.fail(section, key, f"expected an integer, got {raw!r}")
        if minimum is not None and value < minimum:
            self.fail(section, key, f"must be >= {minimum}, got {value}")
        return value

    def real(self, section, key, default=None) -> float:
        raw = self.raw(section, key)
        if raw is None:
            if default is None:
                self.fail(section, key, "required")
            return default
        try:
            return float(raw)
        except ValueError:
            self.fail(section, key, f"expected a number, got {raw!r}")

    def boolean(self, section, key, default=False) -> bool:
        if not self.has(section, key):
            return default
        try:
            return self.parser.getboolean(section, key)
        except ValueError:
            self.fail(section, key, f"expected true/false, got {self.raw(section, key)!r}")

    def words(self, section, key, default=()) -> tuple[str, ...]:
        raw = self.raw(section, key)
        if raw is None:
            return tuple(default)
        return tuple(w.strip() for w in re.split(r"[,\s]+", raw) if w.strip())

    def reals(self, section, key, default=()) -> tuple[float, ...]:
        try:
            return tuple(float(w) for w in self.words(section, key, default))
        except ValueError:
            self.fail(section, key, f"expected a list of numbers, got {self.raw(section, key)!r}")

    def ints(self, section, key, default=()) -> tuple[int, ...]:
        try:
            return tuple(int(w) for w in self.words(section, key, default))
        except ValueError:
            self.fail(section, key, f"expected a list of integers, got {self.raw(section, key)!r}")


def parse_k_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(w) for w in re.split(r"[,\s]+", text.strip()) if w)
    except ValueError:
        raise ConfigError(f"--k: expected a comma-separated list of numbers, got {text!r}") from None
    _check_contrasts("--k", values)
    return values


def _check_contrasts(label: str, values) -> None:
    bad = [v for v in values if not v > 0.0]
    if bad:
        raise ConfigError(f"{label}: contrast values must be positive, got {bad}")


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {path} does not exist")
    text = path.read_text(encoding="utf-8")
    return parse_config(text, str(path), base=path.parent)


def parse_config(text: str, name: str = "<config>", base: Path | None = None) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        parser.read_string(text, source=name)
    except configparser.Error as exc:
        raise ConfigError(f"{name}: {exc}") from None
    r = _Reader(parser, text, name)
    if not parser.has_section("geometry"):
        raise ConfigError(f"{name}: missing [geometry] section")

    kind = (r.raw("geometry", "type", "disk") or "disk").lower()
    if kind == "disk":
        centers = None
        raw_centers = r.raw("geometry", "centers")
        if raw_centers:
            try:
                centers = tuple(
                    tuple(float(x) for x in re.split(r"[,\s]+", p.strip()) if x)
                    for p in raw_centers.split(";") if p.strip()
                )
            except ValueError:
                r.fail("geometry", "centers", f"cannot parse {raw_centers!r}")
        geom = GeometryConfig(
            kind="disk",
            n_disks=r.integer("geometry", "n_disks", 1, minimum=1),
            radius=r.real("geometry", "radius"),
            buffer=r.real("geometry", "buffer"),
            dimension=r.integer("geometry", "dimension", 2),
            centers=centers,
        )
        if not 0 < geom.radius < geom.buffer:
            r.fail("geometry", "buffer",
                   f"need 0 < a < b, got a={geom.radius}, b={geom.buffer}")
    elif kind == "general":
        files = {}
        for key in ("sigma_dirichlet", "sigma_n"):
            raw = r.raw("geometry", key)
            if raw is None:
                r.fail("geometry", key, "required for a general geometry")
            p = Path(raw)
            if base is not None and not p.is_absolute():
                p = base / p
            if not p.is_file():
                r.fail("geometry", key, f"file {p} does not exist")
            files[key] = str(p)
        cb = r.raw("geometry", "complete_below")
        geom = GeometryConfig(
            kind="general",
            dimension=r.integer("geometry", "dimension", 2),
            theta=r.real("geometry", "theta"),
            sigma_dirichlet=files["sigma_dirichlet"],
            sigma_n=files["sigma_n"],
            complete_below=float(cb) if cb is not None else None,
        )
        if not geom.theta > 0:
            r.fail("geometry", "theta", f"must be positive, got {geom.theta}")
    else:
        r.fail("geometry", "type", f"expected 'disk' or 'general', got {kind!r}")
    if geom.dimension not in (2, 3):
        r.fail("geometry", "dimension", f"must be 2 or 3, got {geom.dimension}")

    spectra = SpectraConfig(
        n_max=r.integer("spectra", "n_max", 8, minimum=0),
        k_max=r.integer("spectra", "k_max", 8, minimum=1),
        j_max=r.integer("spectra", "j_max", 8, minimum=1),
        truncation=r.integer("spectra", "truncation", 200, minimum=50),
    )

    variant = r.raw("certify", "variant", Variant.CANONICAL.value).replace("-", "_")
    if variant not in {v.value for v in Variant}:
        r.fail("certify", "variant", f"expected canonical or paper_literal, got {variant!r}")
    types = r.words("certify", "types", ("gap", "passband"))
    if not set(types) <= {"gap", "passband"} or not types:
        r.fail("certify", "types", f"expected gap and/or passband, got {types}")
    js = r.ints("certify", "j", (1,))
    if not js or min(js) < 1:
        r.fail("certify", "j", f"indices must be >= 1, got {js}")
    cert_k = r.reals("certify", "k")
    if any(not v > 0 for v in cert_k):
        r.fail("certify", "k", f"contrast values must be positive, got {cert_k}")
    certify = CertifyConfig(js, types, variant, cert_k, r.boolean("certify", "dual"))

    alpha = r.raw("oracle", "alpha", "default")
    if alpha not in ("default", "path", "interior"):
        r.fail("oracle", "alpha", f"expected default, path or interior, got {alpha!r}")
    oracle_k = r.reals("oracle", "k")
    if any(not v > 0 for v in oracle_k):
        r.fail("oracle", "k", f"contrast values must be positive, got {oracle_k}")
    recip = r.reals("oracle", "reciprocal_k", (2.0,))
    if any(not v > 0 for v in recip):
        r.fail("oracle", "reciprocal_k", f"contrast values must be positive, got {recip}")
    oracle = OracleConfig(
        grid=r.integer("oracle", "grid", 64, minimum=8),
        alpha=alpha,
        m=r.integer("oracle", "m", 8, minimum=1),
        k=oracle_k,
        dual=r.boolean("oracle", "dual"),
        workers=r.integer("oracle", "workers", 1, minimum=1),
        reciprocal_k=recip,
    )
    out = r.raw("output", "dir", "out")
    return RunConfig(geom, spectra, certify, oracle, out, name)


def with_overrides(
    cfg: RunConfig,
    out: str | None = None,
    variant: str | None = None,
    dual: bool = False,
    grid: int | None = None,
    k: tuple[float, ...] | None = None,
) -> RunConfig:
    """Apply command-line overrides; ``--k`` replaces both k lists."""
    certify, oracle = cfg.certify, cfg.oracle
    if variant is not None:
        variant = variant.replace("-", "_")
        if variant not in {v.value for v in Variant}:
            raise ConfigError(f"--variant: expected canonical or paper-literal, got {variant!r}")
        certify = replace(certify, variant=variant)
    if dual:
        certify = replace(certify, dual=True)
        oracle = replace(oracle, dual=True)
    if grid is not None:
        if grid < 8:
            raise ConfigError(f"--grid: must be >= 8, got {grid}")
        oracle = replace(oracle, grid=grid)
    if k is not None:
        _check_contrasts("--k", k)
        certify = replace(certify, k=tuple(k))
        oracle = replace(oracle, k=tuple(k))
    return replace(
        cfg, certify=certify, oracle=oracle, output_dir=out if out is not None else cfg.output_dir
    )

"""Deterministic CSV/JSON writers.

Floats are written with ``repr``, which is the shortest string that
round-trips, and JSON keys are sorted, so equal inputs give equal bytes.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .limit_spectra import SpectralValue

SPECTRA_FIELDS = ("value", "provenance", "order", "radial_index", "multiplicity")


def to_plain(obj: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return to_plain(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path: Path, obj: Any) -> Path:
    path = Path(path)
    path.write_text(dumps(obj), encoding="utf-8")
    return path


def _cell(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, np.integer):
        return str(int(x))
    return str(x)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(x) for x in row])
    return buf.getvalue()


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.write_text(csv_text(header, rows), encoding="utf-8")
    return path


def spectra_rows(entries: Iterable[SpectralValue]) -> list[list[Any]]:
    return [
        [e.value, e.provenance.value, e.order, e.radial_index, e.multiplicity]
        for e in sorted(entries, key=lambda e: e.value)
    ]


def write_spectra_csv(path: Path, entries: Iterable[SpectralValue]) -> Path:
    return write_csv(path, SPECTRA_FIELDS, spectra_rows(entries))


def read_spectra_csv(path: Path) -> list[SpectralValue]:
    """Parse a spectra CSV written by :func:`write_spectra_csv` or by hand.

    Only ``value`` and ``provenance`` are required; rows are returned in
    file order so callers can validate sorting.
    """
    from .limit_spectra import Provenance

    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"value", "provenance"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing column(s) {sorted(missing)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                value = float(row["value"])
                prov = Provenance(row["provenance"].strip())
                order = int(row["order"]) if row.get("order") else None
                radial = int(row["radial_index"]) if row.get("radial_index") else None
                mult = int(row["multiplicity"]) if row.get("multiplicity") else 1
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            out.append(SpectralValue(value, prov, order, radial, mult))
    return out


def band_rows(alphas: Sequence[Sequence[float]], table: np.ndarray) -> list[list[Any]]:
    rows = []
    for col, alpha in enumerate(alphas):
        for j in range(table.shape[0]):
            rows.append([*alpha, j + 1, float(table[j, col])])
    return rows


def band_header(dimension: int) -> list[str]:
    return ["alpha_x", "alpha_y", "alpha_z"][:dimension] + ["j", "lambda"]

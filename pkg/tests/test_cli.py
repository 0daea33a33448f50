import csv
import json
from pathlib import Path

import pytest

from bandcert.cli import EXIT_CHECK, EXIT_INVALID, EXIT_OK, main
from bandcert.config import ConfigError, load_config, parse_config

DISK = Path(__file__).resolve().parents[1] / "configs" / "disk.ini"


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def small_disk(tmp_path, extra=""):
    return write(tmp_path / "run.ini", f"""
[geometry]
radius = 0.3
buffer = 0.45
[spectra]
n_max = 6
k_max = 6
j_max = 6
[certify]
j = 1
k = 800
[oracle]
grid = 16
m = 4
alpha = path
k = 10
reciprocal_k = 2
{extra}
""")


def test_spectra_outputs(tmp_path, capsys):
    assert main(["spectra", "--config", str(DISK), "--out", str(tmp_path)]) == EXIT_OK
    assert "interlacing: true" in capsys.readouterr().out
    for name in ("sigma_dirichlet.csv", "sigma_N.csv"):
        with open(tmp_path / name, newline="") as fh:
            rows = list(csv.DictReader(fh))
        values = [float(r["value"]) for r in rows]
        assert values == sorted(values)
    report = json.loads((tmp_path / "interlacing.json").read_text())
    assert report["interlacing"] is True
    assert len(report["config_hash"]) == 64


def test_certify_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["certify", "--config", str(DISK), "--out", str(out)]) == EXIT_OK
    assert (a / "certificates.json").read_bytes() == (b / "certificates.json").read_bytes()
    doc = json.loads((a / "certificates.json").read_text())
    kinds = [(c["type"], c["j"]) for c in doc["certificates"]]
    assert kinds == [("gap", 1), ("passband", 1), ("gap", 2), ("passband", 2)]


def test_certify_variant_and_dual_flags(tmp_path):
    out = tmp_path / "o"
    args = ["certify", "--config", str(DISK), "--out", str(out), "--variant", "paper-literal", "--dual"]
    assert main(args) == EXIT_OK
    certs = json.loads((out / "certificates.json").read_text())["certificates"]
    assert {c["variant"] for c in certs} == {"paper_literal"}
    assert [c["dual"] for c in certs[:2]] == [False, True]
    primal, dual = certs[0]["interval_at"][-1], certs[1]["interval_at"][-1]
    assert dual["upper"] == pytest.approx(primal["upper"] / primal["k"], rel=1e-15)


def test_dual_command(tmp_path):
    assert main(["dual", "--config", str(DISK), "--out", str(tmp_path)]) == EXIT_OK
    certs = json.loads((tmp_path / "dual_certificates.json").read_text())["certificates"]
    assert all(c["dual"] for c in certs)


def test_malformed_geometry_names_invariant(tmp_path, capsys):
    cfg = write(tmp_path / "bad.ini", "[geometry]\nradius = 0.45\nbuffer = 0.3\n")
    assert main(["spectra", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_INVALID
    err = capsys.readouterr().err
    assert "a < b" in err and "bad.ini:3" in err


@pytest.mark.parametrize("text,fragment", [
    ("[geometry]\nradius = x\nbuffer = 0.4\n", "radius"),
    ("[geometry]\nradius = 0.1\nbuffer = 0.2\n[certify]\nvariant = bogus\n", "variant"),
    ("[spectra]\nn_max = 2\n", "geometry"),
])
def test_config_errors(tmp_path, text, fragment):
    path = write(tmp_path / "c.ini", text)
    with pytest.raises(ConfigError, match=fragment):
        load_config(path)


def test_missing_config_file(tmp_path):
    assert main(["certify", "--config", str(tmp_path / "nope.ini")]) == EXIT_INVALID


def test_config_hash_ignores_output_dir(tmp_path):
    text = DISK.read_text()
    a = parse_config(text, str(DISK), base=DISK.parent)
    b = parse_config(text.replace("dir = out", "dir = elsewhere"), str(DISK), base=DISK.parent)
    assert a.digest() == b.digest()


def test_general_geometry_passthrough(tmp_path):
    write(tmp_path / "d.csv", "value,provenance\n10.0,dirichlet_nonzero_mean\n"
          "25.0,dirichlet_zero_mean\n40.0,dirichlet_nonzero_mean\n60.0,dirichlet_zero_mean\n")
    write(tmp_path / "n.csv", "value,provenance\n15.0,root_of_S\n25.0,dirichlet_zero_mean\n"
          "50.0,root_of_S\n60.0,dirichlet_zero_mean\n")
    cfg = write(tmp_path / "g.ini", "[geometry]\ntype = general\ntheta = 0.4\n"
                "sigma_dirichlet = d.csv\nsigma_n = n.csv\n[certify]\nj = 1\nk = 1e6\n")
    assert main(["certify", "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_OK
    certs = json.loads((tmp_path / "o" / "certificates.json").read_text())["certificates"]
    assert certs[0]["delta_star"] == 10.0 and certs[0]["neighbor"] == 15.0


def test_general_geometry_rejects_unsorted(tmp_path):
    write(tmp_path / "d.csv", "value,provenance\n10.0,dirichlet_nonzero_mean\n5.0,dirichlet_zero_mean\n")
    write(tmp_path / "n.csv", "value,provenance\n15.0,root_of_S\n")
    cfg = write(tmp_path / "g.ini", "[geometry]\ntype = general\ntheta = 0.4\n"
                "sigma_dirichlet = d.csv\nsigma_n = n.csv\n")
    assert main(["spectra", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_INVALID


def test_bands_outputs(tmp_path):
    cfg = small_disk(tmp_path)
    assert main(["bands", "--config", str(cfg), "--out", str(tmp_path), "--k", "1"]) == EXIT_OK
    rows = list(csv.reader(open(tmp_path / "bands_k1p0.csv")))
    assert rows[0] == ["alpha_x", "alpha_y", "j", "lambda"]
    assert len(rows) == 1 + 16 * 4
    svg = (tmp_path / "bands_k1p0.svg").read_text()
    assert svg.startswith("<svg") and 'class="band"' in svg
    assert 'class="certified"' not in svg


def test_bands_shades_certified_gap(tmp_path):
    cfg = small_disk(tmp_path)
    assert main(["bands", "--config", str(cfg), "--out", str(tmp_path), "--k", "800"]) == EXIT_OK
    doc = json.loads((tmp_path / "bands_k800p0.json").read_text())
    assert len(doc["certified"]) == 1
    assert 'class="certified"' in (tmp_path / "bands_k800p0.svg").read_text()


def test_bands_dual_axis(tmp_path):
    cfg = small_disk(tmp_path)
    assert main(["bands", "--config", str(cfg), "--out", str(tmp_path), "--k", "800", "--dual"]) == EXIT_OK
    doc = json.loads((tmp_path / "bands_k800p0.json").read_text())
    assert doc["dual"] is True
    assert doc["certified"][0]["upper"] < 1.0
    assert "dual crystal" in (tmp_path / "bands_k800p0.svg").read_text()


def test_verify_inapplicable_exits_zero(tmp_path, capsys):
    cfg = small_disk(tmp_path)
    assert main(["verify", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "inapplicable" in out and "reciprocal k=2.0: pass" in out
    doc = json.loads((tmp_path / "verification.json").read_text())
    assert doc["status"] == "pass"


@pytest.mark.parametrize("k", ["0", "-2", "x"])
def test_rejects_bad_contrast(tmp_path, k):
    assert main(["spectra", "--config", str(DISK), "--out", str(tmp_path), "--k", k]) == EXIT_INVALID


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_INVALID, EXIT_CHECK}) == 3

import csv
import json

import jsonschema
import numpy as np
import pytest

from lightcone.cli import (
    EXIT_BAD_CONFIG,
    EXIT_CHECK_FAILED,
    EXIT_DEGENERATE,
    EXIT_OK,
    main,
)

try:
    from importlib.resources import files as _files

    SCHEMA = json.loads(
        (_files("lightcone") / "manifest_schema.json").read_text()
    )
except Exception:  # pragma: no cover
    SCHEMA = None


def _load_manifest(path):
    with open(path) as fh:
        data = json.load(fh)
    if SCHEMA is not None:
        jsonschema.validate(data, SCHEMA)
    return data


def test_verify_round_sphere_passes(tmp_path):
    out = tmp_path / "m.json"
    rc = main(["verify", "round-sphere", "--r", "1", "--grid", "16x32", "--out", str(out)])
    assert rc == EXIT_OK
    data = _load_manifest(out)
    assert data["passed"]
    names = {c["name"]: c for c in data["checks"]}
    assert names["round_keta"]["status"] == "PASS"
    assert names["round_keta"]["residual"] < 1e-8
    assert all(c["tolerance"] is not None for c in data["checks"] if c["residual"] is not None)


def test_verify_paraboloid_skips_conjugate_checks(tmp_path):
    out = tmp_path / "m.json"
    rc = main(["verify", "paraboloid", "--grid", "12x12", "--out", str(out)])
    assert rc == EXIT_OK
    data = _load_manifest(out)
    names = {c["name"]: c for c in data["checks"]}
    assert names["nondegeneracy"]["status"] == "SKIP"
    for check in ("conjugate_weingarten", "double_conjugate", "curvature_relation"):
        assert names[check]["status"] == "SKIP"


def test_verify_perturbed_spec_file(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps([[2, 0, 0.04], [3, 1, 0.02]]))
    out = tmp_path / "m.json"
    rc = main(
        ["verify", "perturbed", "--spec", str(spec), "--grid", "12x24", "--out", str(out)]
    )
    assert rc == EXIT_OK
    data = _load_manifest(out)
    names = {c["name"]: c for c in data["checks"]}
    assert names["curvature_relation"]["status"] == "PASS"
    assert names["curvature_relation"]["residual"] < 1e-6


def test_verify_tolerance_override_can_fail(tmp_path):
    out = tmp_path / "m.json"
    rc = main(
        [
            "verify", "round-sphere", "--grid", "8x16",
            "--tol", "codazzi=1e-30", "--out", str(out),
        ]
    )
    assert rc == EXIT_CHECK_FAILED
    data = _load_manifest(out)
    names = {c["name"]: c for c in data["checks"]}
    assert names["codazzi"]["status"] == "FAIL"
    assert names["codazzi"]["tolerance"] == 1e-30


def test_verify_unknown_tolerance_rejected():
    with pytest.raises(SystemExit):
        main(["verify", "round-sphere", "--tol", "bogus=1"])


def test_global_round_sphere(tmp_path):
    out = tmp_path / "g.json"
    rc = main(["global", "round-sphere", "--r", "2", "--grid", "32x64", "--out", str(out)])
    assert rc == EXIT_OK
    data = _load_manifest(out)
    rep = data["report"]
    assert abs(rep["ii_eta_area"] - 2 * np.pi) < 1e-6
    assert abs(rep["lambda1"] - 0.5) < 0.5 * 2e-2
    assert abs(rep["gauss_bonnet"] - 4 * np.pi) < 1e-6
    assert rep["bound_rhs"] >= rep["lambda1"]


def test_global_rejects_noncompact():
    assert main(["global", "cylinder"]) == EXIT_DEGENERATE


def test_global_rejects_degenerate():
    assert main(["global", "paraboloid", "--grid", "8x16"]) == EXIT_DEGENERATE


def test_search_roundtrip_and_determinism(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        json.dumps(
            {
                "degree_max": 2,
                "n_starts": 1,
                "n_theta": 8,
                "n_phi": 16,
                "max_iter": 60,
            }
        )
    )
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    rc = main(["search", "--config", str(cfg), "--seed", "7", "--out", str(out1)])
    assert rc == EXIT_OK
    rc = main(["search", "--config", str(cfg), "--seed", "7", "--out", str(out2)])
    assert rc == EXIT_OK
    t1 = (tmp_path / "r1_trace.csv").read_bytes()
    t2 = (tmp_path / "r2_trace.csv").read_bytes()
    assert t1 == t2
    rep = json.loads(out1.read_text())
    assert rep["config"]["seed"] == 7
    assert rep["results"][0]["classification"] in ("umbilical", "inconclusive")


def test_search_malformed_config(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"degree_max": 2,,}')
    rc = main(["search", "--config", str(bad)])
    assert rc == EXIT_BAD_CONFIG
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_search_unknown_key_rejected(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"nope": 1}')
    assert main(["search", "--config", str(bad)]) == EXIT_BAD_CONFIG


def test_export_round_sphere(tmp_path):
    out = tmp_path / "nodes.csv"
    rc = main(["export", "round-sphere", "--grid", "8x16", "--out", str(out)])
    assert rc == EXIT_OK
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["theta", "phi", "K", "Keta", "d", "gap_low", "gap_high", "psi0"]
    assert len(rows) == 1 + 8 * 16
    for row in rows[1:]:
        assert float(row[2]) == pytest.approx(1.0, abs=1e-10)
        assert float(row[3]) == pytest.approx(2.0, abs=1e-8)
        assert float(row[4]) == pytest.approx(0.25, abs=1e-12)


def test_export_header_contract_for_plane_charts(tmp_path):
    out = tmp_path / "cyl.csv"
    rc = main(["export", "cylinder", "--grid", "6x12", "--out", str(out)])
    assert rc == EXIT_OK
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["theta", "phi", "K", "Keta", "d", "gap_low", "gap_high", "psi0"]
    assert len(rows) == 1 + 6 * 12


def test_grid_parser_rejects_garbage():
    with pytest.raises(SystemExit):
        main(["verify", "round-sphere", "--grid", "64by128"])

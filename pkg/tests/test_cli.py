import csv
import json

import numpy as np
import pytest

import oracles
from qreact.cli import CSV_TAG, SWEEP_COLUMNS, main, parse_angles
from qreact.qstate import make_state, save_density_matrix


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0] == CSV_TAG
    return list(csv.DictReader(lines[1:]))


def run_json(capsys, argv):
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_parse_angles():
    assert parse_angles("0,0;pi/2,pi") == [(0.0, 0.0), (np.pi / 2, np.pi)]


def test_sweep_werner2_normalized(tmp_path):
    out = tmp_path / "w2.csv"
    assert main(["sweep", "--family", "werner2", "--steps", "21", "--normalize", "--grid-points", "32", "-o", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == SWEEP_COLUMNS
    assert len(rows) == 21
    assert float(rows[-1]["reactivity_norm"]) == 1.0
    assert float(rows[0]["reactivity_norm"]) == 0.0
    norm = [float(r["reactivity_norm"]) for r in rows]
    assert all(b > a for a, b in zip(norm, norm[1:]))


def test_sweep_ghz_above_w(tmp_path):
    args = ["--steps", "6", "--method", "mc", "--mc-samples", "3000", "--seed", "11"]
    assert main(["sweep", "--family", "werner3_ghz", "-o", str(tmp_path / "g.csv"), *args]) == 0
    assert main(["sweep", "--family", "werner3_w", "-o", str(tmp_path / "w.csv"), *args]) == 0
    g = [float(r["reactivity_raw"]) for r in read_csv(tmp_path / "g.csv")]
    w = [float(r["reactivity_raw"]) for r in read_csv(tmp_path / "w.csv")]
    assert all(a >= b for a, b in zip(g, w))


def test_sweep_werner4_monotone_json(tmp_path):
    out = tmp_path / "w4.json"
    assert main(["sweep", "--family", "werner4_ghz", "--steps", "11", "--mc-samples", "2000", "--format", "json", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["integrator"]["method"] == "monte_carlo"
    r = [row["reactivity_raw"] for row in doc["rows"]]
    assert len(r) == 11 and all(b > a for a, b in zip(r, r[1:]))


def test_sweep_bit_identical(tmp_path):
    args = ["sweep", "--family", "werner3_ghz", "--steps", "5", "--mc-samples", "2000", "--seed", "3", "--normalize"]
    main([*args, "-o", str(tmp_path / "a.csv")])
    main([*args, "-o", str(tmp_path / "b.csv")])
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_config_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"method": "mc", "samples": 50, "seed": 1}))
    out = tmp_path / "o.json"
    main(["sweep", "--family", "werner2", "--steps", "2", "--config", str(cfg), "--mc-samples", "70", "--format", "json", "-o", str(out)])
    doc = json.loads(out.read_text())
    assert doc["integrator"]["mc_samples"] == 70
    assert doc["integrator"]["rng_seed"] == 1
    assert doc["integrator"]["method"] == "monte_carlo"


def test_geometry_ghz_zero(capsys):
    doc = run_json(capsys, ["geometry", "--family", "ghz3", "--angles", "0,0;0,0;0,0"])
    assert doc["distances"] == {"AB": 0.0, "AC": 0.0, "BC": 0.0}


def test_geometry_ghz_closed_forms(capsys):
    doc = run_json(capsys, ["geometry", "--family", "ghz3", "--angles", "0,0;pi/4,0;pi/4,0"])
    expected = oracles.ghz_entropies(np.pi / 4, np.pi / 4)
    for key, val in expected.items():
        assert doc["entropies"][key] == pytest.approx(val, abs=1e-12)


def test_geometry_werner_zero_and_state_file(capsys, tmp_path):
    doc = run_json(capsys, ["geometry", "--family", "werner2", "--lambda", "0", "--angles", "1,2;0.3,4"])
    assert doc["distances"]["AB"] == pytest.approx(2.0, abs=1e-12)
    path = tmp_path / "rho.json"
    save_density_matrix(make_state("werner4_ghz", 0.5), path)
    doc = run_json(capsys, ["geometry", "--state-file", str(path), "--angles", "0,0;1,0;2,0;3,0"])
    assert set(doc["volumes"]) == {"ABCE"}


def test_geometry_dimension_mismatch():
    assert main(["geometry", "--family", "ghz3", "--angles", "0,0;0,0"]) == 1


def test_compare(tmp_path):
    out = tmp_path / "cmp.csv"
    assert main(["compare", "--steps", "11", "--grid-points", "32", "-o", str(out)]) == 0
    rows = read_csv(out)
    lam = [float(r["lambda"]) for r in rows]
    assert 1 / 3 in lam
    third = rows[lam.index(1 / 3)]
    assert float(third["concurrence"]) == 0.0
    assert float(third["discord"]) > 0 and float(third["reactivity_norm"]) > 0
    for col in ("concurrence", "discord", "reactivity_norm"):
        vals = [float(r[col]) for r in rows]
        assert vals[0] == pytest.approx(0.0, abs=1e-12)
        assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_compare_failure_leaves_no_file(tmp_path):
    out = tmp_path / "cmp.csv"
    assert main(["compare", "--lambdas", "0.2,0.5", "-o", str(out)]) == 1
    assert list(tmp_path.iterdir()) == []


def test_schumacher_search(capsys):
    doc = run_json(capsys, ["schumacher"])
    assert doc["violation"] > 0.01


def test_schumacher_explicit_and_product(capsys):
    doc = run_json(capsys, ["schumacher", "--angles", "1,0;1,0;1,0;1,0"])
    assert doc["violation"] <= 0
    doc = run_json(capsys, ["schumacher", "--family", "product_zero"])
    assert doc["violation"] <= 0


def test_exit_codes(tmp_path):
    assert main(["sweep", "--family", "nope"]) == 1
    assert main(["sweep", "--family", "werner2", "--steps", "1"]) == 1
    assert main(["sweep", "--family", "werner2", "--config", str(tmp_path / "missing.json")]) == 2
    assert main(["sweep", "--family", "werner2", "--grid-points", "4", "-o", str(tmp_path / "no" / "x.csv")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["sweep"])
    assert exc.value.code == 1

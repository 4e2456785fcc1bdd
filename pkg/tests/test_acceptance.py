"""Exit criteria for the package, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per criterion
in the terminal summary.
"""
import time
from itertools import permutations

import numpy as np
import pytest

import oracles
from qreact.baselines import concurrence, discord, mutual_information
from qreact.cli import main
from qreact.infogeo import entropy_table, geometry_report, info_area, info_distance, info_volume
from qreact.qstate import JointDistribution, MeasurementSetting, joint_distribution, joint_probabilities, make_state
from qreact.reactivity import IntegratorConfig, mean_geometry, reactivity, search_schumacher

SEED = 2019
LAMBDAS_21 = [round(0.05 * k, 2) for k in range(21)]


def read_rows(path, cast=float):
    import csv

    lines = path.read_text().splitlines()
    assert lines[0] == "# qreact-csv v1"
    return [{k: cast(v) for k, v in row.items()} for row in csv.DictReader(lines[1:])]


@pytest.fixture(scope="module")
def outdir(tmp_path_factory):
    return tmp_path_factory.mktemp("acceptance")


def compare_args(path):
    return ["compare", "--steps", "21", "--grid-points", "128", "-o", str(path)]


def three_qubit_args(family, path):
    return ["sweep", "--family", family, "--lambda-start", "0", "--lambda-end", "1", "--steps", "11",
            "--method", "mc", "--mc-samples", "200000", "--seed", str(SEED), "-o", str(path)]


def four_qubit_args(path):
    return ["sweep", "--family", "werner4_ghz", "--steps", "11", "--method", "mc",
            "--mc-samples", "100000", "--seed", str(SEED), "--normalize", "-o", str(path)]


@pytest.mark.criterion(1, "GHZ closed forms on a 20x20 grid within 1e-10 (< 5 s)")
def test_c1_ghz_analytic_oracle():
    start = time.perf_counter()
    rho = make_state("ghz3")
    grid = np.linspace(0, np.pi, 20)
    tb, tc = (a.ravel() for a in np.meshgrid(grid, grid, indexing="ij"))
    angles = np.zeros((400, 3, 2))
    angles[:, 1, 0], angles[:, 2, 0] = tb, tc
    probs = joint_probabilities(rho, angles)
    t = entropy_table(probs, 3)
    names = {"AB": (0, 1), "AC": (0, 2), "BC": (1, 2), "ABC": (0, 1, 2)}
    worst = 0.0
    for k in range(400):
        for bits, val in oracles.ghz_joint(tb[k], tc[k]).items():
            worst = max(worst, abs(probs[k][bits] - val))
        expected = oracles.ghz_entropies(tb[k], tc[k])
        for name, subset in names.items():
            worst = max(worst, abs(t[subset][k] - expected[name]))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-10
    assert elapsed < 5


@pytest.mark.criterion(2, "forced endpoints: <D>=2 at lambda=0, C(singlet)=1, I(singlet)=2, discord(product)=0")
def test_c2_forced_endpoints():
    rep = mean_geometry(make_state("werner2", 0.0), IntegratorConfig(method="grid", grid_points_per_angle=128))
    assert abs(rep.distances[(0, 1)] - 2.0) <= 1e-6
    assert abs(concurrence(make_state("singlet")) - 1.0) <= 1e-10
    assert abs(mutual_information(make_state("singlet")) - 2.0) <= 1e-10
    assert abs(discord(make_state("product_zero"))) <= 1e-9


@pytest.mark.criterion(3, "concurrence(werner2) = max(0, (3l-1)/2) within 1e-10 on 21 lambdas (< 1 s)")
def test_c3_concurrence_curve():
    start = time.perf_counter()
    for lam in LAMBDAS_21:
        assert abs(concurrence(make_state("werner2", lam)) - max(0.0, (3 * lam - 1) / 2)) <= 1e-10
    assert concurrence(make_state("werner2", 1 / 3)) == 0.0
    assert time.perf_counter() - start < 1


@pytest.mark.criterion(4, "Werner comparison: reactivity/discord > 0 below 1/3, concurrence 0, all monotone (< 2 min)")
def test_c4_werner_comparison_shape(outdir):
    start = time.perf_counter()
    assert main(compare_args(outdir / "compare.csv")) == 0
    elapsed = time.perf_counter() - start
    rows = read_rows(outdir / "compare.csv")
    lam = [r["lambda"] for r in rows]
    assert set(LAMBDAS_21) <= {round(x, 12) for x in lam}
    assert any(abs(x - 1 / 3) <= 1e-15 for x in lam)
    for r in rows:
        if 0 < r["lambda"] <= 1 / 3:
            assert r["reactivity_norm"] > 0 and r["discord"] > 0
            assert r["concurrence"] == 0.0
    for col in ("reactivity_norm", "discord", "concurrence"):
        vals = [r[col] for r in rows]
        assert all(b - a >= -1e-9 for a, b in zip(vals, vals[1:])), col
        assert abs(vals[0]) <= 1e-9, col
    norm = [r["reactivity_norm"] for r in rows]
    assert all(b > a for a, b in zip(norm, norm[1:]))
    assert norm[-1] == 1.0
    assert abs(rows[-1]["discord"] - 1.0) <= 1e-9
    assert abs(rows[-1]["concurrence"] - 1.0) <= 1e-9
    assert elapsed < 120


@pytest.mark.criterion(5, "three-qubit curves: GHZ >= W pointwise, both strictly increasing (2e5 shared MC samples, < 15 min)")
def test_c5_three_qubit_ordering(outdir):
    start = time.perf_counter()
    assert main(three_qubit_args("werner3_ghz", outdir / "ghz3.csv")) == 0
    assert main(three_qubit_args("werner3_w", outdir / "w3.csv")) == 0
    elapsed = time.perf_counter() - start
    ghz = read_rows(outdir / "ghz3.csv", str)
    w = read_rows(outdir / "w3.csv", str)
    g_r = [float(r["reactivity_raw"]) for r in ghz]
    w_r = [float(r["reactivity_raw"]) for r in w]
    assert all(int(r["samples"]) == 200000 for r in ghz + w)
    for g, ww, row in zip(g_r, w_r, ghz):
        if float(row["lambda"]) >= 0.1:
            assert g >= ww
    for curve in (g_r, w_r):
        assert all(b > a for a, b in zip(curve, curve[1:]))
    assert elapsed < 15 * 60


@pytest.mark.criterion(6, "four-qubit curve: werner4_ghz strictly increasing, normalized endpoints exactly 0 and 1 (< 30 min)")
def test_c6_four_qubit_curve(outdir):
    start = time.perf_counter()
    assert main(four_qubit_args(outdir / "ghz4.csv")) == 0
    elapsed = time.perf_counter() - start
    rows = read_rows(outdir / "ghz4.csv")
    assert len(rows) == 11
    raw = [r["reactivity_raw"] for r in rows]
    assert all(b > a for a, b in zip(raw, raw[1:]))
    assert rows[0]["reactivity_norm"] == 0.0 and rows[-1]["reactivity_norm"] == 1.0
    assert elapsed < 30 * 60


@pytest.mark.criterion(7, "metric axioms, area/volume bounds and permutation symmetry")
def test_c7_metric_axioms():
    rng = np.random.default_rng(SEED)
    tables = [entropy_table(JointDistribution(rng.dirichlet(np.ones(8)).reshape(2, 2, 2))) for _ in range(500)]
    for family in ("werner2", "werner3_ghz", "werner3_w", "werner4_ghz"):
        for _ in range(50):
            rho = make_state(family, rng.uniform())
            angles = [(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)) for _ in range(rho.dim_qubits)]
            tables.append(entropy_table(joint_distribution(rho, MeasurementSetting(angles))))
    for t in tables:
        d = t.num_vars
        for a, b in permutations(range(d), 2):
            assert info_distance(t, a, b) == info_distance(t, b, a)
            assert info_distance(t, a, b) >= -1e-12
        for a, b, c in permutations(range(d), 3):
            assert info_distance(t, a, c) <= info_distance(t, a, b) + info_distance(t, b, c) + 1e-10
        rep = geometry_report(t)
        for k, area in rep.areas.items():
            assert -1e-12 <= area <= 3.0 + 1e-12
            for perm in permutations(k):
                assert abs(info_area(t, *perm) - area) <= 1e-14
        for k, vol in rep.volumes.items():
            assert -1e-12 <= vol <= 4.0 + 1e-12
            for perm in permutations(k):
                assert abs(info_volume(t, perm) - vol) <= 1e-14


@pytest.mark.criterion(8, "werner2(0.7) <D_AB>: 128x128 grid vs 2e5 MC within 3 standard errors")
def test_c8_integrator_cross_check():
    rho = make_state("werner2", 0.7)
    grid = reactivity(rho, IntegratorConfig(method="grid", grid_points_per_angle=128))
    mc = reactivity(rho, IntegratorConfig(method="monte_carlo", mc_samples=200000, rng_seed=SEED))
    assert abs(grid.mean_denominator - mc.mean_denominator) <= 3 * mc.denominator_stderr


@pytest.mark.criterion(9, "Schumacher quadrilateral on the singlet: violation > 0.01 bits (< 2 min)")
def test_c9_schumacher():
    start = time.perf_counter()
    quad = search_schumacher(make_state("singlet"))
    assert quad.violation > 0.01
    assert time.perf_counter() - start < 120


@pytest.mark.criterion(10, "criteria 4-6 rerun with identical seeds give bit-identical CSV")
def test_c10_determinism(outdir, tmp_path):
    runs = {
        "compare.csv": compare_args,
        "ghz3.csv": lambda p: three_qubit_args("werner3_ghz", p),
        "w3.csv": lambda p: three_qubit_args("werner3_w", p),
        "ghz4.csv": four_qubit_args,
    }
    for name, args in runs.items():
        first = outdir / name
        if not first.exists():
            assert main(args(first)) == 0
        assert main(args(tmp_path / name)) == 0
        assert first.read_bytes() == (tmp_path / name).read_bytes(), name

import csv
import json

import pytest

from phantomsim.cli import main
from phantomsim.graph import load_edge_list
from phantomsim.experiment import HEADERS


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture
def er_file(tmp_path):
    path = tmp_path / "g.txt"
    assert run("generate", "--model", "er", "--nodes", 400, "--p", 0.02, "--seed", 3, "--out", path) == 0
    return path


def rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_generate_both_models(tmp_path, er_file):
    g = load_edge_list(er_file)
    assert g.node_count == 400
    t = tmp_path / "t.txt"
    assert run("--seed", 1, "generate", "--model", "toshk", "--nodes", 300, "--k", 8, "--pneighbor", 0.9,
               "--out", t) == 0
    assert abs(2 * load_edge_list(t).edge_count / 300 - 8) < 1.5


def test_generate_er_needs_p(tmp_path, capsys):
    assert run("generate", "--model", "er", "--nodes", 10, "--out", tmp_path / "x") == 1
    assert "--p" in capsys.readouterr().err


def test_inspect(er_file, capsys):
    assert run("inspect", "--graph", er_file) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["node_count"] == 400 and rep["estimated"] is False


def test_pipeline(tmp_path, er_file):
    view, seeds, out = tmp_path / "v.view", tmp_path / "s.seeds", tmp_path / "d.csv"
    assert run("sample", "--graph", er_file, "--rho", 0.25, "--seed", 4, "--sample-id", 2, "--out", view) == 0
    lines = view.read_text().split("\n")
    assert lines[0] == "0.25 2" and len([x for x in lines[1:] if x]) == 100
    assert run("seed", "--graph", er_file, "--view", view, "--gamma", 0.02, "--p", 0.1, "--out", seeds) == 0
    seed_lines = seeds.read_text().splitlines()
    assert seed_lines[0].startswith("# gamma 0.02") and len(seed_lines) == 1 + 6
    hidden = set(lines[1:])
    assert not hidden & set(seed_lines[1:])

    assert run("diffuse", "--graph", er_file, "--seeds", seeds, "--p", 0.1, "--runs", 20, "--out", out) == 0
    plain = rows(out)
    assert list(plain[0]) == ["run_id", "sigma", "horizon"] and len(plain) == 20

    assert run("diffuse", "--graph", er_file, "--seeds", seeds, "--view", view, "--p", 0.1, "--runs", 20,
               "--out", out) == 0
    full = rows(out)
    assert list(full[0]) == ["run_id", "sample_id", "rho", "gamma", "sigma", "sigma_o", "sigma_ph", "sigma_h",
                             "sigma_p", "horizon"]
    for a, b in zip(plain, full):
        assert a["sigma"] == b["sigma"] and b["sample_id"] == "2" and b["gamma"] == "0.02"
        total = float(b["sigma_o"]) + float(b["sigma_ph"]) + float(b["sigma_h"])
        assert total == pytest.approx(float(b["sigma"]))


def test_correct(tmp_path, capsys):
    prof = tmp_path / "p.csv"
    prof.write_text("step,size,mean_degree\n0,1,0\n1,4,10\n2,2,0\n")
    assert run("correct", "--profile", prof, "--rho", 0.5, "--p", 0.01, "--method", "both") == 0
    out = list(csv.DictReader(capsys.readouterr().out.splitlines()))
    total = {r["method"]: float(r["sigma_hat"]) for r in out if r["step"] == "total"}
    assert total["rece"] == pytest.approx(13.4)
    assert total["sice"] == pytest.approx(1 + 6 / 0.5)
    assert [r["step"] for r in out if r["method"] == "rece"] == ["0", "1", "2", "total"]
    assert run("correct", "--profile", prof, "--rho", 0.5, "--method", "sice", "--literal") == 0
    assert "literal" in capsys.readouterr().out


def test_experiment_cli_determinism(tmp_path, er_file):
    cfg = tmp_path / "c.txt"
    cfg.write_text(f"graph = {er_file}\nrho_list = 0.1 0.3\ngamma_list = 0.01\np = 0.1\nv = 3\nr = 5\n")
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("experiment", "--config", cfg, "--seed", 7, "--out-dir", a) == 0
    assert run("--workers", 2, "--seed", 7, "--out-dir", b, "experiment", "--config", cfg) == 0
    for name in HEADERS:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert len(rows(a / "relative_error.csv")) == 2


def test_experiment_overrides(tmp_path):
    out = tmp_path / "o"
    assert run("experiment", "--model", "er", "--nodes", 200, "--p-edge", 0.05, "--rho-list", "0.2",
               "--gamma-list", "0.05", "--v", 2, "--r", 3, "--p", 0.2, "--out-dir", out) == 0
    r = rows(out / "relative_error.csv")
    assert len(r) == 1 and r[0]["v"] == "2" and r[0]["r"] == "3"


def test_errors_reported(tmp_path, capsys):
    assert run("inspect", "--graph", tmp_path / "missing.txt") == 1
    assert "error" in capsys.readouterr().err
    assert run("experiment", "--nodes", 10) == 1

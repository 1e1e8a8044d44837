import csv
import json
import subprocess
import sys

import pytest

from asymlink.cli import main

T1_TSV = "P1\ta;b;z\nP2\tb;c\nP3\tz;c\nP4\ta;z\n"


@pytest.fixture(scope="module")
def model_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("model")
    assert main(["simulate", "--stop-nodes", "3000", "--seed", "1", "--out", str(out)]) == 0
    return out


def test_ingest_t1(tmp_path, capsys):
    src = tmp_path / "t1.tsv"
    src.write_text(T1_TSV)
    assert main(["ingest", str(src), "--out", str(tmp_path / "g")]) == 0
    assert capsys.readouterr().out.startswith("4 nodes, 5 edges")
    for name in ("nodes.tsv", "edges.tsv", "papers.tsv", "pmf.tsv", "run.json"):
        assert (tmp_path / "g" / name).is_file()


def test_ingest_empty(tmp_path, capsys):
    src = tmp_path / "empty.tsv"
    src.write_text("")
    assert main(["ingest", str(src), "--out", str(tmp_path / "g")]) == 0
    assert capsys.readouterr().out.startswith("0 nodes, 0 edges")


def test_ingest_lcc_and_bipartite(tmp_path, capsys):
    src = tmp_path / "b.tsv"
    src.write_text("P1\ta\nP1\tb\nP1\tc\nP2\td\nP2\te\n")
    assert main(["ingest", str(src), "--format", "bipartite", "--lcc", "--out", str(tmp_path / "g")]) == 0
    assert capsys.readouterr().out.strip() == "3 nodes, 3 edges, lcc fraction 0.6000"


def test_ingest_parse_error_exit_2(tmp_path, capsys):
    src = tmp_path / "bad.tsv"
    src.write_text("P1\ta;b\nP2 c\n")
    assert main(["ingest", str(src), "--out", str(tmp_path / "g")]) == 2
    assert "line 2" in capsys.readouterr().err


def test_simulate_is_byte_identical(tmp_path):
    for name in ("a", "b"):
        assert main(["simulate", "--stop-nodes", "2000", "--seed", "1", "--out", str(tmp_path / name)]) == 0
    for f in ("edges.tsv", "nodes.tsv", "papers.tsv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_simulate_c_zero(tmp_path):
    assert main(["simulate", "--c", "0", "--stop-nodes", "200", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "edges.tsv").read_text() == ""


def test_simulate_realizations_and_config(tmp_path):
    cfg = tmp_path / "m.cfg"
    cfg.write_text("stop_nodes = 500\nG = 5\n")
    assert main(["simulate", "--config", str(cfg), "--seed", "4", "--realizations", "2",
                 "--out", str(tmp_path / "o")]) == 0
    for seed in (4, 5):
        meta = json.loads((tmp_path / "o" / f"realization_{seed}" / "model.json").read_text())
        assert meta["seed"] == seed and meta["nodes"] >= 500
    run = json.loads((tmp_path / "o" / "run.json").read_text())
    assert run["params"]["config"]["G"] == 5
    assert main(["simulate", "--c", "2", "--out", str(tmp_path / "x")]) == 2


def test_predict(model_dir, tmp_path, capsys):
    out = tmp_path / "p"
    assert main(["predict", "--graph", str(model_dir), "--scores", "jc,aa", "--d", "100",
                 "--seeds", "1..5", "--out", str(out)]) == 0
    with open(out / "summary.csv") as fh:
        rows = {r["kind"]: r for r in csv.DictReader(fh)}
    assert float(rows["jc"]["auc"]) < float(rows["aa"]["auc"])
    assert rows["aa"]["seed_count"] == "5" and rows["aa"]["d"] == "100"
    assert (out / "roc.csv").is_file() and (out / "pr.csv").is_file()


def test_predict_errors(model_dir, tmp_path, capsys):
    assert main(["predict", "--graph", str(model_dir), "--scores", "jc,nope", "--out", str(tmp_path)]) == 2
    assert "wat3" in capsys.readouterr().err
    assert main(["predict", "--graph", str(model_dir), "--scores", "jc", "--d", "0", "--out", str(tmp_path)]) == 2
    assert main(["predict", "--graph", str(tmp_path / "missing"), "--scores", "jc", "--out", str(tmp_path)]) == 2
    assert main(["predict", "--graph", str(model_dir), "--scores", "jc", "--d", "10000000",
                 "--out", str(tmp_path)]) == 2


def test_analyze(model_dir, tmp_path, capsys):
    out = tmp_path / "a"
    assert main(["analyze", "--graph", str(model_dir), "--which", "distributions", "--out", str(out)]) == 0
    names = sorted(p.name for p in out.glob("dist_*.csv"))
    assert names == [f"dist_{x}.csv" for x in sorted("lpkswv")]
    assert (out / "dist_k.csv").read_text().splitlines()[0] == "x,density,count"
    assert main(["analyze", "--graph", str(model_dir), "--which", "qv-relation", "--out", str(out)]) == 0
    assert "beta" in capsys.readouterr().out
    with open(out / "fit.csv") as fh:
        fit = next(csv.DictReader(fh))
    assert 0 < float(fit["beta"]) < 2
    assert (out / "relation_v_q.csv").read_text().splitlines()[0] == "x,y_mean,count"
    assert main(["analyze", "--graph", str(tmp_path / "none"), "--out", str(out)]) == 2


def test_metrics_and_replay(model_dir, tmp_path):
    out = tmp_path / "m"
    assert main(["metrics", "--graph", str(model_dir), "--out", str(out)]) == 0
    first = (out / "edges-metrics.csv").read_bytes()
    assert first.startswith(b"i,j,k_i,k_j,n,O,Q,w,w_star,v\n")
    (out / "edges-metrics.csv").unlink()
    assert main(["replay", str(out / "run.json")]) == 0
    assert (out / "edges-metrics.csv").read_bytes() == first


def test_module_entry_point(tmp_path):
    src = tmp_path / "t1.tsv"
    src.write_text(T1_TSV)
    res = subprocess.run([sys.executable, "-m", "asymlink", "ingest", str(src), "--out", str(tmp_path / "g")],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("4 nodes, 5 edges")
    res = subprocess.run([sys.executable, "-m", "asymlink", "frobnicate"], capture_output=True, text=True)
    assert res.returncode == 2

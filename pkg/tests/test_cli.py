import csv
import subprocess
import sys

import pytest

from tparwr import dump_edge_list, generate_block_graph
from tparwr.cli import main


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="module")
def edge_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "block.txt"
    dump_edge_list(generate_block_graph(100, 500, 5, 0.85, rng_seed=1), path)
    return path


def run(*argv):
    return main([str(a) for a in argv])


def test_preprocess_and_query(edge_file, tmp_path, capsys):
    art = tmp_path / "a.tpa"
    assert run("preprocess", "--graph", edge_file, "--T", 10, "--out", art) == 0
    out = capsys.readouterr().out
    assert "artifact_bytes=848" in out and "preprocess_ms=" in out
    assert art.stat().st_size == 44 + 8 * 100 + 4

    assert run("query", "--graph", edge_file, "--artifact", art, "--seed", 3, "--S", 5,
               "--top-k", 5, "--exact") == 0
    out = capsys.readouterr().out
    ranks = [line.split("\t") for line in out.splitlines() if line.count("\t") == 2]
    assert [r[0] for r in ranks] == ["1", "2", "3", "4", "5"]
    assert ranks[0][1] == "3"
    assert "online_ms=" in out and "exact_ms=" in out and "total" in out

    assert run("query", "--graph", edge_file, "--artifact", art, "--seed", 3, "--na",
               "--exact") == 0
    assert "tpa_na_l1_error=" in capsys.readouterr().out


def test_query_split_violation_is_usage_error(edge_file, tmp_path):
    art = tmp_path / "a.tpa"
    run("preprocess", "--graph", edge_file, "--T", 6, "--out", art)
    with pytest.raises(SystemExit) as exc:
        run("query", "--graph", edge_file, "--artifact", art, "--seed", 0, "--S", 6)
    assert exc.value.code != 0


@pytest.mark.parametrize("cmd", [
    ["evaluate", "--S", 5, "--T", 5],
    ["sweep", "--vary", "S", "--range", "3..8", "--fixed", 6],
    ["sweep", "--vary", "T", "--range", "2..4", "--fixed", 5],
])
def test_bad_split_rejected_everywhere(edge_file, tmp_path, cmd):
    with pytest.raises(SystemExit) as exc:
        run(*cmd, "--graph", edge_file, "--out", tmp_path / "x.csv")
    assert exc.value.code == 2


def test_errors_exit_nonzero(edge_file, tmp_path, capsys):
    art = tmp_path / "a.tpa"
    assert run("preprocess", "--graph", tmp_path / "missing.txt", "--out", art) == 1
    assert "tparwr: error:" in capsys.readouterr().err
    run("preprocess", "--graph", edge_file, "--out", art)
    assert run("query", "--graph", edge_file, "--artifact", art, "--seed", 12345) == 1
    other = tmp_path / "other.txt"
    dump_edge_list(generate_block_graph(100, 500, 5, 0.85, rng_seed=2), other)
    assert run("query", "--graph", other, "--artifact", art, "--seed", 0) == 1
    assert "fingerprint" in capsys.readouterr().err
    art.write_bytes(art.read_bytes()[:-1])
    assert run("query", "--graph", edge_file, "--artifact", art, "--seed", 0) == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n1 x\n")
    assert run("preprocess", "--graph", bad, "--out", art) == 1
    assert "line 2" in capsys.readouterr().err


def test_evaluate_csv(edge_file, tmp_path):
    out, per_seed = tmp_path / "eval.csv", tmp_path / "seeds.csv"
    assert run("evaluate", "--graph", edge_file, "--S", 5, "--T", 15, "--num-seeds", 8,
               "--k", 10, 50, "--out", out, "--per-seed", per_seed) == 0
    (row,) = read_csv(out)
    assert float(row["total_bound"]) == pytest.approx(0.8874, abs=5e-5)
    assert float(row["neighbor_bound"]) == pytest.approx(0.7127, abs=5e-5)
    assert float(row["stranger_bound"]) == pytest.approx(0.1747, abs=5e-5)
    assert row["num_seeds"] == "8" and "recall@50" in row and "na_recall@10" in row
    assert 0 < float(row["total_ratio"]) < 1
    assert len(read_csv(per_seed)) == 8
    timing = read_csv(tmp_path / "eval.timing.csv")[0]
    assert {"preprocess_ms", "mean_online_ms", "mean_exact_ms", "artifact_bytes"} <= set(timing)


def test_sweep_t_trends(edge_file, tmp_path):
    out = tmp_path / "sweep.csv"
    assert run("sweep", "--graph", edge_file, "--vary", "T", "--range", "6..20", "--fixed", 5,
               "--num-seeds", 10, "--out", out) == 0
    rows = read_csv(out)
    assert [int(r["T"]) for r in rows] == list(range(6, 21))
    first, last = rows[0], rows[-1]
    assert float(last["na_error"]) > float(first["na_error"])
    assert float(last["sa_error"]) < float(first["sa_error"])
    assert len(read_csv(tmp_path / "sweep.timing.csv")) == len(rows)


def test_sweep_s_trend(edge_file, tmp_path):
    out = tmp_path / "sweep.csv"
    assert run("sweep", "--graph", edge_file, "--vary", "S", "--range", "2..7", "--fixed", 10,
               "--num-seeds", 10, "--out", out) == 0
    rows = read_csv(out)
    assert float(rows[-1]["mean_l1_error"]) < float(rows[0]["mean_l1_error"])


def test_analyze_modes(edge_file, tmp_path):
    ci = tmp_path / "ci.csv"
    assert run("analyze", "--graph", edge_file, "--mode", "ci", "--iterations", 1, 7,
               "--num-seeds", 5, "--random-counterpart", "--out", ci) == 0
    rows = read_csv(ci)
    assert [(r["graph_label"], r["i"]) for r in rows] == [
        ("block.txt", "1"), ("block.txt", "7"), ("random", "1"), ("random", "7")]
    assert rows[0]["sampled"] == "False" and rows[0]["sampled_columns"] == "100"
    block = tmp_path / "block.csv"
    assert run("analyze", "--graph", edge_file, "--mode", "block", "--random-counterpart",
               "--out", block) == 0
    rows = read_csv(block)
    assert [r["graph_label"] for r in rows] == ["block.txt", "random"]
    assert float(rows[0]["stat"]) < float(rows[1]["stat"])


@pytest.mark.parametrize("cmd", [
    ["evaluate", "--S", 3, "--T", 8, "--num-seeds", 4],
    ["sweep", "--vary", "S", "--range", "1..3", "--fixed", 6, "--num-seeds", 4],
    ["analyze", "--mode", "ci", "--sample-size", 30, "--num-seeds", 4, "--random-counterpart"],
    ["analyze", "--mode", "block", "--num-seeds", 4],
])
def test_repeat_runs_byte_identical(edge_file, tmp_path, cmd):
    outs = []
    for name in ("a.csv", "b.csv"):
        assert run(*cmd, "--graph", edge_file, "--threads", 1, "--out", tmp_path / name) == 0
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]


def test_preprocess_repeat_and_threads_identical(edge_file, tmp_path):
    blobs = []
    for i, threads in enumerate((1, 1, 3)):
        path = tmp_path / f"{i}.tpa"
        run("preprocess", "--graph", edge_file, "--threads", threads, "--out", path)
        blobs.append(path.read_bytes())
    assert blobs[0] == blobs[1] == blobs[2]


def test_console_entry_point(edge_file, tmp_path):
    proc = subprocess.run([sys.executable, "-m", "tparwr.cli", "preprocess", "--graph",
                           str(edge_file), "--out", str(tmp_path / "a.tpa")],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run([sys.executable, "-m", "tparwr.cli", "bogus"], capture_output=True)
    assert proc.returncode == 2

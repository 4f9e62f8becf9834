import contextlib
import io
import json
import subprocess
import sys

import pytest

from ballsep import instances
from ballsep.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(list(argv))
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def row_file(tmp_path):
    path = tmp_path / "row.txt"
    assert run("gen", "--layout", "row", "--n", "5", "--spacing", "3", "--out", str(path))[0] == 0
    return path


def test_gen_grid(tmp_path):
    path = tmp_path / "g.txt"
    code, _, _ = run("gen", "--dim", "2", "--layout", "grid", "--side", "10", "--spacing", "2.5",
                     "--seed", "42", "--out", str(path))
    assert code == 0
    b = instances.load(path)
    assert len(b) == 100
    assert b.centers.tobytes() == instances.jittered_grid(2, 10, 2.5, 42).centers.tobytes()


def test_gen_bad_spacing(tmp_path):
    code, _, err = run("gen", "--side", "3", "--spacing", "2.0", "--out", str(tmp_path / "x.txt"))
    assert code == 1 and "SpacingError" in err


def test_gen_row_and_clusters(row_file, tmp_path):
    assert instances.load(row_file).centers.tolist() == instances.collinear_row(5, 3).centers.tolist()
    path = tmp_path / "c.txt"
    assert run("gen", "--layout", "clusters", "--n", "60", "--clusters", "3", "--out", str(path))[0] == 0
    assert len(instances.load(path)) == 60


def test_halve_planar_row(row_file):
    code, out, _ = run("halve", "--in", str(row_file), "--algo", "planar")
    res = json.loads(out)
    assert code == 0
    assert (res["left_closed"], res["right_closed"], res["intersected"]) == (3, 3, 1)
    for key in ("algorithm", "n", "d", "normal", "offset", "left_closed", "right_closed",
                "intersected", "intersected_ids", "guarantees", "iterations", "warnings",
                "wall_ms"):
        assert key in res
    assert set(res["guarantees"]) == {"min_side", "max_cut"}


def test_halve_nd_alpha(tmp_path):
    path = tmp_path / "g.txt"
    run("gen", "--n", "1000", "--seed", "3", "--out", str(path))
    code, out, _ = run("halve", "--in", str(path), "--algo", "nd", "--alpha", "0.25")
    res = json.loads(out)
    assert code == 0
    g = res["guarantees"]
    assert min(res["left_closed"], res["right_closed"]) >= g["min_side"]
    assert res["intersected"] <= g["max_cut"]


def test_halve_nd_fallback_exit_code(row_file):
    code, out, err = run("halve", "--in", str(row_file), "--algo", "nd")
    assert code == 2 and "warning" in err
    assert json.loads(out)["guarantees"]["max_cut"] is None


def test_halve_errors(tmp_path, row_file):
    assert run("halve", "--in", str(tmp_path / "missing.txt"))[0] == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2\n0 0\n1 0\n")
    code, _, err = run("halve", "--in", str(bad))
    assert code == 1 and "DisjointnessError" in err
    assert run("halve", "--in", str(row_file), "--algo", "nd", "--trace", "t.jsonl")[0] == 1
    assert run("halve", "--in", str(row_file), "--alpha", "0.2", "--f-log")[0] == 1


def test_verify_examples(row_file):
    code, out, _ = run("verify", "--in", str(row_file), "--normal", "1,0", "--offset", "6", "--m", "3")
    assert code == 0 and "PASS" in out and "intersected 1" in out
    code, out, _ = run("verify", "--in", str(row_file), "--normal", "1,0", "--offset", "4.5", "--m", "3")
    assert code == 1 and "FAIL" in out
    code, out, _ = run("verify", "--in", str(row_file), "--normal", "-1,0", "--offset", "-6", "--m", "3")
    assert code == 0 and "left_closed 3" in out
    assert run("verify", "--in", str(row_file), "--normal", "1,0,0", "--offset", "0", "--m", "1")[0] == 1


@pytest.mark.parametrize("algo,extra", [("planar", ()), ("nd", ("--alpha", "0.25"))])
def test_halve_output_passes_verify(tmp_path, algo, extra):
    path = tmp_path / "g.txt"
    run("gen", "--n", "1001", "--seed", "5", "--out", str(path))
    code, out, _ = run("halve", "--in", str(path), "--algo", algo, *extra)
    assert code == 0
    res = json.loads(out)
    normal = ",".join(repr(x) for x in res["normal"])
    code, out, _ = run("verify", "--in", str(path), "--normal", normal, "--offset",
                       repr(res["offset"]), "--m", str(res["guarantees"]["min_side"]))
    assert code == 0 and "PASS" in out


def test_bench_columns_and_errors(tmp_path):
    out_csv = tmp_path / "b.csv"
    code, _, _ = run("bench", "--algo", "nd", "--sizes", "500,1000", "--reps", "1", "--out", str(out_csv))
    assert code == 0
    rows = out_csv.read_text().splitlines()
    assert rows[0] == "n,algo,mean_ms,intersected,intersected_over_sqrt_nlogn,iterations"
    assert [r.split(",")[0] for r in rows[1:]] == ["500", "1000"]
    assert all(float(r.split(",")[2]) > 0 for r in rows[1:])
    code, _, err = run("bench", "--sizes", "")
    assert code == 1 and "--sizes" in err


def test_bench_parallel_matches_serial():
    a = run("bench", "--algo", "planar", "--sizes", "301,101", "--reps", "1", "--no-timing")[1]
    b = run("bench", "--algo", "planar", "--sizes", "301,101", "--reps", "1", "--no-timing",
            "--workers", "2")[1]
    assert a == b and a.splitlines()[1].startswith("101,")


def test_plot_primal(tmp_path, row_file):
    res = tmp_path / "r.json"
    res.write_text(run("halve", "--in", str(row_file))[1])
    svg = tmp_path / "row.svg"
    assert run("plot", "--in", str(row_file), "--result", str(res), "--out", str(svg))[0] == 0
    text = svg.read_text()
    assert text.count("<circle") == 5
    assert text.count("<line") == 1 and 'class="separator"' in text
    assert text.count('class="disk intersected"') == 1
    assert 'viewBox="' in text and 'version="1.1"' in text


def test_plot_trace(tmp_path):
    path = tmp_path / "g.txt"
    run("gen", "--n", "1001", "--seed", "2", "--out", str(path))
    trace = tmp_path / "t.jsonl"
    res = json.loads(run("halve", "--in", str(path), "--trace", str(trace))[1])
    lines = trace.read_text().splitlines()
    assert len(lines) == res["iterations"] > 0
    rec = json.loads(lines[0])
    assert {"slab", "m", "n_i", "chosen", "survivors", "lambda"} <= set(rec)
    code, out, _ = run("plot", "--in", str(path), "--trace", str(trace), "--out", str(tmp_path / "d.svg"))
    assert code == 0
    files = sorted(tmp_path.glob("d_*.svg"))
    assert len(files) == res["iterations"] == len(out.split())
    assert "trapezoid" in files[0].read_text()


def test_module_entry_point(row_file):
    proc = subprocess.run([sys.executable, "-m", "ballsep", "halve", "--in", str(row_file),
                           "--no-timing"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["intersected"] == 1

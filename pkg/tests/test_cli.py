import json
import subprocess
import sys

import numpy as np
import pytest

from sparseries.cli import main, read_grid
from sparseries.coeffs import load_sample
from sparseries.sampling import make_rng
from sparseries.sim import read_results_csv
from sparseries.sparsity import design_density


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_help_lists_defaults():
    text = subprocess.run([sys.executable, "-m", "sparseries", "simulate", "--help"],
                          capture_output=True, text=True, check=True).stdout
    for flag in ("--B", "--J", "--e-star", "--quad-panels", "--multiplier", "--emit-plotdata"):
        assert flag in text
    text = subprocess.run([sys.executable, "-m", "sparseries", "estimate", "--help"],
                          capture_output=True, text=True, check=True).stdout
    assert "default: 200" in text and "4096" in text and "1e-06" in text


def test_sample_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for p in (a, b):
        assert run(capsys, "sample", "--density", "design", "--n", "1000", "--seed", "42", "--out", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert load_sample(a).n == 1000


def test_estimate_uniform(tmp_path, capsys):
    p = tmp_path / "u.txt"
    np.savetxt(p, make_rng(0).random(100_000), fmt="%.17g")
    code, out, _ = run(capsys, "estimate", "--input", str(p))
    rep = json.loads(out)
    assert code == 0
    assert rep["selected"] == [1]
    assert rep["n"] == 100_000 and rep["J"] == 200
    assert set(rep) >= {"lambda", "theta_tilde", "shift", "regularity_check"}
    assert rep["regularity_check"]["holds_iii"]


def test_estimate_design_with_grid(tmp_path, capsys):
    s = tmp_path / "d.txt"
    assert run(capsys, "sample", "--n", "20000", "--seed", "1", "--out", str(s))[0] == 0
    grid = tmp_path / "g.csv"
    out_json = tmp_path / "r.json"
    code, out, _ = run(capsys, "estimate", "--input", str(s), "--emit-density", str(grid),
                       "--grid", "101", "--out", str(out_json))
    assert code == 0
    rep = json.loads(out)
    assert json.loads(out_json.read_text()) == rep
    assert {1, 2, 3, 11} <= set(rep["selected"])
    x, y = read_grid(grid)
    assert x.size == 101 and np.all(y >= 0)


def test_estimate_errors(tmp_path, capsys):
    empty = tmp_path / "e.txt"
    empty.write_text("")
    assert run(capsys, "estimate", "--input", str(empty))[0] == 2
    bad = tmp_path / "b.txt"
    bad.write_text("0.5\n2.0\n")
    code, _, err = run(capsys, "estimate", "--input", str(bad))
    assert code == 2 and "line 2" in err
    assert run(capsys, "estimate", "--input", str(tmp_path / "missing.txt"))[0] == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["estimate"])
    assert info.value.code == 2


def test_check_class(tmp_path, capsys):
    code, out, _ = run(capsys, "check-class", "--params", "2,2,4/3", "--density", "design")
    rep = json.loads(out)
    assert code == 0
    assert rep["ordered_ok"] and not rep["tail_ok"] and rep["first_violation"] == 4
    design_density().save(tmp_path / "d.json")
    code, out2, _ = run(capsys, "check-class", "--params", "2,2,4/3", "--input", str(tmp_path / "d.json"))
    assert json.loads(out2) == rep


def test_emit_density_truth(tmp_path, capsys):
    out = tmp_path / "g.csv"
    assert run(capsys, "emit-density", "--density", "design", "--grid", "11", "--out", str(out))[0] == 0
    x, y = read_grid(out)
    np.testing.assert_allclose(y, design_density()(x), rtol=0, atol=1e-15)


def test_simulate_small(tmp_path, capsys):
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps({"truth": "uniform", "sizes": [500, 800], "B": 3, "seed": 11}))
    out, plot = tmp_path / "r.csv", tmp_path / "p.csv"
    code = run(capsys, "simulate", "--config", str(cfg), "--out", str(out), "--B", "1",
               "--emit-plotdata", str(plot))[0]
    assert code == 0
    rows = read_results_csv(out)
    assert len(rows) == 4              # two rows per N
    assert all(r["B"] == 1 and r["seed"] == 11 for r in rows)
    assert len(plot.read_text().splitlines()) == 1 + 4

import json
import subprocess
import sys

import numpy as np
import pytest

from lplab.lab.cli import main, read_config
from lplab.lattice import Grid
from lplab.variation import Symbol
from lplab.weights import power_weight


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_theorem_b_writes_report(tmp_path, capsys):
    out = tmp_path / "b.json"
    code, _, _ = run(["verify", "theorem-b", "--q", "1.5", "--p", "3", "--n", "256", "--period", "16",
                      "--trials", "4", "--seed", "7", "--out", str(out)], capsys)
    assert code == 0
    d = json.loads(out.read_text())
    assert d["experiment"] == "theorem-b" and d["seed"] == 7 and d["pass"] is True


def test_invalid_q_is_usage_error(capsys):
    code, _, err = run(["verify", "theorem-b", "--q", "2.5"], capsys)
    assert code == 2
    assert "q ∈ (1,2)" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2


def test_equ2_fail_exit_1(capsys):
    code, out, _ = run(["counterexample", "equ2", "--psi", "sqrt", "--p", "3", "--kmax", "64"], capsys)
    d = json.loads(out)
    assert code == (0 if d["pass"] else 1)
    assert len(d["ratios"]) == 64


def test_equ2_lacunary_control(capsys):
    code, out, _ = run(["counterexample", "equ2", "--psi", "linear"], capsys)
    assert code == 0 and json.loads(out)["params"]["expect"] == "bounded"


def test_config_and_override(tmp_path, capsys):
    cfg = tmp_path / "lab.cfg"
    cfg.write_text("# carleson\np = 2\nbandwidths = 2,4,8\nn = 1024\nperiod = 16\n")
    assert read_config(str(cfg))["bandwidths"] == "2,4,8"
    code, out, _ = run(["counterexample", "carleson", "--config", str(cfg), "--format", "csv"], capsys)
    rows = out.strip().splitlines()
    assert code == 0 and len(rows) == 4
    assert all(abs(float(r.split(",")[1]) - 1) < 1e-10 for r in rows[1:])
    code, out, _ = run(["counterexample", "carleson", "--config", str(cfg), "--p", "1.5"], capsys)
    assert json.loads(out)["params"]["p"] == 1.5


def test_bad_config_line(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("just words\n")
    code, _, err = run(["counterexample", "carleson", "--config", str(cfg)], capsys)
    assert code == 2 and "key = value" in err


def test_report_render(tmp_path, capsys):
    out = tmp_path / "c.json"
    run(["counterexample", "carleson", "--n", "1024", "--period", "16", "--bandwidths", "2,4,8",
         "--out", str(out)], capsys)
    code, text, _ = run(["report", "render", str(out)], capsys)
    assert code == 0 and "experiment : carleson" in text


def test_utilities(tmp_path, capsys):
    g = Grid(256, 16.0)
    power_weight(0.5, g).to_csv(tmp_path / "w.csv")
    Symbol.hilbert(g).to_csv(tmp_path / "m.csv")
    common = ["--n", "256", "--period", "16"]
    code, out, _ = run(["ap-constant", "--weight", str(tmp_path / "w.csv"), "--p", "2", "--s", "2"] + common, capsys)
    assert code == 0 and json.loads(out)["ap_constant"] >= 1
    code, out, _ = run(["variation", "--symbol", str(tmp_path / "m.csv"), "--q", "1.5"] + common, capsys)
    assert json.loads(out)["vq_dyadic"] == pytest.approx(1.0)
    code, out, _ = run(["variation", "--builtin", "hilbert", "--q", "2", "--interval=-1:1"] + common, capsys)
    assert json.loads(out)["var_q"] == pytest.approx(2.0)
    code, out, _ = run(["decompose", "--builtin", "sinlog", "--interval", "1:4", "--levels", "6"] + common, capsys)
    assert code == 0 and json.loads(out)["converged"]
    code, out, _ = run(["multiplier-norm", "--builtin", "one", "--p", "3", "--trials", "2"] + common, capsys)
    assert json.loads(out)["value"] == pytest.approx(1.0)
    code, out, _ = run(["square-function", "--family=-1:0,0:1", "--p", "2"] + common, capsys)
    assert 0 < json.loads(out)["ratio"] <= 1 + 1e-12
    code, out, _ = run(["square-function", "--family", "0:1", "--format", "csv"] + common, capsys)
    assert out.splitlines()[0] == "x,abs_f,Sf" and len(out.splitlines()) == 257


def test_missing_required_flag(capsys):
    code, _, err = run(["ap-constant", "--alpha", "0.3"], capsys)
    assert code == 2 and "--p" in err


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "lplab.lab.cli", "counterexample", "equ2", "--psi", "linear",
                          "--format", "csv"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("label,value")

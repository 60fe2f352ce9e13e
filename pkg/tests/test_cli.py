from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from tiltstab import cli, frobenius


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    return code, (json.loads(out) if out else None), err


def test_counterexample_certificate():
    code, data, _ = run_json("counterexample", "--s", "2", "--m", "2", "--json")
    assert code == 0
    assert data["projected"] == ["0", "9/4", "9/4", "3/2"]
    assert data["twisted_beta_1"] == ["0", "9/4", "0", "3/8"]
    assert data["radius_bound"] == "9/119"
    assert data["rez_thresholds"] == ["1/3", "1"]
    assert data["threshold_discrepancy_flagged"] is True
    assert data["window"] == ["9/119", "1/3"]


def test_verify_pass_report():
    code, data, _ = run_json("verify", "--model", "P2xC", "--case", "hom_integral", "--m", "2")
    assert code == 0
    assert data["passed"] and data["failures"] == []
    assert (data["residues_checked"], data["tuples_covered"]) == (3, 16)
    assert "wall_clock_s" not in data


def test_verify_timing_flag():
    code, data, _ = run_json("verify", "--model", "P1xP1xC", "--case", "hom_rational", "--p", "1", "--q", "3", "--m", "2", "--timing")
    assert code == 0 and data["wall_clock_s"] >= 0


def test_verify_failure_exits_one(monkeypatch):
    calls = {"n": 0}
    real = frobenius.is_ample

    def flaky(model, D):
        calls["n"] += 1
        return real(model, D) if calls["n"] == 1 else False

    monkeypatch.setattr(frobenius, "is_ample", flaky)
    code, data, _ = run_json("verify", "--model", "P2xC", "--case", "hom_integral", "--m", "2")
    assert code == 1
    assert len(data["failures"]) == 3 and not data["passed"]


def test_zero_character_slope_is_usage_error():
    code, out, err = run("slope", "--model", "P2xC", "--H", "h:1,f:1", "--char", "0,0,0,0", "--alpha", "1", "--beta", "0")
    assert code == 2 and out == ""
    assert "zero character" in err


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["nu", "--model", "P9", "--char", "1,0,0,0", "--alpha", "1", "--beta", "0"], "P9"),
        (["nu", "--model", "P2xC", "--H", "h-f", "--char", "1,0,0,0", "--alpha", "1", "--beta", "0"], "not ample"),
        (["nu", "--char", "1,x,0,0", "--alpha", "1", "--beta", "0"], "malformed"),
        (["nu", "--char", "1,0,0,0", "--alpha", "-1", "--beta", "0"], "alpha must be positive"),
        (["verify", "--model", "P2xC", "--case", "hom_irrational", "--q", "2", "--u", "3"], "effective"),
        (["chern"], "exactly one"),
        (["walls", "--char", "1,0,1,0", "--box", "-1:1,-1:1,-1:1"], "discriminant"),
        (["charge", "--format", "svg", "--char", "1,0,0,0", "--alpha", "1", "--beta", "0"], "svg"),
    ],
)
def test_domain_errors_exit_two(argv, needle):
    code, out, err = run(*argv)
    assert code == 2 and out == ""
    assert needle in err


def test_unknown_subcommand_exits_two():
    code, _, _ = run("frobnicate")
    assert code == 2


def test_nu_example():
    code, data, _ = run_json("nu", "--model", "P2xC", "--H", "h+f", "--char", "0,9/4,9/4,3/2", "--alpha", "1/2", "--beta", "1")
    assert code == 0 and data == {"value": "0", "infinite": False}


def test_chern_from_line_bundle():
    code, data, _ = run_json("chern", "--model", "P2xC", "--line", "h+f", "--beta", "1")
    assert data["projected"] == ["3", "3", "3/2", "1/2"]
    assert data["beta_bar"] == "1"
    assert data["twisted"] == ["3", "0", "0", "0"]


def test_reduce_irrational():
    code, data, _ = run_json("reduce", "--char", "1,0,-1,0")
    assert data["beta_bar"] == {"a": "0", "b": "-1", "d": 2}
    assert data["value"] == {"a": "0", "b": "-2/3", "d": 2}
    assert data["verdict"] is True


def test_plane_from_model():
    code, data, _ = run_json("reduce", "--model", "CY3", "--s", "2", "--H", "2L-1/2D", "--plane")
    assert (data["verdict"], data["value"]) == (False, "3/8")


def test_euler_poly():
    code, data, _ = run_json("euler-poly", "--model", "P2xC", "--line", "h+f")
    assert data["text"] == "1/2*m^6 + 3/2*m^4 + m^2"
    assert data["chi"] == "3"


def test_thomsen():
    code, data, _ = run_json("thomsen", "--toric", "P2", "--D", "0", "--m", "2")
    assert data["summands"] == [{"divisor": [-1], "multiplicity": 3}, {"divisor": [0], "multiplicity": 1}]


def test_dirichlet():
    code, data, _ = run_json("dirichlet", "--x", "sqrt(2)", "--n", "4")
    assert [(c["p"], c["q"]) for c in data["convergents"]] == [(1, 1), (3, 2), (7, 5), (17, 12)]
    assert all(c["within_bound"] for c in data["convergents"])


def test_negative_option_values():
    code, data, _ = run_json("walls", "--char", "1,0,0,0", "--box", "-2:2,-2:2,-2:2")
    assert code == 0 and len(data["walls"]) == 7


def test_scan():
    code, data, _ = run_json(
        "scan", "--model", "CY3", "--s", "2", "--H", "2L-1/2D", "--plane", "--betas", "1", "--alphas", "1/2,2"
    )
    assert [e["status"] for e in data["entries"]] == ["violated-at-character-level", "satisfied"]


def test_csv_and_text_formats():
    code, out, _ = run("chern", "--char", "1,0,-1,0", "--format", "csv")
    assert out.splitlines()[0] == "key,value"
    assert "beta_bar,-sqrt(2)" in out
    code, out, _ = run("--format", "text", "chern", "--char", "1,0,-1,0")
    assert "delta_bar" in out and "2" in out


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"model": {"kind": "P2xC"}, "H": "h+f", "alpha": "1/2", "beta": 1}))
    code, data, _ = run_json("--config", str(cfg), "nu", "--char", "0,9/4,9/4,3/2")
    assert code == 0 and data["value"] == "0"
    code, data, _ = run_json("--config", str(cfg), "nu", "--char", "1,0,0,0", "--beta", "0")
    assert data["infinite"] is True
    code, _, err = run("--config", str(tmp_path / "missing.json"), "nu")
    assert code == 2 and "config" in err


def test_seed_is_accepted_and_ignored():
    a = run("--seed", "1", "walls", "--char", "1,0,0,0", "--box", "-1:1,-1:1,-1:1")
    b = run("walls", "--char", "1,0,0,0", "--box", "-1:1,-1:1,-1:1", "--seed", "99")
    assert a == b


def test_svg_files_and_determinism(tmp_path):
    paths = [tmp_path / "a.svg", tmp_path / "b.svg"]
    for p in paths:
        code, data, _ = run_json("walls", "--char", "1,0,0,0", "--box", "-2:2,-2:2,-2:2", "--svg", str(p))
        assert code == 0 and data["figure"] == str(p)
    a, b = (p.read_bytes() for p in paths)
    assert a == b and a.startswith(b"<?xml")
    assert b"R=1/2" in a


def test_svg_format_to_stdout(tmp_path):
    code, out, _ = run("counterexample", "--s", "2", "--m", "2", "--format", "svg")
    assert code == 0 and out.lstrip().startswith("<?xml") and "9/119" in out


def test_counterexample_figure_file(tmp_path):
    path = tmp_path / "cert.png"
    code, data, _ = run_json("counterexample", "--s", "3", "--m", "2", "--figure", str(path))
    assert code == 0 and path.stat().st_size > 0


def test_byte_identical_across_processes():
    argv = [sys.executable, "-m", "tiltstab", "verify", "--model", "P1xP1xC", "--case", "hom_rational", "--p", "1", "--q", "3", "--m", "2", "--json"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second
    assert json.loads(first)["passed"] is True


def test_help_lists_subcommands(capsys):
    code, _, _ = run("--help")
    assert code == 0
    out = capsys.readouterr().out
    assert all(name in out for name in cli.COMMANDS)

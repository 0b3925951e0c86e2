import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from hypalg import io
from hypalg.cli import main
from hypalg.geometry import config_alpha_beta, lift_config
from hypalg.logseries import quasisolution, ray_window
from hypalg.relations import relation_lattice
from hypalg.series import FormalSeries, Window

from conftest import EXAMPLE1_B

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


@pytest.fixture
def example1_file(tmp_path):
    p = tmp_path / "ex1.json"
    p.write_text(json.dumps({"m": 5, "points": [list(b) for b in EXAMPLE1_B]}))
    return str(p)


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_config_roundtrip():
    cfg = lift_config(EXAMPLE1_B)
    assert io.config_from_json(io.config_to_json(cfg)) == cfg


def test_config_errors():
    with pytest.raises(io.FormatError, match="missing field 'points'"):
        io.config_from_json({"m": 2})
    with pytest.raises(io.FormatError, match=r"points\[1\]"):
        io.config_from_json({"m": 2, "points": [[0, 0], [1, "x"], [0, 1]]})
    with pytest.raises(io.FormatError, match="expected 2 coordinates"):
        io.config_from_json({"m": 2, "points": [[0, 0], [1, 0, 0], [0, 1]]})


def test_polytope_roundtrip():
    P = lift_config(EXAMPLE1_B).polytope
    obj = io.polytope_to_json(P)
    assert all(isinstance(x, str) and "/" in x for v in obj["vertices"] for x in v)
    assert io.polytope_from_json(json.loads(json.dumps(obj))) == P


def test_series_roundtrip():
    s = FormalSeries((Fraction(-1, 3), Fraction(0)), {(0, 1): Fraction(5, 7), (2, -1): Fraction(-1)},
                     Window((0, -1), (3, 2)))
    assert io.series_from_json(json.loads(io.dumps(io.series_to_json(s)))) == s


def test_log_series_roundtrip():
    cfg = config_alpha_beta((2,), (1, 1))
    L = relation_lattice(cfg)
    s = quasisolution((0, 0), (1, 0, 0, 2), cfg, L, ray_window((2,), (1, 1), 6, -6))
    obj = io.series_to_json(s)
    assert any("log_exps" in t for t in obj["terms"])
    back = io.series_from_json(json.loads(io.dumps(obj)))
    assert back.equals(s) and back.window == s.window


def test_lattice_roundtrip():
    L = relation_lattice(lift_config(EXAMPLE1_B))
    assert io.lattice_from_json(io.lattice_to_json(L)) == L


def test_polytope_command(example1_file, capsys):
    code, out, _ = _run(["polytope", "--input", example1_file, "--degree", "3"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["results"]["interior_counts"] == {"1": 0, "2": 0, "3": 7}


def test_polytope_unit_simplex(tmp_path, capsys):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"m": 2, "points": [[0, 0], [1, 0], [0, 1]]}))
    code, out, _ = _run(["polytope", "--input", str(p), "--degree", "3"], capsys)
    rep = json.loads(out)
    assert rep["results"]["interior_counts"] == {"1": 0, "2": 0, "3": 1}
    assert rep["results"]["first_interior"]["3"] == [1, 1]


def test_malformed_input(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"m": 2, "points": [[0, 0],\n')
    code, _, err = _run(["polytope", "--input", str(p)], capsys)
    assert code == 2 and "line" in err


def test_series_command_example1(example1_file, capsys):
    argv = ["series", "--input", example1_file, "--u", "2,1,-1,0,0", "--subset", "1,2,3,4,5,6",
            "--window", "10", "--degree", "3"]
    code, out, _ = _run(argv, capsys)
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert rep["results"]["v"] == ["0/1", "-7/9", "-1/9", "-2/3", "-4/9", "-2/9", "-7/9"]
    assert {c["name"] for c in rep["checks"]} >= {"box_euler", "K_family", "p_integrality"}
    code2, out2, _ = _run(argv, capsys)
    assert out2 == out


def test_series_command_trivial(example1_file, capsys):
    code, out, _ = _run(["series", "--input", example1_file, "--u", "0,0,0,0,0,0"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["results"]["series"]["terms"] == [{"k": [0] * 7, "coeff": "1/1"}]


def test_series_command_alpha_beta(capsys):
    code, out, _ = _run(["series", "--alpha", "2", "--beta", "1,1", "--window", "8"], capsys)
    rep = json.loads(out)
    assert code == 0
    coeffs = [Fraction(t["coeff"]) for t in rep["results"]["series"]["terms"]]
    assert sorted(abs(c) for c in coeffs) == [1, 2, 6, 20, 70, 252, 924, 3432, 12870]


def test_logsolve_command(capsys):
    code, out, _ = _run(["logsolve", "--alpha", "2", "--beta", "1,1", "--P", "0,1", "--P", "2,3"],
                        capsys)
    rep = json.loads(out)
    assert code == 0
    names = {c["name"]: c["passed"] for c in rep["checks"]}
    assert names["closed_form_equals_quasisolution"] and names["reproduces_ratio_series"]
    assert names["zero_quasisolution[2, 3]"] and names["combination_r2"]


def test_logsolve_requires_m_gt_2n(capsys):
    code, _, err = _run(["logsolve", "--alpha", "1,1", "--beta", "2"], capsys)
    assert code == 2 and "m > 2n" in err


@pytest.mark.parametrize("alpha,beta,integral,alg", [("2", "1,1", True, True),
                                                     ("30,1", "15,10,6", True, True),
                                                     ("4", "2,1,1", True, False),
                                                     ("1,1", "2", False, False)])
def test_ratio_check(alpha, beta, integral, alg, capsys):
    code, out, _ = _run(["ratio", "check", "--alpha", alpha, "--beta", beta], capsys)
    rep = json.loads(out)
    res = rep["results"]
    assert code == 0
    assert res["integral"] is integral and res["algebraic_regime"] is alg
    assert set(res["oracles"]) == {"direct", "landau", "polytope"}
    assert (res["witness"] is None) == integral


def test_ratio_unbalanced(capsys):
    code, _, err = _run(["ratio", "check", "--alpha", "1", "--beta", "2"], capsys)
    assert code == 2 and "unbalanced" in err


def test_ratio_sweep_small(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HYPALG_THREADS", "1")
    out = tmp_path / "r.json"
    code, _, _ = _run(["ratio", "sweep", "--max-sum", "4", "--K", "40", "--out", str(out)], capsys)
    rep = json.loads(out.read_text())
    assert code == 0 and rep["checks"][0]["specs"] == len(rep["results"]["specs"])


def test_sweep_command_markdown(example1_file, capsys):
    code, out, _ = _run(["sweep", "--input", example1_file, "--u", "2,1,-1,0,0",
                         "--subset", "1,2,3,4,5,6", "--primes", "2,5,7", "--markdown"], capsys)
    assert code == 0
    assert out.startswith("# hypalg sweep") and "| p=7 | True |" in out


def test_bad_prime(example1_file, capsys):
    code, _, err = _run(["sweep", "--input", example1_file, "--primes", "4"], capsys)
    assert code == 2 and "not prime" in err


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "hypalg.cli", "ratio", "check", "--alpha", "2",
                        "--beta", "1,1"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["passed"]


def test_demo_data_present():
    assert (DATA / "example1.json").exists()

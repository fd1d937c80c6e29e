import json
import subprocess
import sys

import numpy as np
import pytest

from urysohn.cli import main
from urysohn.quadrature import BasicRule, make_basic_rule
from urysohn.study import ConfigError, QuadratureWarning, StudyConfig, run_study
from urysohn.verify import check_quadrature_exactness, run_verify


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_study_csv(capsys):
    code, out, _ = run(["study", "--n", "2,4,8", "--method", "modified,iterated_modified"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,m,method,sup_error,eoc"
    assert len(lines) == 7
    assert lines[1].startswith("2,2,modified,")


def test_study_markdown_reference_layout(capsys):
    code, out, _ = run(["study", "--layout", "reference", "--n", "2,4,8", "--format", "markdown"], capsys)
    assert code == 0
    assert out.startswith("| N | n | m |")
    assert "| 8 | 16 | 16 | 1.31e-05 |" in out


def test_study_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(["study", "--r", "2", "--quad", "gauss", "--m-rule", "square",
                    "--n", "2,4", "--out", str(path)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv", [
    ["study", "--n", "2,3,4"],
    ["study", "--method", "galerkin"],
    ["study", "--c", "-1"],
    ["study", "--p", "0"],
    ["study", "--layout", "reference", "--r", "2", "--n", "3,6"],
])
def test_invalid_config_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert "invalid config" in err


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "study.json"
    cfg.write_text(json.dumps({"problem": "linear", "ns": [2, 4], "methods": ["nystrom"], "p": 2}))
    code, out, _ = run(["study", "--config", str(cfg), "--n", "4,8"], capsys)
    assert code == 0
    rows = out.splitlines()[1:]
    assert [r.split(",")[:3] for r in rows] == [["4", "8", "nystrom"], ["8", "16", "nystrom"]]


def test_config_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["study", "--config", str(bad)], capsys)[0] == 2
    bad.write_text(json.dumps({"colour": "red"}))
    assert run(["study", "--config", str(bad)], capsys)[0] == 2


def test_solver_failure_exit_1(capsys):
    # a zero iteration budget cannot reach the residual tolerance
    code, out, _ = run(["study", "--n", "2,4", "--max-iter", "1", "--tol", "1e-30"], capsys)
    assert code == 1
    assert out.splitlines()[0] == "n,m,method,sup_error,eoc"


def test_zero_problem_all_methods(capsys):
    code, out, _ = run(["study", "--problem", "zero", "--n", "2,4",
                        "--method", "nystrom,collocation,iterated_collocation,modified,iterated_modified"], capsys)
    assert code == 0
    for row in out.splitlines()[1:]:
        n, m, method, err, _ = row.split(",")
        if method != "collocation":
            assert float(err) <= 1e-15


def test_verify_passes(capsys):
    code, out, _ = run(["verify"], capsys)
    assert code == 0
    assert out.splitlines()[-1] == "6/6 checks passed"


def test_verify_detects_perturbed_weight():
    base = make_basic_rule("gauss", 3)
    weights = np.array(base.weights)
    weights[1] += 1e-3
    broken = BasicRule(base.nodes, weights, base.error_order, "gauss-3-perturbed")
    assert not check_quadrature_exactness([make_basic_rule("simpson"), broken]).passed
    results = run_verify(rules=[broken])
    assert not all(r.passed for r in results)


def test_weak_quadrature_warns():
    cfg = StudyConfig(r=2, quad="gauss", rho=1, ns=(2, 4), methods=("modified",))
    with pytest.warns(QuadratureWarning):
        run_study(cfg)


def test_validate_messages():
    with pytest.raises(ConfigError, match="doubling"):
        StudyConfig(ns=(2, 6)).validate()
    with pytest.raises(ConfigError, match="n divides m"):
        StudyConfig(p=1.5).validate()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "urysohn", "study", "--n", "2,4"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert proc.stdout.startswith("n,m,method")

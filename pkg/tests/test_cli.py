import json

import pytest

from levymart.cli import run


def _write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


@pytest.fixture
def cfg(tmp_path):
    return {
        "poisson": _write(tmp_path, "p.json", {"cumulants": [1] * 12}),
        "gauss": _write(tmp_path, "g.json", {"cumulants": [0, 1] + [0] * 10}),
        "poisson_measure": _write(tmp_path, "pm.json", {"c1": 1, "atoms": [{"y": 1, "w": 1}]}),
        "symmetric": _write(tmp_path, "s.json", {"cumulants": [0, 1, 0, 2]}),
        "bad": _write(tmp_path, "b.json", {"cumulants": [0, -1]}),
    }


def call(capsys, *argv):
    code = run(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_moments(capsys, cfg):
    code, doc = call(capsys, "moments", "--config", cfg["poisson"], "--order", "3")
    assert code == 0 and json.dumps(doc)


def test_tangent(capsys):
    code, doc = call(capsys, "tangent", "--count", "6")
    assert code == 0 and doc == [1, 2, 16, 272, 7936, 353792]


def test_classify_and_closure(capsys, cfg):
    code, doc = call(capsys, "classify", "--config", cfg["symmetric"])
    assert code == 0 and doc["case"] == 1
    code, doc = call(capsys, "closure", "--config", cfg["symmetric"], "--order", "8")
    assert code == 0 and doc["ode_series_agrees"] and doc["cumulants"][5] == "16/1"


def test_cross_and_orthogonal(capsys, cfg):
    code, doc = call(capsys, "cross", "--config", cfg["poisson"], "--n", "2", "--k", "2")
    assert code == 0 and doc["matches_oracle"]
    code, doc = call(capsys, "orthogonal", "--config", cfg["gauss"], "--t", "1/2", "--max-degree", "4")
    assert code == 0 and doc["pass"]


def test_analyze_reversed(capsys, cfg):
    code, doc = call(capsys, "analyze-reversed", "--config", cfg["poisson"], "--degree", "3")
    assert code == 0 and not doc["feasible"] and doc["witness"] == 3


def test_check_identities(capsys, cfg):
    code, doc = call(capsys, "check-identities", "--config", cfg["gauss"], "--order", "8")
    assert code == 0 and doc["pass"]


def test_simulate(capsys, cfg):
    args = ["simulate", "--config", cfg["poisson_measure"], "--paths", "20000", "--seed", "5",
            "--times", "1/2,1,2", "--check", "harness"]
    code, doc = call(capsys, *args)
    assert code == 0 and doc["status"] == "pass"
    code, doc = call(capsys, *args, "--inject-fault")
    assert code == 3 and doc["status"] == "fail"


def test_simulate_inconclusive(capsys, cfg):
    code, doc = call(capsys, "simulate", "--config", cfg["poisson_measure"], "--paths", "10",
                     "--times", "1,2", "--check", "reversed")
    assert code == 4 and doc["status"] == "inconclusive"


def test_simulate_requires_measure_form(capsys, cfg):
    code, doc = call(capsys, "simulate", "--config", cfg["poisson"], "--times", "1,2", "--check", "reversed")
    assert code == 2 and "error" in doc


@pytest.mark.parametrize("argv", [
    ["tangent"],
    ["moments", "--config", "/nonexistent.json"],
    ["no-such-command"],
])
def test_invalid_input_exits_2(capsys, argv):
    code, doc = call(capsys, *argv)
    assert code == 2 and "error" in doc


def test_negative_variance_rejected(capsys, cfg):
    code, doc = call(capsys, "moments", "--config", cfg["bad"])
    assert code == 2


def test_discrepancies_written(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, doc = call(capsys, "discrepancies", "--output", str(out))
    assert code == 3 and json.loads(out.read_text())["summary"] == doc["summary"]

import json
import subprocess
import sys
from pathlib import Path

import pytest

from lmopuc.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_NUMERIC, EXIT_OK, main
from lmopuc.config import RunConfig
from lmopuc.errors import ConfigError

EXAMPLES = Path(__file__).resolve().parents[1] / "examples" / "configs"

TWO_ARC = {
    "command": "hp-check",
    "problem": "phi",
    "system": {
        "type": "atoms",
        "arcs": [[0.0, 3.0], [3.2, 6.1]],
        "measures": [
            {"angles": [0.3, 0.8, 1.4, 2.0, 2.6]},
            {"angles": [3.5, 4.1, 4.7, 5.3, 5.9], "weights": [0.1, 0.3, 0.2, 0.25, 0.15]},
        ],
    },
    "indices": {"list": [[1, 1]]},
}


def run(tmp_path, cfg, *extra):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg) if isinstance(cfg, dict) else cfg)
    out = tmp_path / "out.txt"
    status = main([cfg.get("command", "solve") if isinstance(cfg, dict) else "solve",
                   "--config", str(path), "--out", str(out), *extra])
    text = out.read_text() if out.exists() else ""
    return status, text


def rows(text):
    return [json.loads(line) for line in text.splitlines()]


def test_lebesgue_normality_table(tmp_path):
    cfg = json.loads((EXAMPLES / "lebesgue_normality.json").read_text())
    status, text = run(tmp_path, cfg)
    out = rows(text)
    assert status == EXIT_OK and len(out) == 5
    for r in out:
        assert r["normal"] is True
        assert abs(r["det"][0] - 1) < 1e-12 and abs(r["det"][1]) < 1e-12


def test_malformed_json(tmp_path):
    status, _ = run(tmp_path, "{not json")
    assert status == EXIT_CONFIG


@pytest.mark.parametrize("patch, field", [
    ({"system": {"type": "atoms", "measures": [{"angles_deg": [30]}]}}, "angles_deg"),
    ({"system": {"type": "nope"}}, "system.type"),
    ({"tolerances": {"eps_normal": -1}}, "tolerances.eps_normal"),
    ({"indices": {}}, "indices"),
])
def test_config_errors_name_the_field(tmp_path, patch, field, capsys):
    cfg = {**TWO_ARC, **patch}
    status, _ = run(tmp_path, cfg)
    assert status == EXIT_CONFIG
    assert field in capsys.readouterr().err


def test_hp_check_two_arcs(tmp_path):
    status, text = run(tmp_path, TWO_ARC)
    (r,) = rows(text)
    assert status == EXIT_OK
    assert r["orders_required"] == [[1, -2], [2, -1], [1, -2], [2, -1]]
    assert r["orders_achieved"] == r["orders_required"]


def test_perturbation_option(tmp_path):
    status, text = run(tmp_path, {**TWO_ARC, "perturbation_check": True})
    (r,) = rows(text)
    assert status == EXIT_OK and r["perturbations_broken"] == "4/4"


def test_solve_and_numerical_failure(tmp_path):
    cfg = {**TWO_ARC, "command": "solve", "problem": "Phi",
           "indices": {"pairs": [[[1, 1], [1, 0]]]}}
    status, text = run(tmp_path, cfg)
    (r,) = rows(text)
    assert status == EXIT_OK and r["residual_max"] < 1e-12 and "alpha" in r
    dup = {"command": "solve", "system": {"type": "atoms", "measures": [{"angles": [0.1, 0.5]}] * 2},
           "indices": {"list": [[1, 1]]}}
    status, text = run(tmp_path, dup)
    assert status == EXIT_NUMERIC and "NotNormal" in rows(text)[0]["error"]


def test_failed_check_exit_status(tmp_path):
    cfg = json.loads((EXAMPLES / "szego.json").read_text())
    status, text = run(tmp_path, cfg)
    out = rows(text)
    assert status == (EXIT_OK if all(r.get("passed", True) for r in out) else EXIT_FAIL)


def test_parallel_output_is_deterministic(tmp_path):
    cfg = {"command": "normality-table", "system": {"type": "random_angelesco", "r": 3, "atoms": [6, 9]},
           "indices": {"max_total": 4}}
    _, one = run(tmp_path, cfg)
    _, four = run(tmp_path, cfg, "--jobs", "4")
    _, again = run(tmp_path, cfg, "--jobs", "4")
    assert one == four == again
    _, other = run(tmp_path, cfg, "--seed", "5")
    assert other != one


def test_csv_output(tmp_path):
    cfg = json.loads((EXAMPLES / "lebesgue_normality.json").read_text())
    _, text = run(tmp_path, cfg, "--format", "csv")
    lines = text.splitlines()
    assert lines[0] == "index,det,sigma_min,relative_sigma_min,normal" and len(lines) == 6


def test_recurrence_report(tmp_path):
    cfg = json.loads((EXAMPLES / "random_recurrence.json").read_text())
    status, text = run(tmp_path, cfg)
    out = rows(text)
    assert status == EXIT_OK and all(r["passed"] for r in out)


def test_moments_command(tmp_path):
    cfg = {"command": "moments", "system": {"type": "lebesgue"}, "k_max": 2}
    status, text = run(tmp_path, cfg)
    out = rows(text)
    assert status == EXIT_OK and [r["k"] for r in out] == [-2, -1, 0, 1, 2]
    assert abs(out[2]["moment"][0] - 1) < 1e-14


def test_functional_system_builds():
    cfg = RunConfig.from_dict({"command": "normality-table",
                               "system": {"type": "functional",
                                          "measures": [{"k_max": 1, "moments": [0.5, 1.0, [0.5, 0.0]]}]},
                               "indices": {"max_total": 2}})
    system, _ = cfg.system.build()
    assert system.moment(0, 1) == 0.5


def test_szego_check_needs_real_system():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"command": "szego-check", "system": {"type": "lebesgue"}})


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lmopuc", "verify-identities", "--seed", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"] is True

import json
import subprocess
import sys

import pytest

from lowres_mimo import cli
from lowres_mimo.harness import validation
from lowres_mimo.harness.results import ResultTable


def test_sweep_writes_csv(tmp_path):
    out = tmp_path / "s.csv"
    rc = cli.main(["sweep", "--axis", "power_db", "--values", "0,10", "--antennas", "20", "--users", "2",
                   "--trials", "3", "--receiver", "zf", "--csi", "perfect", "--out", str(out)])
    assert rc == 0
    t = ResultTable.read_csv(out)
    assert [r.sweep_value for r in t.rows] == [0.0, 10.0]
    assert {r.receiver for r in t.rows} == {"zf"}


def test_sweep_to_stdout(capsys):
    assert cli.main(["sweep", "--axis", "bits", "--values", "2", "--antennas", "16", "--users", "2",
                     "--trials", "2"]) == 0
    assert capsys.readouterr().out.startswith("# {")


def test_sweep_from_config(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"system": {"antennas": 16, "users": 2, "trials": 2},
                               "sweep_axis": "kfactor_db", "sweep_values": [0, 10]}))
    out = tmp_path / "o.csv"
    assert cli.main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
    assert len(ResultTable.read_csv(out).rows) == 8


@pytest.mark.parametrize("argv", [
    ["sweep", "--values", "1,2"],
    ["sweep", "--axis", "bits", "--values", "1,x"],
    ["sweep", "--axis", "bits", "--values", "1", "--users", "5", "--pilot-len", "2"],
    ["sweep", "--axis", "bits", "--values", "1", "--config", "/nonexistent.json"],
    ["figure", "fig_unknown"],
    ["validate", "everything"],
])
def test_configuration_errors_exit_2(argv, capsys):
    assert cli.main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "--receiver", "mmse"])
    assert exc.value.code == 2


def test_validate_pass(capsys):
    assert cli.main(["validate", "zf_null", "--seed", "1"]) == 0
    assert "suite zf_null: PASS" in capsys.readouterr().out


def test_validate_failure_exits_3(monkeypatch, capsys):
    def failing(seed):
        rep = validation.ValidationReport("zf_null")
        rep.add("forced", 1.0, 0.0)
        return rep
    monkeypatch.setitem(validation.SUITES, "zf_null", failing)
    assert cli.main(["validate", "zf_null"]) == 3
    assert "[FAIL] forced" in capsys.readouterr().out


def test_figure_command(tmp_path, capsys):
    rc = cli.main(["figure", "fig_pilot", "--values", "10,20", "--trials", "2", "--users", "3",
                   "--out", str(tmp_path)])
    assert rc == 0
    t = ResultTable.read_csv(tmp_path / "fig_pilot.csv")
    assert {r.csi for r in t.rows} == {"imperfect"}
    assert t.metadata["trials"] == 2


def test_console_module_entry():
    res = subprocess.run([sys.executable, "-m", "lowres_mimo.cli", "validate", "bogus"], capture_output=True)
    assert res.returncode == 2

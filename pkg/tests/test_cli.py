import csv
import io
import json
import os
import subprocess
import sys

import pytest

from blaschke2d import errors
from blaschke2d.cli import main
from blaschke2d.config import parse_config
from blaschke2d.errors import ParseError, ValidationError
from blaschke2d.report import run_command

CONFIGS = os.path.join(os.path.dirname(__file__), "..", "configs")


def config_text(name):
    with open(os.path.join(CONFIGS, name)) as fh:
        return fh.read()


MONOMIAL = '{"monomial": [[1, 1], [1, 2]], "command": "topdeg"}'


def test_minimal_monomial_config():
    cfg = parse_config(MONOMIAL)
    assert cfg.command == "topdeg" and cfg.map.is_monomial() and cfg.map.N.rows == [[1, 1], [1, 2]]
    assert cfg.params["seed"] == 0


def test_zero_outside_disc_names_invariant():
    text = '{"map": {"A": [[1, 1, 0, 1]], "B": [[1, 3, 0, 1]], "C": [[1, 5, 0, 1]], ' \
           '"D": [[1, 7, 0, 1], [1, 9, 0, 1]]}, "command": "lift"}'
    with pytest.raises(ValidationError) as exc:
        parse_config(text)
    assert exc.value.invariant == "ZeroOutsideDisc"


def test_unknown_key_is_located():
    text = '{\n  "command": "lift",\n  "monomial": [[1, 1], [1, 2]],\n    "foo": 1\n}'
    with pytest.raises(ParseError) as exc:
        parse_config(text)
    assert (exc.value.line, exc.value.column) == (4, 5)


def test_malformed_json_is_located():
    with pytest.raises(ParseError) as exc:
        parse_config('{"command": "lift",\n "monomial": [[1, 1], [1, 2]')
    assert exc.value.line == 2


@pytest.mark.parametrize("params, invariant", [
    ({"n_max": 0}, "ParamRange"),
    ({"samples": "many"}, "ParamType"),
    ({"strategy": "guess"}, "ParamRange"),
    ({"arc": [0.5, 0.1]}, "ParamRange"),
])
def test_bad_params(params, invariant):
    text = json.dumps({"monomial": [[1, 1], [1, 2]], "command": "degrees", "params": params})
    with pytest.raises(ValidationError) as exc:
        parse_config(text)
    assert exc.value.invariant == invariant


@pytest.mark.parametrize("name", sorted(os.listdir(CONFIGS)))
def test_serialization_is_idempotent(name):
    once = parse_config(config_text(name)).serialize()
    assert parse_config(once).serialize() == once


def test_classify_small_family():
    cfg = parse_config(config_text("small_degree_family.json"), "classify")
    cfg = parse_config(json.dumps({**cfg.to_dict(), "params": {"strategy": "numeric"}}))
    report = run_command(cfg)
    r = report["result"]
    assert report["status"] == "ok"
    assert (r["case"], r["d_top"], r["c_plus"]) == ("II", 5, "(6+sqrt(32))/2")
    assert report["provenance"]["seed"] == 0 and "residual" in report["provenance"]["tolerances"]


def test_degrees_command(tmp_path, capsys):
    cfg = os.path.join(CONFIGS, "generic_N_11_12.json")
    assert main(["degrees", "--config", cfg, "--n-max", "3"]) == 0
    r = json.loads(capsys.readouterr().out)["result"]
    assert r["measured"] == r["predicted"] == [5, 13, 34]


def test_reports_are_byte_identical(tmp_path):
    cfg = os.path.join(CONFIGS, "equal_degree_family.json")
    outs = []
    path = tmp_path / "report.json"
    for _ in range(2):
        assert main(["preimage-measure", "--config", cfg, "--out", str(path), "--samples", "4", "--depth", "2"]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_csv_cloud(tmp_path):
    cfg = os.path.join(CONFIGS, "equal_degree_family.json")
    path = tmp_path / "cloud.csv"
    assert main(["preimage-measure", "--config", cfg, "--out", str(path), "--format", "csv",
                 "--samples", "3", "--depth", "1"]) == 0
    rows = list(csv.reader(io.StringIO(path.read_text())))
    assert rows[0] == ["re_z", "im_z", "re_w", "im_w", "dist"] and len(rows) == 4


def test_exit_codes(tmp_path, capsys):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text('{"command": ')
    assert main(["lift", "--config", str(bad_json)]) == ParseError.exit_code
    bad_map = tmp_path / "bad_map.json"
    bad_map.write_text('{"map": {"A": [[1, 2, 0, 1]], "B": [[1, 3, 0, 1]], "C": [[1, 5, 0, 1]], '
                       '"D": [[1, 4, 0, 1]]}, "command": "lift"}')
    assert main(["lift", "--config", str(bad_map)]) == ValidationError.exit_code
    # a module error during the run is reported and mapped to its class code
    small = os.path.join(CONFIGS, "small_degree_family.json")
    out = tmp_path / "err.json"
    assert main(["topdeg", "--config", small, "--strategy", "exact-generic", "--out", str(out)]) == 3
    report = json.loads(out.read_text())
    assert report["status"] == "error" and report["error"]["invariant"] == "Generic"
    assert main(["lift", "--config", os.path.join(CONFIGS, "generic_N_11_12.json")]) == 0
    capsys.readouterr()


def test_error_classes_partition_exit_codes():
    classes = [errors.ParseError, errors.ValidationError, errors.ResourceBudget, errors.NumericError,
               errors.GeometryError, errors.InvariantViolation]
    codes = [c.exit_code for c in classes]
    assert len(set(codes)) == len(codes) and 0 not in codes
    assert errors.ZeroOutsideDisc.exit_code == errors.ValidationError.exit_code
    assert errors.SolverDeficiency.exit_code == errors.NumericError.exit_code
    assert errors.CoincidentZeros.exit_code == errors.GeometryError.exit_code
    assert errors.RefinementBudget.exit_code == errors.ResourceBudget.exit_code


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "blaschke2d.cli", "classify", "--config",
                           os.path.join(CONFIGS, "monomial_N_11_12.json")], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["case"] == "II"

import json
import os
import subprocess

import jsonschema
import pytest

import reachcount as rc
from conftest import threshold_property

MODES = ["check", "count", "count-discrete", "approx", "sample"]
FLAGS = ["--max-depth", "6", "--samples", "500", "--splits", "2", "--runs", "3", "--seed", "4", "--grid", "9"]


def run(args):
    binary = os.environ.get("REACHCOUNT_BIN")
    if binary:
        p = subprocess.run([binary, *args], capture_output=True, text=True)
        return p.returncode, p.stdout, p.stderr
    return rc.run_cli(args)


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("bias", [-1.0, 0.5, 2.0])
def test_reports_match_schema(mode, bias, identity_model, tmp_path, schema):
    prop = threshold_property(tmp_path / "q.json", bias)
    code, out, err = run([mode, str(identity_model), str(prop), *FLAGS])
    assert code <= 2, err
    report = json.loads(out)
    jsonschema.validate(report, schema)
    assert report["mode"] == mode
    assert err


def test_check_exit_codes(identity_model, tmp_path):
    codes = [run(["check", str(identity_model), str(threshold_property(tmp_path / f"q{i}.json", b))])[0]
             for i, b in enumerate([-1.0, 2.0, 0.5])]
    assert codes == [0, 1, 2]


def test_same_seed_same_report(identity_model, tmp_path):
    prop = threshold_property(tmp_path / "q.json", 0.5)
    reports = []
    for _ in range(2):
        code, out, _ = run(["approx", str(identity_model), str(prop), *FLAGS])
        assert code == 0
        r = json.loads(out)
        del r["wall_time_ms"], r["tool_version"]
        reports.append(json.dumps(r, sort_keys=True))
    assert reports[0] == reports[1]


def test_error_exit_codes(identity_model, tmp_path):
    assert run([])[0] == 64
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert run(["count", str(broken), str(threshold_property(tmp_path / "q.json", 0.5))])[0] == 65

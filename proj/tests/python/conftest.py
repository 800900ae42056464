import json
import os
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def schema():
    path = os.environ.get("REACHCOUNT_SCHEMA", ROOT / "docs" / "report.schema.json")
    return json.loads(pathlib.Path(path).read_text())


@pytest.fixture()
def identity_model(tmp_path):
    p = tmp_path / "identity.json"
    p.write_text(json.dumps({"layers": [{"weights": [[1.0]], "biases": [0.0], "activation": "identity"}]}))
    return p


def threshold_property(path, bias):
    path.write_text(json.dumps({"input": [[0, 1]], "clauses": [[{"coeffs": [1], "op": "ge", "bias": bias}]]}))
    return path

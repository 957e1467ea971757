"""Golden outputs in corpus/ against fresh runs (``stats`` is timing dependent and skipped)."""

import json
from pathlib import Path

import pytest

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def golden(name):
    path = CORPUS / f"{name}.json"
    if not path.exists():
        pytest.skip(f"{path.name} not generated")
    return json.loads(path.read_text())["expected"]


@pytest.mark.parametrize("name", [
    "example1",
    "example3",
    "example4",
    pytest.param("example2", marks=pytest.mark.slow),
])
def test_matches_golden(name, examples):
    expected = golden(name)
    res, _ = examples(name)
    got = res.to_json()
    got.pop("stats")
    assert got == expected

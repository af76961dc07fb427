"""
Test CLI
Subcommands end to end on the fixture documents, with their exit codes
"""
import json

import pytest

from ockhamlab.classifier import catalog_space
from ockhamlab.cli import run
from ockhamlab.formats import load, save, to_document


def run_json(capsys, *argv):
    """Run a subcommand and parse its stdout"""
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_validate(capsys, fixture_path):
    code, report = run_json(capsys, "validate", fixture_path("d5_space"))
    assert code == 0
    assert report["ok"]
    code, report = run_json(capsys, "validate", fixture_path("fan_structure"))
    assert code == 0
    assert report["kind"] == "structure"


def test_validate_rejects_bad_space(capsys, fixture_path):
    """g must reverse the order; the report is still printed"""
    code, report = run_json(capsys, "validate", fixture_path("bad_space"))
    assert code == 2
    assert not report["ok"]
    assert report["violations"]


@pytest.mark.parametrize("name", ["not_json", "missing_file"])
def test_unreadable_input(capsys, fixture_path, name):
    assert run(["validate", fixture_path(name)]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_classify(capsys, fixture_path):
    code, verdict = run_json(capsys, "classify", fixture_path("d5_space"))
    assert code == 0
    assert verdict["outcome"] == "FinitelyMany"
    assert verdict["catalog"]["kind"] == "D"
    assert verdict["catalog"]["m"] == 5

    code, verdict = run_json(capsys, "classify", fixture_path("kleene_algebra"))
    assert code == 0
    assert verdict["outcome"] == "InfinitelyMany"
    assert "Kleene" in verdict["subvarieties"]

    assert run(["classify", fixture_path("trivial_algebra")]) == 2
    print("[OK] classify")


def test_dual(capsys, fixture_path):
    code, doc = run_json(capsys, "dual", fixture_path("d3_space"))
    assert code == 0
    assert doc["kind"] == "ockham_algebra"
    assert doc["size"] == 12
    code, doc = run_json(capsys, "dual", fixture_path("kleene_algebra"))
    assert doc["kind"] == "ockham_space"
    assert doc["size"] == 2


def test_caps_flag(capsys, fixture_path):
    """A carrier above the structure cap exits with code 4, even before any dual is built"""
    assert run(["--caps", "structure=2", "dual", fixture_path("d3_space")]) == 4
    assert "cap" in capsys.readouterr().err
    assert run(["--caps", "structure=x", "dual", fixture_path("d3_space")]) == 2
    assert run(["--caps", "structure=4", "validate", fixture_path("d5_space")]) == 4
    assert "carrier is 6" in capsys.readouterr().err


def test_equiv(capsys, fixture_path):
    code, data = run_json(capsys, "equiv", fixture_path("leq_relation"), fixture_path("rho_relation"))
    assert code == 0
    assert data["equivalent"]
    assert data["first_from_second"] is not None


def test_quasiprimal_and_census(capsys, fixture_path):
    code, data = run_json(capsys, "quasiprimal", fixture_path("boolean2_algebra"))
    assert code == 0 and data["quasiprimal"]
    code, data = run_json(capsys, "census", fixture_path("boolean2_algebra"), "--max-arity", "2")
    assert code == 0
    assert data["count"] == 1
    code, data = run_json(capsys, "census", fixture_path("two_chain_lattice"), "--max-arity", "3")
    assert code == 0
    assert data["count"] == 2
    assert data["classes"][1]["representative"]["tuples"] == [[0, 0], [0, 1], [1, 1]]


def test_divisor(capsys, fixture_path):
    code, data = run_json(capsys, "divisor", "--sub", fixture_path("c2_space"), "--of", fixture_path("c2_space"))
    assert code == 0
    assert data["divisor"]


def test_catalog(capsys):
    code, doc = run_json(capsys, "catalog", "--kind", "D", "--m", "3")
    assert code == 0
    assert doc["g"] == [1, 2, 3, 1]
    assert doc["leq_pairs"] == [[0, 3]]
    assert run(["catalog", "--kind", "D", "--m", "2"]) == 2
    assert run(["catalog", "--kind", "Y9"]) == 2


def test_saved_documents_load_back(capsys, tmp_path):
    """A saved catalog space validates and loads to the same document"""
    X = catalog_space("D", 3)
    path = tmp_path / "d3.json"
    save(X, path)
    assert to_document(load(path)) == to_document(X)
    code, report = run_json(capsys, "validate", str(path))
    assert code == 0 and report["ok"]


def test_render(capsys, tmp_path):
    """Covers are undirected, g arrows are dashed"""
    path = tmp_path / "d1.json"
    save(catalog_space("D", 1), path)
    assert run(["render", str(path)]) == 0
    dot = capsys.readouterr().out
    assert dot.startswith("digraph")
    assert dot.count("dir=none") == 1
    assert dot.count("style=dashed") == 2


def test_normalize(capsys, fixture_path):
    code, data = run_json(capsys, "normalize", fixture_path("fan_structure"), "--gens", "0,1,2,3", "--m", "1")
    assert code == 0
    assert data["elements"] == [0, 3]
    assert data["steps"][0]["case"] == 1
    assert data["structure"]["size"] == 2
    assert run(["normalize", fixture_path("fan_structure"), "--gens", "0,x", "--m", "1"]) == 2


def test_witness(capsys):
    code, data = run_json(capsys, "witness", "--family", "crown", "--ego", "kleene", "--n", "2")
    assert code == 0
    assert data["size"] == 4
    assert data["psi"]["violates"] == {"relation": "r", "tuple": [2, 1]}
    print("[OK] witness")


def test_bad_arguments(capsys):
    assert run(["frobnicate"]) == 2
    assert run(["witness", "--family", "crown", "--ego", "a56", "--n", "2"]) == 2
    assert run(["--log-level", "LOUD", "catalog", "--kind", "C", "--m", "1"]) == 2

"""Tests for the command-line entry point: exit codes, output formats and named relations."""
import json

import pytest

from app.api.relations import RELATIONS, run_relation
from app.main import EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, EXIT_VERIFICATION, main


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_torus_json(capsys):
    """`torus` emits a homology document for T(2,3)."""
    code, out = _run(capsys, "torus", "-p", "2", "-q", "3", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["total_dim"] == 3
    assert doc["width"] == 1
    assert doc["n_minus"] == 3
    assert {row["delta"] for row in doc["rows"]} == {-2}


def test_torus_ascii_grid(capsys):
    """T(2,5) renders one δ = -4 row with classes at i in {-5, -4, -3, -2, 0}."""
    code, out = _run(capsys, "torus", "-p", "2", "-q", "5")
    assert code == EXIT_OK
    header, row = out.strip("\n").splitlines()
    assert header.split()[1:] == ["-5", "-4", "-3", "-2", "-1", "0"]
    assert row.split() == ["-4", "1", "1", "1", "1", ".", "1"]


def test_jones_and_euler_agree_on_output(capsys):
    """`jones` and `homology --euler` print the same polynomial."""
    _, out = _run(capsys, "jones", "--braid", "-1,-1,-1", "--format", "json")
    jones = json.loads(out)["jones"]
    _, out = _run(capsys, "homology", "--braid", "-1,-1,-1", "--euler", "--format", "json")
    assert json.loads(out)["euler"] == jones


def test_torus_normalized_csv(capsys):
    """Normalized CSV rows sit at δ = 0 for two strands."""
    code, out = _run(capsys, "torus", "-p", "2", "-q", "4", "--normalized", "--format", "csv")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "i,j,delta,dim"
    assert len(lines) == 5
    assert all(line.split(",")[2] == "0" for line in lines[1:])


def test_homology_with_euler(capsys):
    """`homology --euler` appends the graded Euler characteristic."""
    code, out = _run(capsys, "homology", "--braid", "1,-2,1,-2", "--euler")
    assert code == EXIT_OK
    assert "Euler characteristic:" in out


def test_quantum_window(capsys):
    """--quantum-range keeps only rows with j inside the window."""
    code, out = _run(capsys, "homology", "--torus", "2,3", "--quantum-range", "-6", "0", "--format", "json")
    assert code == EXIT_OK
    assert {row["j"] for row in json.loads(out)["rows"]} == {-2, -6}


def test_bad_braid_is_a_usage_error(capsys):
    """A malformed braid word exits with status 2."""
    code, _ = _run(capsys, "homology", "--braid", "1,x")
    assert code == EXIT_USAGE


def test_bad_torus_pair(capsys):
    """--torus needs exactly two numbers."""
    code, _ = _run(capsys, "homology", "--torus", "2,3,4")
    assert code == EXIT_USAGE


def test_missing_subcommand_exits_with_usage():
    """argparse rejects an empty command line with status 2."""
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == EXIT_USAGE


def test_triple_needs_crossing_for_braids(capsys):
    """Braid input has no circled crossing, so --crossing is required."""
    code, _ = _run(capsys, "triple", "--braid", "-1,-1,-1")
    assert code == EXIT_USAGE


def test_triple_on_family(capsys):
    """`triple --family 332:0` uses the family crossing and reports exactness."""
    code, out = _run(capsys, "triple", "--family", "332:0", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["crossing"] == 5
    assert doc["exact"] is True


def test_t33_triple_text(capsys):
    """The T(3,3) triple prints its shifts and a zero arrow."""
    code, out = _run(capsys, "triple", "--torus", "3,3")
    assert code == EXIT_OK
    assert "w- = -4, w+ = 0" in out
    assert "exact: True" in out


def test_grid_csv(capsys):
    """`grid --format csv` lists the two shifted homologies per (i, δ)."""
    code, out = _run(capsys, "grid", "--torus", "3,3", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "i,delta,dim0,dim1"


def test_jones(capsys):
    """`jones` agrees with the Euler characteristic."""
    code, out = _run(capsys, "jones", "--braid", "1,1,1,2,-1,2", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["agree"] is True


def test_stable_partial_and_refused(capsys):
    """A partial stable table is fine with --max-stage; without it the ceiling is a resource error."""
    code, out = _run(capsys, "stable", "-p", "2", "--cutoff", "-8", "--max-stage", "4", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["complete"] is False
    assert doc["matches_algebra"] is None
    code, _ = _run(capsys, "stable", "-p", "2", "--cutoff", "-40")
    assert code == EXIT_RESOURCE


def test_stable_matches_algebra(capsys):
    """The complete p = 2 table matches its algebra."""
    code, out = _run(capsys, "stable", "-p", "2", "--cutoff", "-4", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["matches_algebra"] is True


def test_product(capsys):
    """`product` multiplies a2 and a3 into stage 5."""
    code, out = _run(capsys, "product", "-p", "2", "--left", "2,-2,0", "--right", "3,-3,0", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["result"] == {"q": 5, "i": -5, "delta": 0}
    assert doc["zero"] is False
    assert doc["commutes"] is True


def test_product_in_empty_degree(capsys):
    """Referring to an empty degree is a usage error."""
    code, _ = _run(capsys, "product", "-p", "2", "--left", "2,-1,0", "--right", "2,-2,0")
    assert code == EXIT_USAGE


def test_verify_unit(capsys):
    """`verify --relation unit` holds and exits 0."""
    code, out = _run(capsys, "verify", "--relation", "unit")
    assert code == EXIT_OK
    assert out.startswith("unit: holds")


def test_verify_failure_exit_code(capsys, monkeypatch):
    """A relation that fails exits with status 1."""
    from app.api.schemas import VerdictDocument
    monkeypatch.setitem(RELATIONS, "unit", lambda: VerdictDocument(relation="unit", holds=False, detail="forced"))
    code, out = _run(capsys, "verify", "--relation", "unit")
    assert code == EXIT_VERIFICATION
    assert "FAILS" in out


@pytest.mark.parametrize("name", [
    "commutativity", "associativity", "p2-square", "p2-mixed", "p2-cube",
    "fusion-surjective-2", "stabilization-2", "t33-triple", "t34-triple",
])
def test_relations_hold(name):
    """Each named relation holds at its finite stages."""
    verdict = run_relation(name)
    assert verdict.holds, verdict.detail


@pytest.mark.slow
@pytest.mark.parametrize("name", [
    "p3-z", "p3-nilpotent", "fusion-surjective-3", "stabilization-3", "t45-triple",
])
def test_slow_relations_hold(name):
    """Relations that need stages with 15 or more crossings."""
    verdict = run_relation(name)
    assert verdict.holds, verdict.detail


@pytest.mark.slow
def test_p3_z_reports_only_the_square():
    """The p3-z verdict names the single product it computes, z1·z1 in T(3,6)."""
    verdict = run_relation("p3-z")
    assert verdict.holds
    assert verdict.detail.startswith("z1·z1 is nonzero at (i=-8, δ=4) of T(3,6)")
    assert "only this product is checked" in verdict.detail

"""Tests for homology tables, δ-gradings, renderers, bases and the Jones cross-check."""
import pytest

from app import workers
from app.complexes.complex import build_complex
from app.complexes.grading import Bidegree, normalization
from app.config import settings
from app.diagrams.braids import BraidWord, braid_closure, parse_braid, torus_diagram
from app.diagrams.diagram import connected_sum, with_basepoint
from app.diagrams.smoothing import smooth_all
from app.exceptions import EmptyTableError, NotACycle
from app.homology.engine import homology_basis, reduced_homology, unreduced_homology
from app.homology.jones import graded_euler_characteristic, kauffman_jones, q, same_polynomial
from app.homology.tables import (
    BigradedTable,
    delta_table,
    render_ascii,
    render_csv,
    render_json,
    splitting_holds,
    width,
)
from app.linalg.gf2 import Gf2Vector


def _make_braid(text: str):
    return braid_closure(parse_braid(text))


def _make_table(*cells) -> BigradedTable:
    return BigradedTable({Bidegree(i, j): n for i, j, n in cells})


# ── dimension tables ──────────────────────────────────────────────────────────

@pytest.mark.parametrize("qq", [2, 3, 4, 5, 6])
def test_two_strand_torus_tables(qq):
    """K̃h(D_{2,q}) has one class at δ = 1-q in each i of {0, -2, ..., -q}."""
    table = reduced_homology(torus_diagram(2, qq))
    assert table.total_dim == qq
    expected = {(0, 1 - qq)} | {(-k, 1 - qq) for k in range(2, qq + 1)}
    assert set(table.delta_entries()) == expected
    assert all(n == 1 for n in table.delta_entries().values())
    assert width(table) == 1


def test_normalized_two_strand_tables_sit_at_delta_zero():
    """After the shift [0, q-1] every class of T_{2,q} has δ = 0."""
    for qq in (2, 3, 4):
        table = reduced_homology(torus_diagram(2, qq)).shifted(normalization(2, qq))
        assert {delta for _, delta in table.delta_entries()} == {0}


def test_unknot_diagrams():
    """Every unknot diagram has one reduced class at (0,0)."""
    for d in (braid_closure(BraidWord(1, ())), _make_braid("-1"), _make_braid("1"), _make_braid("-1,-2")):
        assert reduced_homology(d).entries == {Bidegree(0, 0): 1}


def test_figure_eight_is_thin():
    """The figure-eight knot has five reduced classes on one diagonal."""
    table = reduced_homology(_make_braid("1,-2,1,-2"))
    assert table.total_dim == 5
    assert width(table) == 1


def test_t34_is_not_thin():
    """T(3,4) is the first torus knot of width 2."""
    table = reduced_homology(torus_diagram(3, 4))
    assert table.total_dim == 5
    assert width(table) == 2


def test_homology_is_a_diagram_invariant():
    """D_{3,4} and D_{4,3} give the same table."""
    assert reduced_homology(torus_diagram(3, 4)).entries == reduced_homology(torus_diagram(4, 3)).entries


def test_hopf_unreduced_table():
    """The negative Hopf link: unreduced classes at (0,0), (0,-2), (-2,-4), (-2,-6)."""
    table = unreduced_homology(torus_diagram(2, 2))
    assert table.entries == {Bidegree(0, 0): 1, Bidegree(0, -2): 1, Bidegree(-2, -4): 1, Bidegree(-2, -6): 1}


@pytest.mark.parametrize("text", ["-1,-1,-1", "1,-2,1,-2", "-1,-2,-1,-2,-1,-2", "1,1,2,-1,2"])
def test_reduced_and_unreduced_split(text):
    """Kh^{i,j} = K̃h^{i,j-1} + K̃h^{i,j+1} over GF(2)."""
    d = _make_braid(text)
    assert splitting_holds(unreduced_homology(d), reduced_homology(d))


def test_table_tags_diagram():
    """Tables remember the diagram they came from."""
    d = torus_diagram(2, 3)
    assert reduced_homology(d).diagram_hash == d.fingerprint


# ── δ-tables and width ────────────────────────────────────────────────────────

def test_delta_table_width():
    """Width counts the δ diagonals from lowest to highest."""
    t = _make_table((0, 0, 1), (-2, -4, 1), (-3, -4, 2))
    dt = delta_table(t)
    assert dt.deltas == [0, 2]
    assert dt.width == 2
    assert not dt.thin
    assert dt.entries[(-3, 2)] == 2


def test_empty_table_has_no_width():
    """Width of an empty table raises EmptyTableError."""
    with pytest.raises(EmptyTableError):
        width(BigradedTable({}))


def test_zero_entries_are_dropped():
    """Tables with explicit zeros compare equal to tables without them."""
    assert _make_table((0, 0, 1), (1, 2, 0)) == _make_table((0, 0, 1))


# ── renderers ─────────────────────────────────────────────────────────────────

def test_ascii_grid_layout():
    """Columns are i ascending, rows δ descending, empty cells are dots."""
    text = render_ascii(_make_table((0, 0, 1), (-2, -2, 3)))
    lines = text.splitlines()
    assert lines[0].split()[1:] == ["-2", "-1", "0"]
    assert lines[1].split() == ["2", "3", ".", "."]
    assert lines[2].split() == ["0", ".", ".", "1"]


def test_csv_and_json_rows():
    """CSV and JSON both carry i, j, δ and dim per entry."""
    t = _make_table((0, 0, 1))
    assert render_csv(t).splitlines() == ["i,j,delta,dim", "0,0,0,1"]
    assert '"delta": 0' in render_json(t)


# ── bases ─────────────────────────────────────────────────────────────────────

def test_homology_basis_matches_table():
    """Basis sizes agree with the dimension table."""
    c = build_complex(torus_diagram(3, 3))
    table = reduced_homology(torus_diagram(3, 3))
    basis = homology_basis(c)
    for deg in c.degrees():
        assert basis.dim(deg.i, deg.j) == table.dim(deg.i, deg.j)


def test_basis_representatives_are_cycles():
    """Representatives are cycles with unit coordinates, and boundaries have none."""
    c = build_complex(torus_diagram(2, 4))
    basis = homology_basis(c)
    for deg in c.degrees():
        reps = basis.representatives(deg.i, deg.j)
        for k, v in enumerate(reps):
            assert basis.is_cycle(deg.i, deg.j, v)
            assert basis.coordinates(deg.i, deg.j, v) == Gf2Vector.unit(len(reps), k)
        d_in = c.differential(deg.i - 1, deg.j)
        for col in range(d_in.cols):
            assert basis.is_boundary(deg.i, deg.j, d_in.column(col))


def test_coordinates_reject_non_cycles():
    """A chain that is not a cycle has no homology coordinates."""
    c = build_complex(torus_diagram(2, 2))
    basis = homology_basis(c)
    for deg in c.degrees():
        dmat = c.differential(deg.i, deg.j)
        for col in range(dmat.cols):
            if dmat.column(col):
                with pytest.raises(NotACycle):
                    basis.coordinates(deg.i, deg.j, Gf2Vector.unit(dmat.cols, col))
                return
    pytest.fail("D_{2,2} should have a non-cycle generator")


# ── Jones polynomial ──────────────────────────────────────────────────────────

@pytest.mark.parametrize("text", [
    "-1", "-1,-1", "-1,-1,-1", "1,1,1", "1,-2,1,-2", "1,1,1,2,-1,2",
    "1,-2,1,-2,1,-2", "-1,-2,-1,-2,-1,-2,-1,-2",
])
def test_jones_matches_euler_characteristic(text):
    """The state sum and the Euler characteristic of the reduced table agree."""
    d = _make_braid(text)
    assert same_polynomial(kauffman_jones(d), graded_euler_characteristic(reduced_homology(d)))


def test_unknot_jones_is_one():
    """The reduced Jones polynomial of the unknot is 1."""
    assert same_polynomial(kauffman_jones(_make_braid("1")), 1)


def test_trefoil_euler_characteristic():
    """The negative trefoil has χ = q^-2 + q^-6 - q^-8."""
    chi = graded_euler_characteristic(reduced_homology(torus_diagram(2, 3)))
    assert same_polynomial(chi, q ** -2 + q ** -6 - q ** -8)


# ── invariance ────────────────────────────────────────────────────────────────

def _make_sum():
    return connected_sum(torus_diagram(2, 2), torus_diagram(2, 3))


@pytest.mark.parametrize("make", [lambda: torus_diagram(3, 3), _make_sum], ids=["D33", "D22#D23"])
def test_one_bit_flip_changes_circle_count_by_one(make):
    """Every edge of the cube merges two circles or splits one."""
    d = make()
    for state in range(1 << d.n_crossings):
        circles = smooth_all(d, state).n_circles
        for k in range(d.n_crossings):
            assert abs(smooth_all(d, state ^ 1 << k).n_circles - circles) == 1


@pytest.mark.parametrize("make", [lambda: torus_diagram(3, 3), lambda: torus_diagram(2, 5), _make_sum],
                         ids=["D33", "D25", "D22#D23"])
def test_table_does_not_depend_on_basepoint(make):
    """Reduced homology over GF(2) is the same for every basepoint arc."""
    d = make()
    expected = reduced_homology(d).entries
    for arc in range(d.n_arcs):
        assert reduced_homology(with_basepoint(d, arc)).entries == expected


# ── workers ───────────────────────────────────────────────────────────────────

def test_worker_processes_give_the_inline_table(monkeypatch):
    """Ranks computed in worker processes reproduce the inline table."""
    d = torus_diagram(3, 4)
    inline = reduced_homology(d)
    monkeypatch.setattr(settings, "KH_WORKERS", 2)
    try:
        assert reduced_homology(d).entries == inline.entries
        assert workers._pool is not None
    finally:
        workers.shutdown()
    assert workers._pool is None

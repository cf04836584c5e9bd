"""Tests for exact triples, connecting maps, total sequence grids and the consistency checks."""
import pytest

from app.algebra.movie import fusion_movie
from app.diagrams.braids import FAMILY_CROSSING, braid_closure, family_diagram, parse_braid, torus_diagram, usual_crossing
from app.diagrams.diagram import NEGATIVE, POSITIVE
from app.exceptions import DiagramError
from app.homology.engine import homology_table, reduced_homology
from app.maps.base import verify_chain_map
from app.sequences.checks import homalg_check, triplethin_check
from app.sequences.grid import exactness_holds, total_sequence_grid
from app.sequences.triple import (
    exact_triple,
    inclusion_chain_map,
    insert_bit,
    quotient_chain_map,
    remove_bit,
    triple_square,
)


def _make_grid(d, crossing):
    t = exact_triple(d, crossing)
    grid = total_sequence_grid(t)
    return t, grid, homology_table(t.complex)


def test_bit_helpers_invert():
    """Removing an inserted bit returns the original state."""
    for state in range(16):
        for k in range(5):
            for bit in (0, 1):
                grown = insert_bit(state, k, bit)
                assert grown >> k & 1 == bit
                assert remove_bit(grown, k) == state


# ── the T(3,3) triple ─────────────────────────────────────────────────────────

def test_t33_triple_shifts():
    """At the usual crossing of D_{3,3}: w- = 2 - 6 = -4 and w+ = 0."""
    t = exact_triple(torus_diagram(3, 3), usual_crossing(3, 3))
    assert t.sign == NEGATIVE
    assert t.w_minus == -4
    assert t.w_plus == 0
    assert t.d0.n_minus == 2


def test_t33_triple_diagrams():
    """D1 is T(2,4) and D0 the two-component unlink."""
    t = exact_triple(torus_diagram(3, 3), usual_crossing(3, 3))
    assert reduced_homology(t.d1).entries == reduced_homology(torus_diagram(2, 4)).entries
    assert t.d0.n_components == 2
    assert reduced_homology(t.d0).total_dim == 2


def test_t33_connecting_map_vanishes():
    """The only possible arrow of the T(3,3) grid is zero and the sequence is exact."""
    _, grid, table = _make_grid(torus_diagram(3, 3), usual_crossing(3, 3))
    assert grid.is_zero
    assert exactness_holds(grid, table)
    assert table.total_dim == grid.zero.total_dim + grid.one.total_dim


def test_triple_maps_are_chain_maps():
    """The inclusion of C̃(D1) and the projection to C̃(D0) commute with d."""
    t = exact_triple(torus_diagram(3, 3), usual_crossing(3, 3))
    assert verify_chain_map(inclusion_chain_map(t))
    assert verify_chain_map(quotient_chain_map(t))


def test_t34_connecting_map_is_an_isomorphism_on_one_line():
    """At crossing 7 of D_{3,4} the only arrow is (-5,-4) -> (-4,-6), between two lines, of rank 1."""
    _, grid, table = _make_grid(torus_diagram(3, 4), FAMILY_CROSSING["342"])
    assert not grid.is_zero
    assert [(a.source, a.target) for a in grid.arrows] == [((-5, -4), (-4, -6))]
    assert grid.arrows[0].rank == 1
    assert grid.entries[(-5, -4)][0] == 1
    assert grid.entries[(-4, -6)][1] == 1
    assert exactness_holds(grid, table)


@pytest.mark.slow
def test_four_strand_triple_at_usual_crossing():
    """For D_{4,5}: w- = -6N-1 = -7 with N = 1, w+ = 0, and D0 has the table of T(2,3)."""
    t = exact_triple(torus_diagram(4, 5), usual_crossing(4, 5))
    assert t.w_minus == -7
    assert t.w_plus == 0
    assert reduced_homology(t.d0).entries == reduced_homology(torus_diagram(2, 3)).entries


# ── naturality ────────────────────────────────────────────────────────────────

def test_saddle_maps_the_short_exact_sequence():
    """A fusion saddle away from the crossing commutes with i and q at chain level."""
    frame = fusion_movie(2, 2, 3).frames[0]
    middle = frame.source.labels[3]
    square = triple_square(exact_triple(frame.source, middle), frame)
    assert verify_chain_map(square.one)
    assert verify_chain_map(square.zero)
    assert square.inclusion_commutes()
    assert square.quotient_commutes()


def test_saddle_through_the_crossing_is_refused():
    """The square needs the saddle to stay away from the crossing."""
    frame = fusion_movie(2, 2, 3).frames[0]
    with pytest.raises(DiagramError):
        triple_square(exact_triple(frame.source, frame.source.labels[0]), frame)


def test_positive_crossing_shifts():
    """At a positive crossing w- = 0 and w+ = 1 + n-(D1) - n-(D)."""
    d = braid_closure(parse_braid("1,-2,1,-2"))
    t = exact_triple(d, 0)
    assert t.sign == POSITIVE
    assert t.w_minus == 0
    assert t.w_plus == 1 + t.d1.n_minus - d.n_minus
    _, grid, table = _make_grid(d, 0)
    assert exactness_holds(grid, table)


def test_unknown_crossing_raises():
    """Asking for a crossing the diagram lacks is a DiagramError."""
    with pytest.raises(DiagramError):
        exact_triple(torus_diagram(2, 3), 7)


@pytest.mark.parametrize("text,crossing", [
    ("-1,-1,-1", 1),
    ("1,1,1", 2),
    ("1,-2,1,-2", 1),
    ("1,1,1,2,-1,2", 4),
    ("-1,-2,-1,-2,-1,-2", 0),
])
def test_exactness_everywhere(text, crossing):
    """The computed table always equals the one the grid predicts."""
    _, grid, table = _make_grid(braid_closure(parse_braid(text)), crossing)
    assert exactness_holds(grid, table)
    for arrow in grid.arrows:
        assert arrow.target == (arrow.source[0] + 1, arrow.source[1] - 2)


# ── intermediate families ─────────────────────────────────────────────────────

@pytest.mark.parametrize("qq", [0, 1, 2, 3])
def test_332_family_slot_is_empty(qq):
    """The (-5, -q-2) entry of the 332 family is empty, and the triple is exact."""
    d = family_diagram("332", qq)
    assert reduced_homology(d).delta_entries().get((-5, -qq - 2), 0) == 0
    _, grid, table = _make_grid(d, FAMILY_CROSSING["332"])
    assert exactness_holds(grid, table)


@pytest.mark.parametrize("qq", [0, 1, 2])
def test_342_family_slot_is_empty(qq):
    """The (-5, -q-4) entry of the 342 family is empty, and the triple is exact."""
    d = family_diagram("342", qq)
    assert reduced_homology(d).delta_entries().get((-5, -qq - 4), 0) == 0
    _, grid, table = _make_grid(d, FAMILY_CROSSING["342"])
    assert exactness_holds(grid, table)


# ── checks and output ─────────────────────────────────────────────────────────

def test_checks_hold_on_t33():
    """homalg applies to the split T(3,3) triple and holds."""
    _, grid, table = _make_grid(torus_diagram(3, 3), usual_crossing(3, 3))
    homalg = homalg_check(grid, table)
    assert homalg.applies and homalg.holds
    assert triplethin_check(grid, table).holds


def test_triplethin_on_trefoil():
    """For thin triples the width of the combined grid fixes the connecting map."""
    _, grid, table = _make_grid(torus_diagram(2, 3), 0)
    verdict = triplethin_check(grid, table)
    assert verdict.holds


def test_grid_dict_and_render():
    """The grid serialises its shifts, entries and arrows and renders subscripts."""
    t, grid, _ = _make_grid(torus_diagram(3, 3), usual_crossing(3, 3))
    data = grid.to_dict()
    assert data["w_minus"] == -4
    assert data["crossing"] == usual_crossing(3, 3)
    assert {"i", "delta", "dim0", "dim1"} == set(data["entries"][0])
    text = grid.render()
    assert "₀" in text and "₁" in text


@pytest.mark.slow
def test_t45_connecting_map_vanishes():
    """The T(4,5) triple at the usual crossing has zero differential."""
    _, grid, table = _make_grid(torus_diagram(4, 5), usual_crossing(4, 5))
    assert grid.is_zero
    assert exactness_holds(grid, table)

"""Tests for chain maps: basepoint transport, the connected-sum isomorphism and orientation changes."""
import pytest

from app.algebra.movie import fusion_movie
from app.complexes.complex import build_complex
from app.diagrams.braids import braid_closure, parse_braid, torus_diagram
from app.diagrams.diagram import connected_sum
from app.exceptions import ChainMapError, DiagramError
from app.homology.engine import homology_basis, reduced_homology
from app.homology.tables import tensor_table
from app.maps.base import ChainMap, add_maps, compose, identity_map, induced_on_homology, is_identity, maps_equal, verify_chain_map
from app.maps.basepoint import basepoint_inverse, basepoint_transport, transport_commutes_with_handle
from app.maps.connected_sum import connected_sum_iso, connected_sum_square
from app.maps.handles import one_handle_move
from app.maps.orientation import orientation_change


def _make_other_component_arc(d):
    base = d.component_of(d.basepoint)
    return next(a for a in range(d.n_arcs) if d.component_of(a) != base)


# ── generic maps ──────────────────────────────────────────────────────────────

def test_identity_and_sums():
    """id + id is the zero map over GF(2)."""
    c = build_complex(torus_diagram(2, 3))
    ident = identity_map(c)
    assert is_identity(ident)
    twice = add_maps(ident, ident)
    assert all(twice.matrix(d.i, d.j).is_zero() for d in c.degrees())
    assert not maps_equal(ident, twice)


def test_chain_map_needs_one_description():
    """A chain map is given by generator images or by blocks, never both."""
    c = build_complex(torus_diagram(2, 2))
    with pytest.raises(ValueError):
        ChainMap(c, c, (0, 0))


def test_image_outside_target_raises():
    """An image that is not a generator of the target degree is an error."""
    c = build_complex(torus_diagram(2, 2))
    deg = c.degrees()[0]
    with pytest.raises(ChainMapError):
        bad = ChainMap(c, c, (0, 0), image=lambda label: [(label[0], 0)], name="bad")
        bad.matrix(deg.i, deg.j)


def test_identity_induces_identity_on_homology():
    """The identity map is the identity matrix in every homology degree."""
    c = build_complex(torus_diagram(3, 3))
    basis = homology_basis(c)
    induced = induced_on_homology(identity_map(c), basis, basis)
    assert induced.is_injective() and induced.is_surjective()
    assert induced.rank() == reduced_homology(torus_diagram(3, 3)).total_dim


# ── basepoint transport ───────────────────────────────────────────────────────

def test_basepoint_transport_on_hopf_link():
    """Moving the basepoint to the other component is a chain isomorphism with inverse g."""
    d = torus_diagram(2, 2)
    p, p2 = d.basepoint, _make_other_component_arc(d)
    f = basepoint_transport(d, p, p2)
    g = basepoint_inverse(d, p, p2)
    assert verify_chain_map(f)
    assert verify_chain_map(g)
    assert is_identity(compose(g, f))
    assert is_identity(compose(f, g))


def test_basepoint_transport_on_t33():
    """The transport is an isomorphism on homology for a three-component link."""
    d = torus_diagram(3, 3)
    p2 = _make_other_component_arc(d)
    f = basepoint_transport(d, d.basepoint, p2)
    induced = induced_on_homology(f, homology_basis(f.source), homology_basis(f.target))
    assert induced.is_injective() and induced.is_surjective()


# ── connected sums ────────────────────────────────────────────────────────────

def test_connected_sum_of_hopf_links():
    """K̃h(D_{2,2} # D_{2,2}) has dimension 2 x 2 and matches the tensor table."""
    d = torus_diagram(2, 2)
    table = reduced_homology(connected_sum(d, d))
    assert table.total_dim == 4
    assert table.entries == tensor_table(reduced_homology(d), reduced_homology(d)).entries


def test_connected_sum_iso_inverts():
    """S and h are mutually inverse chain maps of bidegree (0,0)."""
    iso = connected_sum_iso(torus_diagram(2, 2), torus_diagram(2, 3))
    assert iso.spliced.diagram.n_crossings == 5
    assert verify_chain_map(iso.forward)
    assert verify_chain_map(iso.inverse)
    assert is_identity(compose(iso.forward, iso.inverse))
    back = compose(iso.inverse, iso.forward)
    for deg in iso.tensor.degrees():
        m = back.matrix(deg.i, deg.j)
        assert m.rows == m.cols
        assert all(col == 1 << k for k, col in enumerate(m.columns))


@pytest.mark.parametrize("left,right", [("-1,-1,-1", "1,-2,1,-2"), ("1,1,1", "-1,-1")])
def test_connected_sum_tables(left, right):
    """Reduced homology is multiplicative under connected sum."""
    a = braid_closure(parse_braid(left))
    b = braid_closure(parse_braid(right))
    summed = reduced_homology(connected_sum(a, b))
    assert summed.entries == tensor_table(reduced_homology(a), reduced_homology(b)).entries


# ── orientation changes ───────────────────────────────────────────────────────

def test_reversing_hopf_component_shifts_table():
    """Reversing one Hopf component moves the table by (2l, 6l) with l = -1."""
    d = torus_diagram(2, 2)
    change = orientation_change(d, 0)
    assert change.linking_sum == -1
    assert change.delta_shift == (-2, -2)
    assert verify_chain_map(change.map)
    moved = reduced_homology(change.reversed).shifted(change.shift)
    assert moved.entries == reduced_homology(d).entries


def test_reversing_t33_component_is_an_isomorphism():
    """The relabelling map induces an isomorphism on homology."""
    change = orientation_change(torus_diagram(3, 3), 1)
    f = change.map
    induced = induced_on_homology(f, homology_basis(f.source), homology_basis(f.target))
    assert induced.is_injective() and induced.is_surjective()


# ── naturality ────────────────────────────────────────────────────────────────

def _make_frame():
    """The saddle of the p = 2 fusion movie on D_{2,2} ♯ D_{2,3}."""
    return fusion_movie(2, 2, 3).frames[0]


def test_basepoint_transport_commutes_with_saddle():
    """Moving the basepoint to the other component commutes with the fusion saddle."""
    h = _make_frame()
    p2 = next(a for a in range(h.source.n_arcs)
              if h.source.component_of(a) != h.source.component_of(h.source.basepoint) and a not in h.locus)
    assert transport_commutes_with_handle(h, h.source.basepoint, p2)


@pytest.mark.parametrize("left", [(2, 2), (2, 3)])
def test_connected_sum_square_commutes(left):
    """Φ̃ ∘ S = S ∘ (1 ⊗ Φ) for the fusion saddle on the right summand."""
    square = connected_sum_square(torus_diagram(*left), _make_frame())
    assert verify_chain_map(square.tensor_handle())
    assert verify_chain_map(square.lifted)
    assert square.commutes()


def test_connected_sum_square_needs_saddle_off_basepoint():
    """A saddle on the summand's basepoint arc has no square."""
    d = torus_diagram(2, 3)
    other = next(a for a in range(d.n_arcs) if a != d.basepoint)
    with pytest.raises(DiagramError):
        connected_sum_square(torus_diagram(2, 2), one_handle_move(d, d.basepoint, other))

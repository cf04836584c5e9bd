"""Tests for the directed system of torus stages, stable tables and stable classes."""
import pytest

from app.complexes.grading import Bidegree
from app.config import settings
from app.diagrams.braids import torus_diagram
from app.exceptions import CertificationError, DiagramError, ResourceLimitError
from app.homology.engine import reduced_homology
from app.maps.base import verify_chain_map
from app.stable.classes import stable_class, stable_product, stable_unit, width_lower_bound_witness
from app.stable.system import DirectedSystem, directed_system, inclusion_map, stage_complex, stage_table, stosic_range
from app.stable.table import algebra_dimensions, algebra_monomials, required_stage, stable_table


# ── directed system ───────────────────────────────────────────────────────────

def test_stosic_range():
    """Stage q is stable in degree i when p < q and i > 3 - p - q."""
    assert stosic_range(2, 4, -2)
    assert not stosic_range(2, 4, -3)
    assert not stosic_range(3, 3, 0)
    assert required_stage(2, -8) == 10
    assert required_stage(3, -5) == 6
    assert required_stage(4, 0) == 5


def test_stage_needs_valid_pair():
    """Stages exist for p >= 2 and q >= 1 only."""
    with pytest.raises(DiagramError):
        stage_complex(1, 3)
    with pytest.raises(DiagramError):
        stage_complex(2, 0)


def test_normalized_stages_of_two_strands():
    """Normalized T(2,q) has one class at δ = 0 for i in {0, -2, ..., -q}."""
    table = stage_table(2, 4)
    assert table.delta_entries() == {(0, 0): 1, (-2, 0): 1, (-3, 0): 1, (-4, 0): 1}


def test_inclusion_is_a_degree_zero_chain_map():
    """i_q commutes with d and has bidegree (0,0) on normalized stages."""
    for p, q in ((2, 2), (3, 2)):
        f = inclusion_map(p, q)
        assert f.bidegree == Bidegree(0, 0)
        assert verify_chain_map(f)


def test_two_strand_inclusions_are_injective():
    """For p = 2 every inclusion is injective on homology."""
    system = directed_system(2, 5, start=2)
    for q in (2, 3, 4):
        assert system.is_injective(q)


@pytest.mark.parametrize("p,qs", [(2, range(3, 7)), (3, range(4, 6))])
def test_stabilization_in_stosic_range(p, qs):
    """Inclusions are isomorphisms throughout the Stošić range."""
    system = DirectedSystem(p)
    for q in qs:
        assert system.stabilization_failures(q) == []


# ── stable tables ─────────────────────────────────────────────────────────────

def test_two_strand_stable_table():
    """K̃h(T_{2,∞}) on i >= -8 is one class at δ = 0 in every i of {0, -2, ..., -8}."""
    table = stable_table(2, -8)
    assert table.complete
    assert table.stage == 10
    assert table.entries == {(i, 0): 1 for i in (0, -2, -3, -4, -5, -6, -7, -8)}
    assert table.matches(algebra_dimensions(2, -8))
    assert set(table.evidence.values()) == {"stosic"}


def test_three_strand_stable_table():
    """The p = 3 stable table on i >= -5 matches the monomial count of its algebra."""
    table = stable_table(3, -5)
    assert table.complete
    assert table.matches(algebra_dimensions(3, -5))


def test_stable_table_ceiling(monkeypatch):
    """Beyond the stage ceiling the table is refused, unless a partial one is asked for."""
    monkeypatch.setattr(settings, "KH_STABLE_MAX_STAGE", 4)
    with pytest.raises(ResourceLimitError):
        stable_table(2, -8)
    partial = stable_table(2, -8, max_stage=4)
    assert not partial.complete
    assert partial.stage == 4
    assert (-4, 0) in partial.candidates
    assert partial.entries[(0, 0)] == 1


def test_stable_table_rejects_positive_cutoff():
    """The cutoff bounds i from below and must not be positive."""
    with pytest.raises(DiagramError):
        stable_table(2, 1)


def test_stable_table_dict_form():
    """Entries carry their evidence; candidates are listed apart."""
    data = stable_table(2, -3).to_dict()
    assert data["complete"]
    assert {e["evidence"] for e in data["entries"]} == {"stosic"}
    assert data["candidates"] == []
    assert "δ\\i" in stable_table(2, -3).render()


def test_algebra_monomials():
    """Normal forms respect the exponent caps of each generator."""
    two = algebra_monomials(2, -6)
    assert two[(-6, 0)] == ["x^3"]
    assert two[(-5, 0)] == ["xy"]
    three = algebra_dimensions(3, -5)
    assert three == {(0, 0): 1, (-2, 0): 1, (-3, 0): 1, (-4, 2): 1, (-5, 0): 1}
    four = algebra_monomials(4, -8)
    assert set(four[(-8, 4)]) == {"z^2", "xv"}
    assert sum(len(words) for words in four.values()) == 11
    with pytest.raises(DiagramError):
        algebra_monomials(5, -4)


# ── stable classes ────────────────────────────────────────────────────────────

def test_stable_class_certification():
    """A class is pushed until its degree is in the stable range, staying nonzero."""
    a2 = stable_class(2, -2, 0, witness_q=2)
    assert a2.survival == (2, 3, 4)
    assert a2.certified_at == 4
    assert not a2.zero
    assert a2.to_dict()["stage"] == 2


def test_stable_product_for_two_strands():
    """a2·a3 is the nonzero stable class at (-5, 0)."""
    a2 = stable_class(2, -2, 0, witness_q=2)
    a3 = stable_class(2, -3, 0, witness_q=3)
    product = stable_product(a2, a3)
    assert not product.zero
    assert (product.i, product.delta) == (-5, 0)


def test_stable_unit():
    """The unit survives every inclusion."""
    unit = stable_unit(2)
    assert unit.stage == 1
    assert not unit.zero


def test_stable_class_in_empty_degree():
    """An empty witness degree cannot be certified."""
    with pytest.raises(CertificationError):
        stable_class(2, -1, 0, witness_q=3)


def test_stable_product_needs_same_p():
    """Stable classes of different p do not multiply."""
    with pytest.raises(DiagramError):
        stable_product(stable_unit(2), stable_unit(3))


def test_width_witness_for_t43():
    """T(4,3) has width at least 2, witnessed by z."""
    witness = width_lower_bound_witness(3)
    assert witness.word == "z"
    assert witness.bound == 2
    assert witness.to_dict()["witness"] == {"i": -4, "delta": 2}


@pytest.mark.slow
def test_width_witness_for_t44():
    """T(4,4) has width at least 3, witnessed by v."""
    witness = width_lower_bound_witness(4)
    assert witness.word == "v"
    assert witness.bound == 3


def test_t44_class_behind_the_witness():
    """Raw K̃h(T(4,4)) has one class at (i, δ) = (-6, -5), the class v normalizes to."""
    assert reduced_homology(torus_diagram(4, 4)).delta_entries()[(-6, -5)] == 1


@pytest.mark.slow
def test_width_witness_for_t45():
    """T(4,5) has width at least 3, witnessed by v pushed to stage 5."""
    witness = width_lower_bound_witness(5)
    assert witness.word == "v"
    assert witness.bound >= 3
    assert not witness.witness.is_zero

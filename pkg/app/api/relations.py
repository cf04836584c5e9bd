"""
Named relation checks for the `verify` subcommand.

Every check computes at finite stages and returns a VerdictDocument; the
CLI exits with status 1 when `holds` is False.
"""
import logging
import time
from typing import Callable

from app.algebra.products import (
    fusion_product,
    same_class,
    torus_class,
    verify_associativity,
    verify_commutativity,
    verify_surjectivity,
    verify_unit,
)
from app.api.schemas import RankRow, VerdictDocument
from app.diagrams.braids import FAMILY_CROSSING, torus_diagram, usual_crossing
from app.homology.engine import homology_table
from app.sequences.grid import exactness_holds, total_sequence_grid
from app.sequences.triple import exact_triple
from app.stable.classes import stable_class, stable_product
from app.stable.system import DirectedSystem

log = logging.getLogger("khtorus.verify")

RELATIONS: dict[str, Callable[[], VerdictDocument]] = {}


def relation(name: str):
    def register(fn):
        RELATIONS[name] = fn
        return fn
    return register


def run_relation(name: str) -> VerdictDocument:
    t0 = time.perf_counter()
    verdict = RELATIONS[name]()
    log.info(f"Relation {name}: {'holds' if verdict.holds else 'FAILS'} "
             f"({time.perf_counter() - t0:.2f}s)")
    return verdict


def _a(n: int):
    """The generator a_n of K̃h(T_{2,n}) in homological degree -n."""
    return torus_class(2, n, -n, 0)


@relation("unit")
def _unit() -> VerdictDocument:
    holds = verify_unit(_a(3))
    return VerdictDocument(relation="unit", holds=holds, detail="1·a3 = a3·1 = i(a3) in T(2,4)")


@relation("commutativity")
def _commutativity() -> VerdictDocument:
    holds = verify_commutativity(_a(2), _a(3))
    return VerdictDocument(relation="commutativity", holds=holds, detail="a2·a3 = a3·a2 in T(2,5)")


@relation("associativity")
def _associativity() -> VerdictDocument:
    a2 = _a(2)
    holds = verify_associativity(a2, a2, a2)
    return VerdictDocument(relation="associativity", holds=holds, detail="(a2·a2)·a2 = a2·(a2·a2) in T(2,6)")


@relation("p2-square")
def _p2_square() -> VerdictDocument:
    product = fusion_product(_a(2), _a(2))
    holds = not product.is_zero and same_class(product, _a(4))
    return VerdictDocument(relation="p2-square", holds=holds, detail="a2·a2 = a4 in T(2,4)")


@relation("p2-mixed")
def _p2_mixed() -> VerdictDocument:
    product = fusion_product(_a(2), _a(3))
    holds = not product.is_zero and same_class(product, _a(5))
    return VerdictDocument(relation="p2-mixed", holds=holds, detail="a2·a3 = a5 in T(2,5)")


@relation("p2-cube")
def _p2_cube() -> VerdictDocument:
    a2, a3 = _a(2), _a(3)
    cube = fusion_product(fusion_product(a2, a2), a2)
    square = fusion_product(a3, a3)
    holds = not cube.is_zero and same_class(cube, square)
    return VerdictDocument(relation="p2-cube", holds=holds, detail="a2³ = a3² = a6 in T(2,6)")


@relation("p3-z")
def _p3_z() -> VerdictDocument:
    z = torus_class(3, 3, -4, 2)
    holds = not fusion_product(z, z).is_zero
    found = "nonzero" if holds else "zero"
    return VerdictDocument(relation="p3-z", holds=holds,
                           detail=f"z1·z1 is {found} at (i=-8, δ=4) of T(3,6); only this product is checked")


@relation("p3-nilpotent")
def _p3_nilpotent() -> VerdictDocument:
    x = stable_class(3, -2, 0, witness_q=3)
    y = stable_class(3, -3, 0, witness_q=3)
    holds = stable_product(x, x).zero and stable_product(y, y).zero
    return VerdictDocument(relation="p3-nilpotent", holds=holds, detail="x² = y² = 0 for p=3")


def _surjectivity(name: str, q: int) -> VerdictDocument:
    rows, holds = [], True
    for q2 in (3, 4):
        cert = verify_surjectivity(2, q, q2)
        holds = holds and cert.holds
        rows += [RankRow(**row) for row in cert.to_rows()]
    return VerdictDocument(relation=name, holds=holds, detail=f"T(2,{q}) ⊗ T(2,q') -> T(2,{q}+q') onto, q' = 3, 4",
                           certificate=rows)


@relation("fusion-surjective-2")
def _fusion_surjective_2() -> VerdictDocument:
    return _surjectivity("fusion-surjective-2", 2)


@relation("fusion-surjective-3")
def _fusion_surjective_3() -> VerdictDocument:
    return _surjectivity("fusion-surjective-3", 3)


def _stabilization(name: str, p: int, upto: int) -> VerdictDocument:
    system = DirectedSystem(p)
    failures = []
    for q in range(p + 1, upto + 1):
        failures += [(q, deg) for deg in system.stabilization_failures(q)]
    detail = "i_q* is an isomorphism in the Stošić range" if not failures else \
        "fails at " + ", ".join(f"q={q} (i={d.i}, δ={d.delta})" for q, d in failures)
    return VerdictDocument(relation=name, holds=not failures, detail=f"p={p}, q <= {upto}: {detail}")


@relation("stabilization-2")
def _stabilization_2() -> VerdictDocument:
    return _stabilization("stabilization-2", 2, 7)


@relation("stabilization-3")
def _stabilization_3() -> VerdictDocument:
    return _stabilization("stabilization-3", 3, 6)


def _triple(name: str, p: int, q: int, crossing: int, vanishing: bool) -> VerdictDocument:
    t = exact_triple(torus_diagram(p, q), crossing)
    grid = total_sequence_grid(t)
    exact = exactness_holds(grid, homology_table(t.complex))
    holds = exact and grid.is_zero == vanishing
    kind = "zero" if grid.is_zero else "nonzero"
    return VerdictDocument(relation=name, holds=holds,
                           detail=f"T({p},{q}) at crossing {crossing}: connecting map {kind}, exact={exact}")


@relation("t33-triple")
def _t33_triple() -> VerdictDocument:
    return _triple("t33-triple", 3, 3, usual_crossing(3, 3), vanishing=True)


@relation("t34-triple")
def _t34_triple() -> VerdictDocument:
    return _triple("t34-triple", 3, 4, FAMILY_CROSSING["342"], vanishing=False)


@relation("t45-triple")
def _t45_triple() -> VerdictDocument:
    return _triple("t45-triple", 4, 5, usual_crossing(4, 5), vanishing=True)

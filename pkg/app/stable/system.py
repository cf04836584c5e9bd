"""
The directed system of normalized torus stages

    K̃h(T_{p,1})[0,0] -> K̃h(T_{p,2})[0,p-1] -> ... -> K̃h(T_{p,q})[0,(p-1)(q-1)] -> ...

Stage q is C̃(D_{p,q}) shifted by [0,(p-1)(q-1)]. The inclusion i_q sends
C̃(D_{p,q}) onto the subcomplex of C̃(D_{p,q+1}) where the top row of
crossings is 1-smoothed; with the shifts it has bidegree (0,0).
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from functools import lru_cache

from app.complexes.complex import GradedComplex, Label, apply_shift, build_complex, translate
from app.complexes.grading import Bidegree, normalization
from app.diagrams.braids import top_row, torus_diagram
from app.diagrams.diagram import smoothing_surgery
from app.exceptions import ChainMapError, DiagramError
from app.homology.engine import HomologyBasis, homology_table
from app.homology.tables import BigradedTable
from app.linalg.gf2 import rank
from app.maps.base import ChainMap, GradedMatrix, induced_on_homology

log = logging.getLogger("khtorus.stable")


def stosic_range(p: int, q: int, i: int) -> bool:
    """Whether the inclusion out of stage q is known to be an isomorphism in degree i."""
    return p < q and i > 3 - p - q


@lru_cache(maxsize=32)
def stage_complex(p: int, q: int) -> GradedComplex:
    if p < 2 or q < 1:
        raise DiagramError(f"torus stage needs p >= 2 and q >= 1, got ({p}, {q})")
    return apply_shift(build_complex(torus_diagram(p, q)), normalization(p, q))


@lru_cache(maxsize=32)
def stage_basis(p: int, q: int) -> HomologyBasis:
    return HomologyBasis(stage_complex(p, q))


@lru_cache(maxsize=32)
def stage_table(p: int, q: int) -> BigradedTable:
    t0 = time.perf_counter()
    table = homology_table(stage_complex(p, q))
    log.info(f"Stage T({p},{q}) done: {table.total_dim} classes ({time.perf_counter() - t0:.2f}s)")
    return table


@lru_cache(maxsize=32)
def inclusion_map(p: int, q: int) -> ChainMap:
    """i_q: stage q -> stage q+1, bidegree (0,0) on normalized complexes."""
    big = torus_diagram(p, q + 1)
    row = top_row(p, q + 1)
    surgery = smoothing_surgery(big, row, 1)
    if surgery.diagram != torus_diagram(p, q):
        raise ChainMapError(f"1-smoothing the top row of D({p},{q + 1}) does not give D({p},{q})")
    source, target = stage_complex(p, q), stage_complex(p, q + 1)
    top = sum(1 << big.crossing_index(c) for c in row)
    maps: dict[int, tuple[int, ...]] = {}

    def circle_map(state: int) -> tuple[int, ...]:
        found = maps.get(state)
        if found is None:
            small = source.cube.labels[state]
            whole = target.cube.labels[state | top]
            out = [-1] * source.cube.counts[state]
            for arc, circle in enumerate(whole):
                out[small[surgery.arc_map[arc]]] = circle
            found = maps[state] = tuple(out)
        return found

    def image(label: Label) -> list[Label]:
        state, mask = label
        return [(state | top, translate(mask, circle_map(state)))]

    return ChainMap(source, target, (0, 0), image=image, name=f"i[{p},{q}]")


def inclusion_on_homology(p: int, q: int, degrees=None) -> GradedMatrix:
    """i_q* in the deterministic homology bases, per normalized source degree."""
    if degrees is None:
        degrees = stage_table(p, q).support()
    return induced_on_homology(inclusion_map(p, q), stage_basis(p, q), stage_basis(p, q + 1), degrees)


@dataclass
class DirectedSystem:
    p: int
    stages: dict[int, BigradedTable] = field(default_factory=dict)
    inclusions: dict[int, GradedMatrix] = field(default_factory=dict)

    def table(self, q: int) -> BigradedTable:
        found = self.stages.get(q)
        if found is None:
            found = self.stages[q] = stage_table(self.p, q)
        return found

    def inclusion(self, q: int) -> GradedMatrix:
        found = self.inclusions.get(q)
        if found is None:
            found = self.inclusions[q] = inclusion_on_homology(self.p, q, self.table(q).support())
        return found

    def extend(self, upto: int, start: int = 1):
        for q in range(start, upto):
            self.inclusion(q)
        self.table(upto)

    def is_iso_at(self, q: int, deg: Bidegree) -> bool:
        """i_q* is an isomorphism K̃h^{deg}(stage q) -> K̃h^{deg}(stage q+1)."""
        n = self.table(q).dim(deg.i, deg.j)
        if n != self.table(q + 1).dim(deg.i, deg.j):
            return False
        if n == 0:
            return True
        return rank(self.inclusion(q).block(deg.i, deg.j)) == n

    def stabilization_failures(self, q: int) -> list[Bidegree]:
        """Degrees in the Stošić range of stage q where i_q* is not an isomorphism."""
        degrees = set(self.table(q).support()) | set(self.table(q + 1).support())
        return sorted(
            deg for deg in degrees
            if stosic_range(self.p, q, deg.i) and not self.is_iso_at(q, deg)
        )

    def is_injective(self, q: int) -> bool:
        return self.inclusion(q).is_injective()


def directed_system(p: int, upto: int, start: int = 1) -> DirectedSystem:
    system = DirectedSystem(p)
    system.extend(upto, start)
    log.info(f"Directed system for p={p}: stages {start}..{upto}")
    return system

"""
Homology of graded complexes: dimension tables via two ranks per slice,
and explicit bases (cycle representatives modulo boundaries) on request.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from app.complexes.complex import GradedComplex, build_complex
from app.complexes.grading import Bidegree
from app.diagrams.diagram import LinkDiagram
from app.homology.tables import BigradedTable
from app.linalg.gf2 import Gf2SparseMatrix, Gf2Vector, QuotientBasis, kernel_basis, rank
from app.workers import map_ordered

log = logging.getLogger("khtorus.homology")


def homology_table(c: GradedComplex) -> BigradedTable:
    t0 = time.perf_counter()
    blocks = [(deg.i, deg.j) for deg in c.degrees()]
    # matrices are built here; only their ranks go to the worker processes
    ranks = dict(zip(blocks, map_ordered(rank, [c.differential(i, j) for i, j in blocks])))
    entries = {
        Bidegree(i, j): c.dim(i, j) - ranks[(i, j)] - ranks.get((i - 1, j), 0)
        for i, j in blocks
    }
    table = BigradedTable(entries, c.reduced, c.shift, c.fingerprint)
    log.info(f"Homology: {table.total_dim} classes over {len(c.quantum_degrees())} slices "
             f"({time.perf_counter() - t0:.2f}s)")
    return table


def reduced_homology(d: LinkDiagram) -> BigradedTable:
    return homology_table(build_complex(d, reduced=True))


def unreduced_homology(d: LinkDiagram) -> BigradedTable:
    return homology_table(build_complex(d, reduced=False))


@dataclass(frozen=True)
class HomologyClass:
    complex: GradedComplex = field(compare=False, repr=False)
    degree: Bidegree
    vector: Gf2Vector

    def labels(self):
        return self.complex.labels_of(self.degree.i, self.degree.j, self.vector)


class HomologyBasis:
    """
    Cycle representatives per bidegree. The representatives are the kernel
    basis vectors of d^{i,j} that are independent modulo the image of
    d^{i-1,j}, in kernel order, so they are deterministic.
    """

    def __init__(self, c: GradedComplex, degrees=()):
        self.complex = c
        self._quotients: dict[Bidegree, QuotientBasis] = {}
        for deg in degrees:
            self.at(deg.i, deg.j)

    def at(self, i: int, j: int) -> QuotientBasis:
        deg = Bidegree(i, j)
        found = self._quotients.get(deg)
        if found is None:
            c = self.complex
            cycles = Gf2SparseMatrix.from_columns(c.dim(i, j), kernel_basis(c.differential(i, j)))
            found = QuotientBasis(cycles, c.differential(i - 1, j))
            self._quotients[deg] = found
        return found

    def degrees(self) -> list[Bidegree]:
        return sorted(self._quotients)

    def dim(self, i: int, j: int) -> int:
        return self.at(i, j).dim

    def representatives(self, i: int, j: int) -> list[Gf2Vector]:
        return list(self.at(i, j).representatives)

    def classes(self, i: int, j: int) -> list[HomologyClass]:
        return [HomologyClass(self.complex, Bidegree(i, j), v) for v in self.representatives(i, j)]

    def coordinates(self, i: int, j: int, v: Gf2Vector) -> Gf2Vector:
        """Coordinates of the class of cycle v; raises NotACycle otherwise."""
        return self.at(i, j).coordinates(v)

    def is_cycle(self, i: int, j: int, v: Gf2Vector) -> bool:
        return self.complex.differential(i, j).apply(v).weight == 0

    def is_boundary(self, i: int, j: int, v: Gf2Vector) -> bool:
        return self.at(i, j).is_boundary(v)


def homology_basis(c: GradedComplex, degrees=None) -> HomologyBasis:
    """Bases at the given degrees, or at every degree of the complex."""
    if degrees is None:
        degrees = c.degrees()
    return HomologyBasis(c, degrees)

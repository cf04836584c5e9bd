"""
Chain maps between graded complexes, stored as lazily built per-slice
GF(2) matrices, and the maps they induce on homology.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable

from app.complexes.complex import GradedComplex, Label
from app.complexes.grading import Bidegree
from app.config import settings
from app.exceptions import ChainMapError
from app.homology.engine import HomologyBasis
from app.linalg.gf2 import Gf2SparseMatrix, Gf2Vector, rank

log = logging.getLogger("khtorus.maps")

GeneratorImage = Callable[[Label], Iterable[Label]]
BlockBuilder = Callable[[int, int], Gf2SparseMatrix]


class ChainMap:
    """
    F: source -> target of bidegree (a, b). Give either `image`, which sends
    one source generator to the target generators it hits (repeats cancel),
    or `blocks`, which builds the matrix source^{i,j} -> target^{i+a,j+b}.
    """

    def __init__(self, source: GradedComplex, target: GradedComplex, bidegree: tuple[int, int],
                 image: GeneratorImage | None = None, blocks: BlockBuilder | None = None,
                 name: str = ""):
        if (image is None) == (blocks is None):
            raise ValueError("give exactly one of image or blocks")
        self.source = source
        self.target = target
        self.bidegree = Bidegree(*bidegree)
        self.name = name
        self._image = image
        self._blocks = blocks
        self._cache: dict[Bidegree, Gf2SparseMatrix] = {}
        if settings.KH_DEBUG_CHECKS and not verify_chain_map(self):
            raise ChainMapError(f"{self.name or 'map'} does not commute with the differentials")

    def __repr__(self) -> str:
        return f"ChainMap({self.name or '?'}, bidegree=({self.bidegree.i},{self.bidegree.j}))"

    def target_degree(self, i: int, j: int) -> Bidegree:
        return Bidegree(i + self.bidegree.i, j + self.bidegree.j)

    def matrix(self, i: int, j: int) -> Gf2SparseMatrix:
        deg = Bidegree(i, j)
        found = self._cache.get(deg)
        if found is None:
            found = self._blocks(i, j) if self._blocks else self._from_images(i, j)
            out = self.target_degree(i, j)
            if found.shape != (self.target.dim(out.i, out.j), self.source.dim(i, j)):
                raise ChainMapError(f"{self.name}: block at ({i},{j}) has shape {found.shape}")
            self._cache[deg] = found
        return found

    def _from_images(self, i: int, j: int) -> Gf2SparseMatrix:
        out = self.target_degree(i, j)
        index = self.target.index(out.i, out.j)
        columns = []
        for label in self.source.basis(i, j):
            col = 0
            for hit in self._image(label):
                try:
                    col ^= 1 << index[hit]
                except KeyError:
                    raise ChainMapError(
                        f"{self.name}: image {hit} of {label} is not a generator in degree {out}"
                    ) from None
            columns.append(col)
        return Gf2SparseMatrix(len(index), len(columns), tuple(columns))

    def apply(self, i: int, j: int, v: Gf2Vector) -> Gf2Vector:
        return self.matrix(i, j).apply(v)

    def push(self, labels: Iterable[Label]) -> list[Label]:
        """Image of a sum of source generators, without building any matrix."""
        if self._image is None:
            raise ChainMapError(f"{self.name}: push needs a generator-level map")
        out: set = set()
        for label in labels:
            for hit in self._image(label):
                out ^= {hit}
        return sorted(out)

    def degrees(self) -> list[Bidegree]:
        return self.source.degrees()


def identity_map(c: GradedComplex) -> ChainMap:
    return ChainMap(c, c, (0, 0), blocks=lambda i, j: Gf2SparseMatrix.identity(c.dim(i, j)), name="id")


def compose(g: ChainMap, f: ChainMap, name: str = "") -> ChainMap:
    """g ∘ f."""
    def blocks(i: int, j: int) -> Gf2SparseMatrix:
        mid = f.target_degree(i, j)
        return g.matrix(mid.i, mid.j) @ f.matrix(i, j)

    return ChainMap(f.source, g.target, (f.bidegree.i + g.bidegree.i, f.bidegree.j + g.bidegree.j),
                    blocks=blocks, name=name or f"{g.name}∘{f.name}")


def add_maps(f: ChainMap, g: ChainMap, name: str = "") -> ChainMap:
    if f.bidegree != g.bidegree:
        raise ChainMapError(f"cannot add maps of bidegree {f.bidegree} and {g.bidegree}")
    return ChainMap(f.source, f.target, (f.bidegree.i, f.bidegree.j),
                    blocks=lambda i, j: f.matrix(i, j) + g.matrix(i, j), name=name or f"{f.name}+{g.name}")


def verify_chain_map(f: ChainMap, degrees: Iterable[Bidegree] | None = None) -> bool:
    """d_target ∘ F == F ∘ d_source on every source slice (or the given ones)."""
    for deg in degrees if degrees is not None else f.degrees():
        i, j = deg.i, deg.j
        out = f.target_degree(i, j)
        left = f.target.differential(out.i, out.j) @ f.matrix(i, j)
        right = f.matrix(i + 1, j) @ f.source.differential(i, j)
        if left != right:
            log.warning(f"{f.name}: commutation fails at ({i},{j})")
            return False
    return True


def maps_equal(f: ChainMap, g: ChainMap) -> bool:
    if f.bidegree != g.bidegree:
        return False
    return all(f.matrix(d.i, d.j) == g.matrix(d.i, d.j) for d in f.degrees())


def is_identity(f: ChainMap) -> bool:
    return f.bidegree == Bidegree(0, 0) and all(
        f.matrix(d.i, d.j) == Gf2SparseMatrix.identity(f.source.dim(d.i, d.j)) for d in f.degrees()
    )


@dataclass
class GradedMatrix:
    """A map on homology: one matrix per source bidegree."""
    bidegree: Bidegree
    blocks: dict[Bidegree, Gf2SparseMatrix] = field(default_factory=dict)

    def block(self, i: int, j: int) -> Gf2SparseMatrix:
        return self.blocks[Bidegree(i, j)]

    def rank(self) -> int:
        return sum(rank(m) for m in self.blocks.values())

    def ranks(self) -> dict[Bidegree, int]:
        return {deg: rank(m) for deg, m in self.blocks.items()}

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.blocks.values())

    def is_surjective(self) -> bool:
        return all(rank(m) == m.rows for m in self.blocks.values())

    def is_injective(self) -> bool:
        return all(rank(m) == m.cols for m in self.blocks.values())


def induced_on_homology(f: ChainMap, hb_src: HomologyBasis, hb_tgt: HomologyBasis,
                        degrees: Iterable[Bidegree] | None = None) -> GradedMatrix:
    """
    Matrix of v -> [F(v)] in the target homology basis, per source degree.
    Raises NotACycle when F(v) is not a cycle.
    """
    out = GradedMatrix(f.bidegree)
    for deg in degrees if degrees is not None else f.degrees():
        reps = hb_src.representatives(deg.i, deg.j)
        tgt = f.target_degree(deg.i, deg.j)
        basis = hb_tgt.at(tgt.i, tgt.j)
        columns = [basis.coordinates(f.apply(deg.i, deg.j, v)) for v in reps]
        out.blocks[deg] = Gf2SparseMatrix.from_columns(basis.dim, columns)
    return out

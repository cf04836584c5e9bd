"""
Tensor product of two graded complexes with differential d⊗1 + 1⊗d.
Generators are pairs (left label, right label); slices are built on demand.
"""
from __future__ import annotations

from functools import cached_property

from app.complexes.complex import GradedComplex, Label
from app.complexes.grading import Bidegree, Shift
from app.exceptions import DiagramError
from app.linalg.gf2 import Gf2SparseMatrix, Gf2Vector, iter_bits

PairLabel = tuple[Label, Label]


class TensorComplex:

    def __init__(self, left: GradedComplex, right: GradedComplex):
        self.left = left
        self.right = right
        self.reduced = left.reduced and right.reduced
        self.shift = Shift()
        self._bases: dict[Bidegree, list[PairLabel]] = {}
        self._indices: dict[Bidegree, dict[PairLabel, int]] = {}
        self._matrices: dict[Bidegree, Gf2SparseMatrix] = {}

    @property
    def fingerprint(self) -> str:
        return f"{self.left.fingerprint}x{self.right.fingerprint}"

    @cached_property
    def _blocks(self) -> dict[Bidegree, list[tuple[Bidegree, Bidegree]]]:
        out: dict[Bidegree, list[tuple[Bidegree, Bidegree]]] = {}
        for d1 in self.left.degrees():
            for d2 in self.right.degrees():
                out.setdefault(d1 + d2, []).append((d1, d2))
        return out

    def degrees(self) -> list[Bidegree]:
        return sorted(self._blocks)

    def quantum_degrees(self) -> list[int]:
        return sorted({deg.j for deg in self._blocks})

    @property
    def total_dim(self) -> int:
        return self.left.total_dim * self.right.total_dim

    def dim(self, i: int, j: int) -> int:
        return sum(
            self.left.dim(d1.i, d1.j) * self.right.dim(d2.i, d2.j)
            for d1, d2 in self._blocks.get(Bidegree(i, j), ())
        )

    def basis(self, i: int, j: int) -> list[PairLabel]:
        deg = Bidegree(i, j)
        found = self._bases.get(deg)
        if found is None:
            found = [
                (u, v)
                for d1, d2 in self._blocks.get(deg, ())
                for u in self.left.basis(d1.i, d1.j)
                for v in self.right.basis(d2.i, d2.j)
            ]
            self._bases[deg] = found
        return found

    def index(self, i: int, j: int) -> dict[PairLabel, int]:
        deg = Bidegree(i, j)
        found = self._indices.get(deg)
        if found is None:
            found = {label: k for k, label in enumerate(self.basis(i, j))}
            self._indices[deg] = found
        return found

    def differential(self, i: int, j: int) -> Gf2SparseMatrix:
        deg = Bidegree(i, j)
        found = self._matrices.get(deg)
        if found is not None:
            return found
        target = self.index(i + 1, j)
        columns = []
        for d1, d2 in self._blocks.get(deg, ()):
            dl = self.left.differential(d1.i, d1.j)
            dr = self.right.differential(d2.i, d2.j)
            left_up = self.left.basis(d1.i + 1, d1.j)
            right_up = self.right.basis(d2.i + 1, d2.j)
            left_basis = self.left.basis(d1.i, d1.j)
            right_basis = self.right.basis(d2.i, d2.j)
            for a, u in enumerate(left_basis):
                for b, v in enumerate(right_basis):
                    col = 0
                    for r in iter_bits(dl.columns[a]):
                        col ^= 1 << target[(left_up[r], v)]
                    for r in iter_bits(dr.columns[b]):
                        col ^= 1 << target[(u, right_up[r])]
                    columns.append(col)
        found = Gf2SparseMatrix(len(target), len(columns), tuple(columns))
        self._matrices[deg] = found
        return found

    def vector(self, i: int, j: int, labels) -> Gf2Vector:
        idx = self.index(i, j)
        bits = 0
        for label in labels:
            if label not in idx:
                raise DiagramError(f"{label} is not a generator in degree ({i},{j})")
            bits ^= 1 << idx[label]
        return Gf2Vector(len(idx), bits)

    def labels_of(self, i: int, j: int, v: Gf2Vector) -> list[PairLabel]:
        basis = self.basis(i, j)
        return [basis[k] for k in v.support()]

    def __repr__(self) -> str:
        return f"TensorComplex({self.left!r} ⊗ {self.right!r})"


def tensor_complex(left: GradedComplex, right: GradedComplex) -> TensorComplex:
    return TensorComplex(left, right)


def tensor_vector(product: TensorComplex, left_degree: Bidegree, left: Gf2Vector,
                  right_degree: Bidegree, right: Gf2Vector) -> Gf2Vector:
    """u ⊗ v as a vector in the product slice of degree left_degree + right_degree."""
    deg = left_degree + right_degree
    lu = product.left.labels_of(left_degree.i, left_degree.j, left)
    rv = product.right.labels_of(right_degree.i, right_degree.j, right)
    return product.vector(deg.i, deg.j, [(u, v) for u in lu for v in rv])

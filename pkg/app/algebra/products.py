"""
Products of torus classes through fusion movies, and finite-stage checks
of the algebra laws.

Classes live in normalized stages (app.stable.system), where the fusion map
has bidegree (0,0), so |a·b| = |a| + |b|. A product is computed on chain
level: the tensor of the two representatives goes through the connected-sum
isomorphism and then through the saddle maps of the movie frames.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

from app.algebra.movie import fusion_movie
from app.complexes.complex import Label, build_complex
from app.complexes.grading import Bidegree
from app.complexes.tensor import TensorComplex
from app.exceptions import DiagramError, EmptyTableError
from app.linalg.gf2 import Gf2SparseMatrix, Gf2Vector, rank
from app.maps.base import ChainMap, GradedMatrix
from app.maps.connected_sum import ConnectedSumIso
from app.maps.handles import one_handle_map
from app.stable.system import inclusion_map, stage_basis, stage_complex, stage_table

log = logging.getLogger("khtorus.algebra")


@dataclass(frozen=True)
class TorusClass:
    """A homology class of stage q (normalized degrees) given by a cycle."""
    p: int
    q: int
    degree: Bidegree
    vector: Gf2Vector

    @property
    def delta(self) -> int:
        return self.degree.delta

    def labels(self) -> list[Label]:
        return stage_complex(self.p, self.q).labels_of(self.degree.i, self.degree.j, self.vector)

    def coordinates(self) -> Gf2Vector:
        return stage_basis(self.p, self.q).coordinates(self.degree.i, self.degree.j, self.vector)

    @property
    def is_zero(self) -> bool:
        return stage_basis(self.p, self.q).is_boundary(self.degree.i, self.degree.j, self.vector)

    def __str__(self) -> str:
        return f"T({self.p},{self.q})[i={self.degree.i}, δ={self.delta}]"


def torus_classes(p: int, q: int, i: int, delta: int) -> list[TorusClass]:
    """Basis classes of stage q at normalized (i, δ)."""
    deg = Bidegree.from_delta(i, delta)
    return [TorusClass(p, q, deg, v) for v in stage_basis(p, q).representatives(deg.i, deg.j)]


def torus_class(p: int, q: int, i: int, delta: int, k: int = 0) -> TorusClass:
    found = torus_classes(p, q, i, delta)
    if k >= len(found):
        raise EmptyTableError(f"T({p},{q}) has {len(found)} classes at (i={i}, δ={delta})")
    return found[k]


def unit_class(p: int) -> TorusClass:
    """[x•] in K̃h^{0,0}(T_{p,1}), the unknot."""
    return torus_class(p, 1, 0, 0)


def push_class(c: TorusClass, q: int) -> TorusClass:
    """Image of c under i_{q-1} ∘ ... ∘ i_{c.q}."""
    if q < c.q:
        raise DiagramError(f"cannot push a stage {c.q} class down to stage {q}")
    labels = c.labels()
    for stage in range(c.q, q):
        labels = inclusion_map(c.p, stage).push(labels)
    vector = stage_complex(c.p, q).vector(c.degree.i, c.degree.j, labels)
    return TorusClass(c.p, q, c.degree, vector)


def same_class(a: TorusClass, b: TorusClass) -> bool:
    if (a.p, a.q, a.degree) != (b.p, b.q, b.degree):
        return False
    return stage_basis(a.p, a.q).is_boundary(a.degree.i, a.degree.j, a.vector + b.vector)


@lru_cache(maxsize=16)
def _fusion_maps(p: int, q: int, q2: int) -> tuple[ConnectedSumIso, tuple[ChainMap, ...]]:
    movie = fusion_movie(p, q, q2)
    bottom, top = movie.spliced.left, movie.spliced.right
    iso = ConnectedSumIso(movie.spliced, TensorComplex(build_complex(bottom), build_complex(top)),
                          build_complex(movie.source))
    return iso, tuple(one_handle_map(frame) for frame in movie.frames)


def fusion_product(a: TorusClass, b: TorusClass) -> TorusClass:
    """a·b in stage a.q + b.q."""
    if a.p != b.p:
        raise DiagramError(f"cannot multiply classes of T({a.p},·) and T({b.p},·)")
    iso, handles = _fusion_maps(a.p, a.q, b.q)
    labels = iso.forward.push([(u, v) for u in a.labels() for v in b.labels()])
    for h in handles:
        labels = h.push(labels)
    degree = a.degree + b.degree
    vector = stage_complex(a.p, a.q + b.q).vector(degree.i, degree.j, labels)
    return TorusClass(a.p, a.q + b.q, degree, vector)


def verify_commutativity(a: TorusClass, b: TorusClass) -> bool:
    return same_class(fusion_product(a, b), fusion_product(b, a))


def verify_associativity(a: TorusClass, b: TorusClass, c: TorusClass) -> bool:
    left = fusion_product(fusion_product(a, b), c)
    right = fusion_product(a, fusion_product(b, c))
    return same_class(left, right)


def verify_unit(b: TorusClass) -> bool:
    """1·b and b·1 both equal the image of b one stage up."""
    unit = unit_class(b.p)
    up = push_class(b, b.q + 1)
    return same_class(fusion_product(unit, b), up) and same_class(fusion_product(b, unit), up)


def verify_inclusion_compatibility(a: TorusClass, b: TorusClass) -> bool:
    """i(a·b) = i(a)·b: products commute with the directed system."""
    return same_class(push_class(fusion_product(a, b), a.q + b.q + 1),
                      fusion_product(push_class(a, a.q + 1), b))


@dataclass(frozen=True)
class RankCertificate:
    """Per-degree (rank, dimension) of a map onto its target."""
    ranks: dict[Bidegree, tuple[int, int]]

    @property
    def holds(self) -> bool:
        return all(r == n for r, n in self.ranks.values())

    def failures(self) -> list[Bidegree]:
        return [deg for deg, (r, n) in self.ranks.items() if r != n]

    def to_rows(self) -> list[dict]:
        return [{"i": deg.i, "delta": deg.delta, "rank": r, "dim": n}
                for deg, (r, n) in sorted(self.ranks.items())]


def rank_certificate(m: GradedMatrix) -> RankCertificate:
    """Surjectivity certificate of a map on homology, keyed by source degree."""
    return RankCertificate({deg: (rank(block), block.rows) for deg, block in m.blocks.items()})


def verify_surjectivity(p: int, q: int, q2: int) -> RankCertificate:
    """
    Rank of K̃h(T_{p,q}) ⊗ K̃h(T_{p,q'}) -> K̃h(T_{p,q+q'}) in every target
    degree, from the products of all pairs of basis classes.
    """
    target = stage_table(p, q + q2)
    columns: dict[Bidegree, list[Gf2Vector]] = {}
    for da in stage_table(p, q).support():
        for a in torus_classes(p, q, da.i, da.delta):
            for db in stage_table(p, q2).support():
                deg = da + db
                if not target.dim(deg.i, deg.j):
                    continue
                for b in torus_classes(p, q2, db.i, db.delta):
                    columns.setdefault(deg, []).append(fusion_product(a, b).coordinates())
    ranks = {}
    for deg, n in target.entries.items():
        block = Gf2SparseMatrix.from_columns(n, columns.get(deg, []))
        ranks[deg] = (rank(block), n)
    cert = RankCertificate(ranks)
    log.info(f"Fusion ({p}; {q}, {q2}) surjective: {cert.holds}")
    return cert

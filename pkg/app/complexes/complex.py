"""
Bigraded Khovanov chain complexes over GF(2).

A generator is a label (state, mask). Bit k of `state` set means crossing k
takes its 1-smoothing; bit t of `mask` set means circle t of that state
carries x, the others carry 1. In the reduced complex every mask contains
the pointed circle (the image of multiplication by x at the basepoint) and
the whole complex sits shifted by [0,1], so the unknot generator lives at
(0,0).

Slices are keyed by bidegree and built lazily: the cube of resolutions is
enumerated once per diagram, boundary matrices only when asked for.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from functools import cached_property, lru_cache

from app.complexes.grading import Bidegree, Shift
from app.config import settings
from app.diagrams.diagram import LinkDiagram
from app.diagrams.smoothing import circle_labels
from app.exceptions import ChainMapError, DiagramError, ResourceLimitError
from app.linalg.gf2 import Gf2SparseMatrix, Gf2Vector, iter_bits

log = logging.getLogger("khtorus.complex")

Label = tuple[int, int]

MERGE = "merge"
SPLIT = "split"


def translate(mask: int, circle_map: tuple[int, ...]) -> int:
    out = 0
    for t in iter_bits(mask):
        out |= 1 << circle_map[t]
    return out


def submasks(mask: int):
    """All submasks of mask, ascending."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


@dataclass(frozen=True)
class Edge:
    """
    Cube edge between two states. For a merge, `joined` holds the two source
    circles; for a split, `joined` is (circle, circle) and `parts` the two
    target circles it becomes. circle_map sends the remaining source circles
    to their target circles.
    """
    kind: str
    joined: tuple[int, int]
    parts: tuple[int, int]
    circle_map: tuple[int, ...]

    def image(self, mask: int) -> list[int]:
        if self.kind == MERGE:
            a, b = self.joined
            if mask >> a & 1 and mask >> b & 1:
                return []
            return [translate(mask, self.circle_map)]
        g = self.joined[0]
        rest = translate(mask & ~(1 << g), self.circle_map)
        u, v = self.parts
        if mask >> g & 1:
            return [rest | 1 << u | 1 << v]
        return [rest | 1 << u, rest | 1 << v]


def circle_map_between(src: bytes, src_count: int, tgt: bytes) -> tuple[int, ...]:
    """Source circle -> target circle, read off through each circle's smallest arc."""
    out = [-1] * src_count
    for arc, circle in enumerate(src):
        if out[circle] < 0:
            out[circle] = tgt[arc]
    return tuple(out)


class Cube:
    """Circle labellings of every state of a diagram."""

    def __init__(self, d: LinkDiagram):
        n = d.n_crossings
        if n > settings.KH_MAX_CROSSINGS:
            raise ResourceLimitError(
                f"{n} crossings exceeds KH_MAX_CROSSINGS={settings.KH_MAX_CROSSINGS}"
            )
        t0 = time.perf_counter()
        self.diagram = d
        self.n_crossings = n
        self.labels: list[bytes] = []
        self.counts: list[int] = []
        for state in range(1 << n):
            labels, count = circle_labels(d, state)
            self.labels.append(labels)
            self.counts.append(count)
        log.info(f"Cube enumerated: {1 << n} states ({time.perf_counter() - t0:.2f}s)")

    def pointed(self, state: int) -> int:
        return self.labels[state][self.diagram.basepoint]

    def edge(self, state: int, k: int) -> Edge:
        """The edge state -> state + {k}; crossing k must be 0-smoothed in state."""
        target = state | 1 << k
        src, tgt = self.labels[state], self.labels[target]
        a0, a1, a2, _ = self.diagram.crossings[k].arcs
        circle_map = circle_map_between(src, self.counts[state], tgt)
        if src[a0] != src[a2]:
            return Edge(MERGE, (src[a0], src[a2]), (tgt[a0], tgt[a0]), circle_map)
        return Edge(SPLIT, (src[a0], src[a0]), (tgt[a0], tgt[a1]), circle_map)


class _Core:
    """Unshifted generators and boundary matrices, shared by every shift of a complex."""

    def __init__(self, d: LinkDiagram, reduced: bool):
        self.diagram = d
        self.reduced = reduced
        self.cube = Cube(d)
        self.bases: dict[Bidegree, list[Label]] = {}
        self._indices: dict[Bidegree, dict[Label, int]] = {}
        self._matrices: dict[Bidegree, Gf2SparseMatrix] = {}
        n_plus, n_minus = d.n_plus, d.n_minus
        offset = n_plus - 2 * n_minus + (1 if reduced else 0)
        for state in range(1 << d.n_crossings):
            size = state.bit_count()
            c = self.cube.counts[state]
            full = (1 << c) - 1
            i = size - n_minus
            if reduced:
                pointed = 1 << self.cube.pointed(state)
                masks = (m | pointed for m in submasks(full & ~pointed))
            else:
                masks = submasks(full)
            for mask in masks:
                j = c - 2 * mask.bit_count() + size + offset
                self.bases.setdefault(Bidegree(i, j), []).append((state, mask))
        log.info(
            f"{'Reduced' if reduced else 'Unreduced'} complex: "
            f"{sum(len(b) for b in self.bases.values())} generators in {len(self.bases)} slices"
        )

    def index(self, deg: Bidegree) -> dict[Label, int]:
        found = self._indices.get(deg)
        if found is None:
            found = {label: k for k, label in enumerate(self.bases.get(deg, ()))}
            self._indices[deg] = found
        return found

    def degree(self, label: Label) -> Bidegree:
        state, mask = label
        size = state.bit_count()
        d = self.diagram
        j = (self.cube.counts[state] - 2 * mask.bit_count() + size
             + d.n_plus - 2 * d.n_minus + (1 if self.reduced else 0))
        return Bidegree(size - d.n_minus, j)

    def differential(self, deg: Bidegree) -> Gf2SparseMatrix:
        found = self._matrices.get(deg)
        if found is not None:
            return found
        source = self.bases.get(deg, [])
        up = Bidegree(deg.i + 1, deg.j)
        target = self.index(up)
        full = (1 << self.diagram.n_crossings) - 1
        edges: dict[tuple[int, int], Edge] = {}
        columns = []
        for state, mask in source:
            col = 0
            for k in iter_bits(full & ~state):
                edge = edges.get((state, k))
                if edge is None:
                    edge = edges[(state, k)] = self.cube.edge(state, k)
                nxt = state | 1 << k
                for image in edge.image(mask):
                    col ^= 1 << target[(nxt, image)]
            columns.append(col)
        matrix = Gf2SparseMatrix(len(target), len(source), tuple(columns))
        self._matrices[deg] = matrix
        if settings.KH_DEBUG_CHECKS:
            self._check_square(deg, matrix)
        return matrix

    def _check_square(self, deg: Bidegree, matrix: Gf2SparseMatrix):
        following = self.differential(Bidegree(deg.i + 1, deg.j))
        if not (following @ matrix).is_zero():
            raise ChainMapError(f"d∘d != 0 on slice {deg}")


@lru_cache(maxsize=16)
def _core(d: LinkDiagram, reduced: bool) -> _Core:
    return _Core(d, reduced)


class GradedComplex:
    """
    C(D) or C̃(D) with a shift applied. All degrees taken and returned by the
    public methods already include the shift.
    """

    def __init__(self, core: _Core, shift: Shift = Shift()):
        self._core = core
        self.shift = shift

    @property
    def diagram(self) -> LinkDiagram:
        return self._core.diagram

    @property
    def reduced(self) -> bool:
        return self._core.reduced

    @property
    def cube(self) -> Cube:
        return self._core.cube

    @property
    def fingerprint(self) -> str:
        return self.diagram.fingerprint

    @property
    def n_plus(self) -> int:
        return self.diagram.n_plus

    @property
    def n_minus(self) -> int:
        return self.diagram.n_minus

    def _raw(self, i: int, j: int) -> Bidegree:
        return Bidegree(i - self.shift.a, j - self.shift.b)

    @cached_property
    def _degrees(self) -> list[Bidegree]:
        return sorted(self.shift.apply(deg) for deg in self._core.bases)

    def degrees(self) -> list[Bidegree]:
        """Bidegrees with at least one generator, sorted by (i, j)."""
        return list(self._degrees)

    def quantum_degrees(self) -> list[int]:
        return sorted({deg.j for deg in self._degrees})

    @property
    def homological_range(self) -> tuple[int, int]:
        return -self.n_minus + self.shift.a, self.n_plus + self.shift.a

    @property
    def total_dim(self) -> int:
        return sum(len(b) for b in self._core.bases.values())

    def dim(self, i: int, j: int) -> int:
        return len(self._core.bases.get(self._raw(i, j), ()))

    def basis(self, i: int, j: int) -> list[Label]:
        return self._core.bases.get(self._raw(i, j), [])

    def index(self, i: int, j: int) -> dict[Label, int]:
        return self._core.index(self._raw(i, j))

    def degree_of(self, label: Label) -> Bidegree:
        """Bidegree of a generator from the grading formula."""
        return self.shift.apply(self._core.degree(label))

    def differential(self, i: int, j: int) -> Gf2SparseMatrix:
        """d^{i,j}: C^{i,j} -> C^{i+1,j}; rows index the target basis."""
        return self._core.differential(self._raw(i, j))

    def vector(self, i: int, j: int, labels) -> Gf2Vector:
        """Sum of the given generators as a vector in C^{i,j}."""
        idx = self.index(i, j)
        bits = 0
        for label in labels:
            if label not in idx:
                raise DiagramError(f"{label} is not a generator in degree ({i},{j})")
            bits ^= 1 << idx[label]
        return Gf2Vector(len(idx), bits)

    def labels_of(self, i: int, j: int, v: Gf2Vector) -> list[Label]:
        basis = self.basis(i, j)
        return [basis[k] for k in v.support()]

    def check_d_squared(self) -> bool:
        for deg in self._degrees:
            d1 = self.differential(deg.i, deg.j)
            d2 = self.differential(deg.i + 1, deg.j)
            if not (d2 @ d1).is_zero():
                return False
        return True

    def __repr__(self) -> str:
        kind = "reduced" if self.reduced else "unreduced"
        return f"GradedComplex({kind}, generators={self.total_dim}, shift={self.shift})"


def build_complex(d: LinkDiagram, reduced: bool = True) -> GradedComplex:
    if reduced and d.basepoint is None:
        raise DiagramError("the reduced complex needs a basepoint")
    return GradedComplex(_core(d, reduced))


def apply_shift(c: GradedComplex, s: Shift) -> GradedComplex:
    return GradedComplex(c._core, c.shift + s)

"""
Exact triples (D1, D, D0) at a crossing c and the maps of

    0 -> C̃(D1)[w+, 3w+ - 1] --i--> C̃(D) --q--> C̃(D0)[w-, 3w- + 1] -> 0

The cube of D splits along c: states with c 1-smoothed are the states of
D1, the others those of D0, and the connecting map of the long exact
sequence is the c-edge part of the differential of D applied to lifted
cycles.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

from app.complexes.complex import GradedComplex, Label, apply_shift, build_complex, translate
from app.complexes.grading import Bidegree, Shift
from app.diagrams.diagram import NEGATIVE, LinkDiagram, Surgery, smoothing_surgery
from app.exceptions import ChainMapError, DiagramError, NotACycle
from app.homology.engine import HomologyBasis, homology_table
from app.homology.tables import BigradedTable
from app.linalg.gf2 import Gf2SparseMatrix
from app.maps.base import ChainMap, GradedMatrix, compose, maps_equal
from app.maps.handles import HandleLocus, OneHandleMove, handle_chain_map

log = logging.getLogger("khtorus.triple")


def insert_bit(state: int, k: int, bit: int) -> int:
    low = state & ((1 << k) - 1)
    return low | (state >> k) << (k + 1) | bit << k


def remove_bit(state: int, k: int) -> int:
    low = state & ((1 << k) - 1)
    return low | (state >> (k + 1)) << k


@dataclass(frozen=True)
class ExactTriple:
    diagram: LinkDiagram
    crossing: int
    sign: int
    one: Surgery
    zero: Surgery
    w_minus: int
    w_plus: int

    @property
    def d1(self) -> LinkDiagram:
        return self.one.diagram

    @property
    def d0(self) -> LinkDiagram:
        return self.zero.diagram

    @property
    def index(self) -> int:
        return self.diagram.crossing_index(self.crossing)

    @property
    def one_shift(self) -> Shift:
        return Shift(self.w_plus, 3 * self.w_plus - 1)

    @property
    def zero_shift(self) -> Shift:
        return Shift(self.w_minus, 3 * self.w_minus + 1)

    @cached_property
    def complex(self) -> GradedComplex:
        return build_complex(self.diagram)

    @cached_property
    def one_complex(self) -> GradedComplex:
        """C̃(D1) shifted into the degrees it occupies inside C̃(D)."""
        return apply_shift(build_complex(self.d1), self.one_shift)

    @cached_property
    def zero_complex(self) -> GradedComplex:
        return apply_shift(build_complex(self.d0), self.zero_shift)

    @cached_property
    def _circle_maps(self) -> dict[int, tuple[int, ...]]:
        return {}

    def circle_map(self, bit: int, state: int) -> tuple[int, ...]:
        """Circles of D in `state` (c-bit equal to `bit`) -> circles of D_bit."""
        found = self._circle_maps.get(state)
        if found is not None:
            return found
        surgery = self.one if bit else self.zero
        small = (self.one_complex if bit else self.zero_complex).cube
        big = self.complex.cube.labels[state]
        out = [-1] * self.complex.cube.counts[state]
        target = small.labels[remove_bit(state, self.index)]
        for arc, circle in enumerate(big):
            if out[circle] < 0:
                out[circle] = target[surgery.arc_map[arc]]
        found = self._circle_maps[state] = tuple(out)
        return found

    def lift(self, bit: int, label: Label) -> Label:
        """Generator of D_bit -> the generator of D it corresponds to."""
        state, mask = label
        big = insert_bit(state, self.index, bit)
        forward = self.circle_map(bit, big)
        back = [0] * len(forward)
        for t, u in enumerate(forward):
            back[u] = t
        return big, translate(mask, tuple(back))

    def restrict(self, label: Label) -> Label:
        """Generator of D -> generator of D_bit, bit being its c-bit."""
        state, mask = label
        bit = state >> self.index & 1
        return remove_bit(state, self.index), translate(mask, self.circle_map(bit, state))

    def tables(self) -> tuple[BigradedTable, BigradedTable, BigradedTable]:
        """Shifted K̃h(D0), shifted K̃h(D1) and K̃h(D)."""
        return homology_table(self.zero_complex), homology_table(self.one_complex), homology_table(self.complex)


def exact_triple(d: LinkDiagram, c: int) -> ExactTriple:
    crossing = d.crossing(c)
    zero = smoothing_surgery(d, [c], 0)
    one = smoothing_surgery(d, [c], 1)
    if crossing.sign == NEGATIVE:
        w_plus, w_minus = 0, zero.diagram.n_minus - d.n_minus
    else:
        w_minus, w_plus = 0, 1 + one.diagram.n_minus - d.n_minus
    log.info(f"Exact triple at crossing {c}: w- = {w_minus}, w+ = {w_plus}")
    return ExactTriple(d, c, crossing.sign, one, zero, w_minus, w_plus)


def inclusion_chain_map(t: ExactTriple) -> ChainMap:
    return ChainMap(t.one_complex, t.complex, (0, 0), image=lambda label: [t.lift(1, label)], name="i")


def quotient_chain_map(t: ExactTriple) -> ChainMap:
    def image(label: Label) -> list[Label]:
        if label[0] >> t.index & 1:
            return []
        return [t.restrict(label)]

    return ChainMap(t.complex, t.zero_complex, (0, 0), image=image, name="q")


def connecting_map(t: ExactTriple, degrees=None) -> GradedMatrix:
    """
    ∂: K̃h(D0)[w-, 3w- + 1] -> K̃h(D1)[w+, 3w+ - 1], bidegree (1,0) in (i,j),
    i.e. (1,-2) in (i,δ). Blocks are keyed by the (shifted) D0 degree.
    """
    source, target = t.zero_complex, t.one_complex
    cube = t.complex.cube
    k = t.index
    hb0, hb1 = HomologyBasis(source), HomologyBasis(target)
    if degrees is None:
        degrees = homology_table(source).support()
    out = GradedMatrix(Bidegree(1, 0))
    for deg in degrees:
        basis = hb1.at(deg.i + 1, deg.j)
        columns = []
        for v in hb0.representatives(deg.i, deg.j):
            hits: set[Label] = set()
            for label in source.labels_of(deg.i, deg.j, v):
                state, mask = t.lift(0, label)
                edge = cube.edge(state, k)
                up = state | 1 << k
                for m in edge.image(mask):
                    hits ^= {t.restrict((up, m))}
            image = target.vector(deg.i + 1, deg.j, hits)
            try:
                columns.append(basis.coordinates(image))
            except NotACycle:
                raise ChainMapError(f"connecting map: image at {deg} is not a cycle") from None
        out.blocks[deg] = Gf2SparseMatrix.from_columns(basis.dim, columns)
    return out


def _smoothed_locus(h: OneHandleMove, before: Surgery, after: Surgery) -> HandleLocus:
    """The saddle h seen on D_b: arcs go back to D, across h, then down to D'_b."""
    back: dict[int, int] = {}
    for a, u in enumerate(before.arc_map):
        back.setdefault(u, a)
    arc_map = tuple(after.arc_map[h.arc_map[back[u]]] for u in range(before.diagram.n_arcs))
    x, y = h.locus
    u, v = h.target_locus
    return HandleLocus(arc_map, (before.arc_map[x], before.arc_map[y]), (after.arc_map[u], after.arc_map[v]))


@dataclass
class TripleSquare:
    """
    A saddle away from the crossing maps the short exact sequence of
    (D1, D, D0) to that of (D1', D', D0'): Φ ∘ i = i' ∘ Φ1 and Φ0 ∘ q = q' ∘ Φ.
    """
    before: ExactTriple
    after: ExactTriple
    handle: ChainMap
    one: ChainMap
    zero: ChainMap

    def inclusion_commutes(self) -> bool:
        left = compose(self.handle, inclusion_chain_map(self.before))
        right = compose(inclusion_chain_map(self.after), self.one)
        return maps_equal(left, right)

    def quotient_commutes(self) -> bool:
        left = compose(quotient_chain_map(self.after), self.handle)
        right = compose(self.zero, quotient_chain_map(self.before))
        return maps_equal(left, right)


def triple_square(t: ExactTriple, h: OneHandleMove) -> TripleSquare:
    if h.source != t.diagram:
        raise DiagramError("the saddle must start on the diagram of the triple")
    near = set(t.diagram.crossing(t.crossing).arcs)
    far = set(h.target.crossing(t.crossing).arcs)
    if near & set(h.locus) or far & set(h.target_locus):
        raise DiagramError(f"the saddle touches crossing {t.crossing}")
    after = exact_triple(h.target, t.crossing)
    return TripleSquare(
        t, after,
        handle_chain_map(h, t.complex, after.complex, name="Φ"),
        handle_chain_map(_smoothed_locus(h, t.one, after.one), t.one_complex, after.one_complex, name="Φ1"),
        handle_chain_map(_smoothed_locus(h, t.zero, after.zero), t.zero_complex, after.zero_complex, name="Φ0"),
    )

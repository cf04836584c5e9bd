"""
The connected-sum isomorphism S: C̃(D1) ⊗ C̃(D2) -> C̃(D1 ♯ D2),
S(v x• ⊗ x• w) = v x• w, and its inverse h.

States of the sum are the states of D1 followed by those of D2 (crossings
of D2 come after those of D1). In each state the two pointed circles
become one and every other circle keeps its arcs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from app.complexes.complex import GradedComplex, build_complex
from app.complexes.tensor import PairLabel, TensorComplex
from app.diagrams.diagram import LinkDiagram, SplicedSum, connected_sum_surgery
from app.exceptions import ChainMapError, DiagramError
from app.maps.base import ChainMap, compose, maps_equal
from app.maps.handles import OneHandleMove, handle_chain_map, one_handle_map, one_handle_move


def _side_map(side: GradedComplex, state: int, arc_map: tuple[int, ...], whole: bytes) -> tuple[int, ...]:
    labels = side.cube.labels[state]
    out = [-1] * side.cube.counts[state]
    for arc, circle in enumerate(labels):
        if out[circle] < 0:
            out[circle] = whole[arc_map[arc]]
    return tuple(out)


@dataclass
class ConnectedSumIso:
    spliced: SplicedSum
    tensor: TensorComplex
    complex: GradedComplex
    forward: ChainMap = field(init=False)
    inverse: ChainMap = field(init=False)

    def __post_init__(self):
        left, right = self.tensor.left, self.tensor.right
        n1 = self.spliced.left.n_crossings
        low = (1 << n1) - 1
        cache: dict[tuple[int, int], tuple[tuple[int, ...], tuple[int, ...]]] = {}

        def maps(s1: int, s2: int):
            found = cache.get((s1, s2))
            if found is None:
                whole = self.complex.cube.labels[s1 | s2 << n1]
                found = (_side_map(left, s1, self.spliced.left_map, whole),
                         _side_map(right, s2, self.spliced.right_map, whole))
                cache[(s1, s2)] = found
            return found

        def forward(label: PairLabel):
            (s1, m1), (s2, m2) = label
            lmap, rmap = maps(s1, s2)
            mask = 0
            for t, u in enumerate(lmap):
                if m1 >> t & 1:
                    mask |= 1 << u
            for t, u in enumerate(rmap):
                if m2 >> t & 1:
                    mask |= 1 << u
            return [(s1 | s2 << n1, mask)]

        def inverse(label):
            state, mask = label
            s1, s2 = state & low, state >> n1
            lmap, rmap = maps(s1, s2)
            m1 = sum(1 << t for t, u in enumerate(lmap) if mask >> u & 1)
            m2 = sum(1 << t for t, u in enumerate(rmap) if mask >> u & 1)
            return [((s1, m1), (s2, m2))]

        self.forward = ChainMap(self.tensor, self.complex, (0, 0), image=forward, name="S")
        self.inverse = ChainMap(self.complex, self.tensor, (0, 0), image=inverse, name="h")


def connected_sum_iso(d1: LinkDiagram, d2: LinkDiagram) -> ConnectedSumIso:
    spliced = connected_sum_surgery(d1, d2)
    tensor = TensorComplex(build_complex(d1), build_complex(d2))
    return ConnectedSumIso(spliced, tensor, build_complex(spliced.diagram))


@dataclass
class SumSquare:
    """
    Φ̃ ∘ S = S' ∘ (1 ⊗ Φ) for a saddle Φ on the right summand and the same
    saddle Φ̃ performed inside the connected sum.
    """
    before: ConnectedSumIso
    after: ConnectedSumIso
    handle: ChainMap
    lifted: ChainMap

    def tensor_handle(self) -> ChainMap:
        """1 ⊗ Φ on C̃(D1) ⊗ C̃(D2)."""
        return ChainMap(
            self.before.tensor, self.after.tensor, (0, -1),
            image=lambda label: [(label[0], w) for w in self.handle.push([label[1]])],
            name=f"1⊗{self.handle.name}",
        )

    def commutes(self) -> bool:
        left = compose(self.lifted, self.before.forward)
        right = compose(self.after.forward, self.tensor_handle())
        return maps_equal(left, right)


def connected_sum_square(d1: LinkDiagram, h: OneHandleMove) -> SumSquare:
    """The naturality square of S for a saddle h on the right summand, away from its basepoint."""
    if h.source.basepoint in h.locus:
        raise DiagramError("the saddle must avoid the basepoint arc of the summand")
    before = connected_sum_iso(d1, h.source)
    after = connected_sum_iso(d1, h.target)
    x, y = (before.spliced.right_map[a] for a in h.locus)
    big = one_handle_move(before.spliced.diagram, x, y)
    if big.target != after.spliced.diagram:
        raise ChainMapError("saddling inside the sum does not give the sum with the saddled summand")
    return SumSquare(before, after, one_handle_map(h),
                     handle_chain_map(big, before.complex, after.complex))

"""
Reversing one component leaves states and circles alone but moves the
crossing signs, so the identity on generators becomes a chain isomorphism
C̃(D^r) -> C̃(D) of bidegree (2 l_r, 6 l_r), l_r the linking sum of the
reversed component.
"""
from __future__ import annotations

from dataclasses import dataclass

from app.complexes.complex import Label, build_complex, circle_map_between
from app.complexes.grading import Shift
from app.diagrams.diagram import LinkDiagram, reversal_surgery
from app.maps.base import ChainMap


@dataclass(frozen=True)
class OrientationChange:
    original: LinkDiagram
    reversed: LinkDiagram
    component: int
    linking_sum: int
    map: ChainMap

    @property
    def shift(self) -> Shift:
        """K̃h^{i,j}(D^r) = K̃h^{i+2l, j+6l}(D)."""
        return Shift(2 * self.linking_sum, 6 * self.linking_sum)

    @property
    def delta_shift(self) -> tuple[int, int]:
        return 2 * self.linking_sum, 2 * self.linking_sum


def orientation_change(d: LinkDiagram, r: int) -> OrientationChange:
    surgery = reversal_surgery(d, r)
    lk = d.linking_sum(r)
    source = build_complex(surgery.diagram)
    target = build_complex(d)

    def image(label: Label) -> list[Label]:
        state, mask = label
        src = source.cube.labels[state]
        relabelled = bytes(src[surgery.arc_map[a]] for a in range(d.n_arcs))
        circle_map = circle_map_between(relabelled, source.cube.counts[state], target.cube.labels[state])
        out = 0
        for t, u in enumerate(circle_map):
            if mask >> t & 1:
                out |= 1 << u
        return [(state, out)]

    fmap = ChainMap(source, target, (2 * lk, 6 * lk), image=image, name=f"reverse[{r}]")
    return OrientationChange(d, surgery.diagram, r, lk, fmap)

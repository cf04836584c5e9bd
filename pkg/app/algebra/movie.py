"""
Fusion movies: D_{p,q} ♯ D_{p,q'} -> D_{p,q+q'} by p-1 saddles.

D_{p,q'} is stacked on top of D_{p,q}. The connected sum already joins the
closure arcs at strand position 0; the frames join the remaining positions
1..p-1 in order, and the last frame lands exactly on D_{p,q+q'}.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from app.complexes.grading import Bidegree
from app.diagrams.braids import torus_diagram
from app.diagrams.diagram import LinkDiagram, SplicedSum, connected_sum_surgery, saddle
from app.exceptions import ChainMapError, DiagramError
from app.maps.handles import OneHandleMove

log = logging.getLogger("khtorus.algebra")


@dataclass(frozen=True)
class FusionMovie:
    p: int
    q: int
    q2: int
    spliced: SplicedSum
    frames: tuple[OneHandleMove, ...]

    @property
    def source(self) -> LinkDiagram:
        return self.spliced.diagram

    @property
    def diagram(self) -> LinkDiagram:
        return self.frames[-1].target if self.frames else self.spliced.diagram

    @property
    def bidegree(self) -> Bidegree:
        """Raw degree of the composite; zero once the stages are normalized."""
        return Bidegree(0, -len(self.frames))


def fusion_movie(p: int, q: int, q2: int) -> FusionMovie:
    if p < 2 or q < 1 or q2 < 1:
        raise DiagramError(f"fusion movie needs p >= 2 and q, q' >= 1, got ({p}, {q}, {q2})")
    bottom, top = torus_diagram(p, q), torus_diagram(p, q2)
    spliced = connected_sum_surgery(bottom, top)
    left = [spliced.left_map[a] for a in bottom.closure_arcs]
    right = [spliced.right_map[a] for a in top.closure_arcs]
    current = spliced.diagram
    frames = []
    for k in range(1, p):
        surgery = saddle(current, left[k], right[k])
        frames.append(OneHandleMove.from_surgery(surgery, left[k], right[k]))
        left = [surgery.arc_map[a] for a in left]
        right = [surgery.arc_map[a] for a in right]
        current = surgery.diagram
    if current != torus_diagram(p, q + q2):
        raise ChainMapError(f"fusion movie for ({p}, {q}, {q2}) does not end on D({p},{q + q2})")
    log.info(f"Fusion movie ({p}; {q}, {q2}): {len(frames)} frames")
    return FusionMovie(p, q, q2, spliced, tuple(frames))

"""
Oriented 1-handle moves (saddles) and the chain maps they induce.

A saddle touches no crossing, so the states of source and target match
bit for bit; in every state the handle either merges two circles or splits
one, and the map is the merge or split formula of the differential. The
remaining circles are matched through the arcs the saddle leaves alone.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from app.complexes.complex import MERGE, SPLIT, Edge, GradedComplex, Label, build_complex
from app.diagrams.diagram import LinkDiagram, Surgery, saddle
from app.exceptions import ChainMapError, DiagramError
from app.maps.base import ChainMap

log = logging.getLogger("khtorus.maps")


@dataclass(frozen=True)
class OneHandleMove:
    source: LinkDiagram
    target: LinkDiagram
    arc_map: tuple[int, ...]
    locus: tuple[int, int]
    target_locus: tuple[int, int]

    def __post_init__(self):
        if self.source.labels != self.target.labels:
            raise DiagramError("a 1-handle move must keep every crossing")
        signs = [c.sign for c in self.source.crossings]
        if signs != [c.sign for c in self.target.crossings]:
            raise DiagramError("a 1-handle move must keep crossing signs")

    @property
    def crossing_bijection(self) -> dict[int, int]:
        return {label: label for label in self.source.labels}

    @classmethod
    def from_surgery(cls, surgery: Surgery, x: int, y: int) -> OneHandleMove:
        return cls(surgery.source, surgery.diagram, surgery.arc_map, (x, y), tuple(surgery.locus))


@dataclass(frozen=True)
class HandleLocus:
    """Where a saddle acts: arc correspondence plus the saddled arcs before and after."""
    arc_map: tuple[int, ...]
    locus: tuple[int, int]
    target_locus: tuple[int, int]


def one_handle_move(d: LinkDiagram, x: int, y: int) -> OneHandleMove:
    """Saddle between arcs x and y of d."""
    return OneHandleMove.from_surgery(saddle(d, x, y), x, y)


def handle_edge(h: OneHandleMove | HandleLocus, source: GradedComplex, target: GradedComplex, state: int) -> Edge:
    src = source.cube.labels[state]
    tgt = target.cube.labels[state]
    src_count = source.cube.counts[state]
    x, y = h.locus
    circle_map = [-1] * src_count
    for arc, circle in enumerate(src):
        if circle_map[circle] < 0:
            circle_map[circle] = tgt[h.arc_map[arc]]
    tgt_count = target.cube.counts[state]
    if src[x] != src[y]:
        merged = tgt[h.arc_map[x]]
        if tgt[h.arc_map[y]] != merged or tgt_count != src_count - 1:
            raise ChainMapError(f"state {state}: handle circles do not merge as expected")
        return Edge(MERGE, (src[x], src[y]), (merged, merged), tuple(circle_map))
    u, v = (tgt[a] for a in h.target_locus)
    if u == v or tgt_count != src_count + 1:
        raise ChainMapError(f"state {state}: handle circle does not split as expected")
    return Edge(SPLIT, (src[x], src[x]), (u, v), tuple(circle_map))


def one_handle_map(h: OneHandleMove, reduced: bool = True,
                   source: GradedComplex | None = None, target: GradedComplex | None = None) -> ChainMap:
    """Bidegree (0,-1) map C(source) -> C(target) induced by the saddle."""
    source = source or build_complex(h.source, reduced)
    target = target or build_complex(h.target, reduced)
    return handle_chain_map(h, source, target)


def handle_chain_map(h: OneHandleMove | HandleLocus, source: GradedComplex, target: GradedComplex,
                     name: str = "") -> ChainMap:
    """
    The saddle map between two already built complexes whose states match bit
    for bit. Shifted complexes are fine as long as the shifts keep the map at
    bidegree (0,-1).
    """
    edges: dict[int, Edge] = {}

    def image(label: Label) -> list[Label]:
        state, mask = label
        edge = edges.get(state)
        if edge is None:
            edge = edges[state] = handle_edge(h, source, target, state)
        return [(state, m) for m in edge.image(mask)]

    return ChainMap(source, target, (0, -1), image=image, name=name or f"handle{h.locus}")

"""
Smoothings and their circles.

Circles of a state are numbered by their smallest arc id. The per-state
circle labelling is stored as bytes (arc -> circle index), which is what
the complex builder works from.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from app.diagrams.diagram import LinkDiagram
from app.diagrams.union_find import UnionFind
from app.exceptions import DiagramError

log = logging.getLogger("khtorus.smoothing")


@dataclass(frozen=True)
class SmoothingState:
    state: int
    n_crossings: int
    circles: tuple[tuple[int, ...], ...]
    pointed_circle: int | None

    @property
    def n_circles(self) -> int:
        return len(self.circles)

    def bits(self) -> str:
        """State as a bit string, crossing 0 first."""
        return "".join(str(self.state >> k & 1) for k in range(self.n_crossings))


def circle_labels(d: LinkDiagram, state: int) -> tuple[bytes, int]:
    """(arc -> circle index, number of circles) for the given state."""
    uf = UnionFind(d.n_arcs)
    for k, c in enumerate(d.crossings):
        a0, a1, a2, a3 = c.arcs
        if state >> k & 1:
            uf.union(a0, a3)
            uf.union(a1, a2)
        else:
            uf.union(a0, a1)
            uf.union(a2, a3)
    labels = uf.labels()
    return bytes(labels), (max(labels) + 1 if labels else 0)


def _parse_state(d: LinkDiagram, state) -> int:
    if isinstance(state, str):
        if len(state) != d.n_crossings or set(state) - {"0", "1"}:
            raise DiagramError(f"state {state!r} does not match {d.n_crossings} crossings")
        return sum(1 << k for k, ch in enumerate(state) if ch == "1")
    if isinstance(state, (list, tuple)):
        if len(state) != d.n_crossings:
            raise DiagramError(f"state of length {len(state)} for {d.n_crossings} crossings")
        return sum(1 << k for k, bit in enumerate(state) if bit)
    if not 0 <= state < 1 << d.n_crossings:
        raise DiagramError(f"state {state} out of range for {d.n_crossings} crossings")
    return state


def smooth_all(d: LinkDiagram, state) -> SmoothingState:
    """Accepts an int bitmask (bit k = crossing k), a bit string, or a bit sequence."""
    bits = _parse_state(d, state)
    labels, count = circle_labels(d, bits)
    groups: list[list[int]] = [[] for _ in range(count)]
    for arc, circle in enumerate(labels):
        groups[circle].append(arc)
    pointed = labels[d.basepoint] if d.basepoint is not None else None
    return SmoothingState(bits, d.n_crossings, tuple(tuple(g) for g in groups), pointed)

"""
Completing the triple of a 1-handle move: insert one crossing c where the
handle sits, so that the 0-smoothing of c gives back the source of the move
and the 1-smoothing its target.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from app.complexes.grading import Shift
from app.diagrams.diagram import _IN_SLOTS, LinkDiagram, _build, to_raw
from app.exceptions import DiagramError
from app.maps.handles import OneHandleMove
from app.sequences.triple import ExactTriple, exact_triple

log = logging.getLogger("khtorus.triple")


@dataclass(frozen=True)
class CompletedTriple:
    move: OneHandleMove
    diagram: LinkDiagram
    crossing: int
    triple: ExactTriple

    @property
    def sign(self) -> int:
        return self.triple.sign

    @property
    def source_shift(self) -> Shift:
        """K̃h(D0) = K̃h(source)[shift]; nonzero only when D0 reverses components of the source."""
        delta = self.triple.d0.n_minus - self.move.source.n_minus
        return Shift(-delta, -3 * delta)

    @property
    def target_shift(self) -> Shift:
        delta = self.triple.d1.n_minus - self.move.target.n_minus
        return Shift(-delta, -3 * delta)


def complete_triple(h: OneHandleMove) -> CompletedTriple:
    d = h.source
    x, y = h.locus
    entries, loops = to_raw(d)
    fresh = d.n_arcs
    heads = {arcs[s]: (ci, s) for ci, (_, arcs, sign) in enumerate(entries) for s in _IN_SLOTS[sign]}

    def cut(a: int) -> int:
        """Let a end at the new crossing; the arc continuing after it is returned."""
        nonlocal fresh
        if a in loops:
            loops.remove(a)
            return a
        ci, s = heads[a]
        entries[ci][1][s] = fresh
        fresh += 1
        return fresh - 1

    if x == y:
        if x not in loops:
            raise DiagramError("a saddle on a single arc needs a crossingless loop")
        loops.remove(x)
        slots = [x, fresh, fresh, x]
    else:
        slots = [x, cut(x), y, cut(y)]

    comp = d.component_labels
    touched = {comp[x], comp[y]}
    hints = {a: where for a, where in heads.items() if comp[a] not in touched}
    label = max(d.labels, default=-1) + 1
    entries.append([label, slots, None])
    diagram, _ = _build(entries, loops, d.basepoint, hints)
    log.info(f"Completed triple: crossing {label} of {diagram}")
    return CompletedTriple(h, diagram, label, exact_triple(diagram, label))

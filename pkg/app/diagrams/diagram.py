"""
Oriented link diagrams and the surgeries performed on them.

A diagram is a tuple of crossings plus crossingless loops. Each crossing
lists its four arc ids counterclockwise starting at the incoming under-arc.
The over strand runs slot 3 -> slot 1 at a positive crossing and
slot 1 -> slot 3 at a negative one, so every arc leaves exactly one
crossing slot and enters exactly one. Arc ids are dense and canonical:
crossing arcs are numbered by first appearance (crossing order, then slot
order) and loops come last. Two diagrams built the same way compare equal.

Local smoothing rule: the 0-smoothing joins slots (0,1) and (2,3), the
1-smoothing joins (0,3) and (1,2).
"""
from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import chain

from app.diagrams.union_find import UnionFind
from app.exceptions import DiagramError

log = logging.getLogger("khtorus.diagram")

POSITIVE = 1
NEGATIVE = -1

_IN_SLOTS = {POSITIVE: (0, 3), NEGATIVE: (0, 1)}
_OUT_SLOTS = {POSITIVE: (2, 1), NEGATIVE: (2, 3)}

# Orientation hint marking an arc whose inherited direction is contradictory.
_CONFLICT = (-1, -1)
_MAX_FREE_ENUMERATION = 12


@dataclass(frozen=True)
class Crossing:
    label: int
    arcs: tuple[int, int, int, int]
    sign: int

    def __post_init__(self):
        if self.sign not in (POSITIVE, NEGATIVE):
            raise DiagramError(f"crossing {self.label}: sign must be +1 or -1, got {self.sign}")
        if len(self.arcs) != 4:
            raise DiagramError(f"crossing {self.label}: expected 4 arcs, got {len(self.arcs)}")

    @property
    def incoming(self) -> tuple[int, int]:
        return _IN_SLOTS[self.sign]

    @property
    def outgoing(self) -> tuple[int, int]:
        return _OUT_SLOTS[self.sign]

    def pairs(self, bit: int) -> tuple[tuple[int, int], tuple[int, int]]:
        """Arc pairs joined by the given local smoothing."""
        a0, a1, a2, a3 = self.arcs
        if bit:
            return (a0, a3), (a1, a2)
        return (a0, a1), (a2, a3)


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[Crossing, ...]
    loops: tuple[int, ...] = ()
    basepoint: int | None = 0
    closure_arcs: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        self._validate()

    def _validate(self):
        n_arcs = self.n_arcs
        heads: set[int] = set()
        tails: set[int] = set()
        labels: set[int] = set()
        for c in self.crossings:
            if c.label in labels:
                raise DiagramError(f"duplicate crossing label {c.label}")
            labels.add(c.label)
            for s in c.incoming:
                if c.arcs[s] in heads:
                    raise DiagramError(f"arc {c.arcs[s]} enters two crossing slots")
                heads.add(c.arcs[s])
            for s in c.outgoing:
                if c.arcs[s] in tails:
                    raise DiagramError(f"arc {c.arcs[s]} leaves two crossing slots")
                tails.add(c.arcs[s])
        loops = set(self.loops)
        if len(loops) != len(self.loops) or loops & heads:
            raise DiagramError("loop arcs must be distinct and touch no crossing")
        expected = set(range(n_arcs))
        if heads | loops != expected or tails | loops != expected:
            raise DiagramError("arc ids must be dense and each arc must run from one slot to another")
        if self.basepoint is not None and not 0 <= self.basepoint < n_arcs:
            raise DiagramError(f"basepoint arc {self.basepoint} does not exist")

    # ── counts ────────────────────────────────────────────────────────────

    @property
    def n_arcs(self) -> int:
        return 2 * len(self.crossings) + len(self.loops)

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_plus(self) -> int:
        return sum(1 for c in self.crossings if c.sign == POSITIVE)

    @property
    def n_minus(self) -> int:
        return sum(1 for c in self.crossings if c.sign == NEGATIVE)

    @property
    def writhe(self) -> int:
        return self.n_plus - self.n_minus

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(c.label for c in self.crossings)

    # ── incidence ─────────────────────────────────────────────────────────

    @cached_property
    def heads(self) -> dict[int, tuple[int, int]]:
        """arc -> (crossing index, slot) where the arc ends."""
        return {c.arcs[s]: (ci, s) for ci, c in enumerate(self.crossings) for s in c.incoming}

    @cached_property
    def tails(self) -> dict[int, tuple[int, int]]:
        """arc -> (crossing index, slot) where the arc starts."""
        return {c.arcs[s]: (ci, s) for ci, c in enumerate(self.crossings) for s in c.outgoing}

    @cached_property
    def _label_index(self) -> dict[int, int]:
        return {c.label: ci for ci, c in enumerate(self.crossings)}

    def crossing_index(self, label: int) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise DiagramError(f"no crossing with id {label}") from None

    def crossing(self, label: int) -> Crossing:
        return self.crossings[self.crossing_index(label)]

    @cached_property
    def component_labels(self) -> tuple[int, ...]:
        """Component index per arc; components are numbered by smallest arc."""
        uf = UnionFind(self.n_arcs)
        for c in self.crossings:
            uf.union(c.arcs[0], c.arcs[2])
            uf.union(c.arcs[1], c.arcs[3])
        return tuple(uf.labels())

    @property
    def n_components(self) -> int:
        return max(self.component_labels, default=-1) + 1

    def components(self) -> list[tuple[int, ...]]:
        groups: list[list[int]] = [[] for _ in range(self.n_components)]
        for arc, comp in enumerate(self.component_labels):
            groups[comp].append(arc)
        return [tuple(g) for g in groups]

    def component_of(self, arc: int) -> int:
        return self.component_labels[arc]

    def linking_number(self, r: int, s: int) -> int:
        if r == s:
            raise DiagramError("linking number needs two distinct components")
        comp = self.component_labels
        total = 0
        for c in self.crossings:
            if {comp[c.arcs[0]], comp[c.arcs[1]]} == {r, s}:
                total += c.sign
        return total // 2

    def linking_sum(self, r: int) -> int:
        """Sum of lk(L_r, L_i) over the other components."""
        return sum(self.linking_number(r, s) for s in range(self.n_components) if s != r)

    # ── interchange ───────────────────────────────────────────────────────

    def to_dict(self) -> dict:
        return {
            "crossings": [{"label": c.label, "arcs": list(c.arcs), "sign": c.sign} for c in self.crossings],
            "loops": list(self.loops),
            "basepoint": self.basepoint,
        }

    @classmethod
    def from_dict(cls, data: dict) -> LinkDiagram:
        crossings = tuple(Crossing(x["label"], tuple(x["arcs"]), x["sign"]) for x in data["crossings"])
        return cls(crossings, tuple(data.get("loops", ())), data.get("basepoint", 0))

    @cached_property
    def fingerprint(self) -> str:
        """Short content hash of the JSON form; used to tag computed tables."""
        payload = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:16]

    def __str__(self) -> str:
        return (f"LinkDiagram(crossings={self.n_crossings}, n+={self.n_plus}, n-={self.n_minus}, "
                f"components={self.n_components}, basepoint={self.basepoint})")


@dataclass(frozen=True)
class Surgery:
    """A diagram obtained from `source` together with the source-arc -> target-arc map."""
    source: LinkDiagram
    diagram: LinkDiagram
    arc_map: tuple[int, ...]
    locus: tuple[int, ...] = ()


# ── raw construction ──────────────────────────────────────────────────────────
# A raw entry is [label, [a0, a1, a2, a3], sign]; arc ids may be arbitrary
# ints. _build() orients (when hints are given) and renumbers canonically.

def to_raw(d: LinkDiagram, offset: int = 0, label_offset: int = 0) -> tuple[list[list], list[int]]:
    entries = [[c.label + label_offset, [a + offset for a in c.arcs], c.sign] for c in d.crossings]
    return entries, [a + offset for a in d.loops]


def _occurrences(entries: list[list]) -> dict[int, list[tuple[int, int]]]:
    occ: dict[int, list[tuple[int, int]]] = {}
    for ci, (_, arcs, _) in enumerate(entries):
        for s, a in enumerate(arcs):
            occ.setdefault(a, []).append((ci, s))
    for a, where in occ.items():
        if len(where) != 2:
            raise DiagramError(f"arc {a} meets {len(where)} crossing slots, expected 2")
    return occ


def _rotated(arcs: list[int], heads: dict[int, tuple[int, int]], ci: int) -> tuple[tuple[int, ...], int]:
    """Rotate a crossing so slot 0 is the incoming under-arc and read off its sign."""
    under_in = 0 if heads[arcs[0]] == (ci, 0) else 2
    over_in = 1 if heads[arcs[1]] == (ci, 1) else 3
    if under_in == 2:
        arcs = arcs[2:] + arcs[:2]
        over_in = (over_in + 2) % 4
    return tuple(arcs), POSITIVE if over_in == 3 else NEGATIVE


def _orient(entries: list[list], hints: dict[int, tuple[int, int]]) -> list[list]:
    """
    Choose an orientation. Components whose hinted arc directions agree keep
    them; the rest take the orientation minimising n-, ties going to the
    lexicographically first choice by component index.
    """
    occ = _occurrences(entries)
    heads: dict[int, tuple[int, int]] = {}
    components: list[list[int]] = []
    free: list[int] = []

    for start in sorted(occ):
        if start in heads:
            continue
        comp: list[int] = []
        arc, head = start, occ[start][0]
        while arc not in heads:
            heads[arc] = head
            comp.append(arc)
            ci, s = head
            nxt = entries[ci][1][(s + 2) % 4]
            first, second = occ[nxt]
            head = second if first == (ci, (s + 2) % 4) else first
            arc = nxt
        verdicts = set()
        for a in comp:
            hint = hints.get(a)
            if hint is None:
                continue
            verdicts.add("conflict" if hint == _CONFLICT else hint == heads[a])
        if verdicts == {False}:
            _flip(comp, heads, occ)
        elif verdicts != {True}:
            free.append(len(components))
        components.append(comp)

    def n_minus() -> int:
        return sum(1 for ci, (_, arcs, _) in enumerate(entries) if _rotated(arcs, heads, ci)[1] == NEGATIVE)

    if free:
        if len(free) <= _MAX_FREE_ENUMERATION:
            best_mask, best = 0, n_minus()
            for mask in range(1, 1 << len(free)):
                chosen = [components[free[t]] for t in range(len(free)) if mask >> t & 1]
                for comp in chosen:
                    _flip(comp, heads, occ)
                score = n_minus()
                if score < best:
                    best_mask, best = mask, score
                for comp in chosen:
                    _flip(comp, heads, occ)
            for t in range(len(free)):
                if best_mask >> t & 1:
                    _flip(components[free[t]], heads, occ)
        else:
            current = n_minus()
            for idx in free:
                _flip(components[idx], heads, occ)
                score = n_minus()
                if score < current:
                    current = score
                else:
                    _flip(components[idx], heads, occ)

    out = []
    for ci, (label, arcs, _) in enumerate(entries):
        rotated, sign = _rotated(list(arcs), heads, ci)
        out.append([label, list(rotated), sign])
    return out


def _flip(comp: list[int], heads: dict, occ: dict):
    for a in comp:
        first, second = occ[a]
        heads[a] = second if heads[a] == first else first


def _build(entries: list[list], loops: list[int], basepoint: int | None,
           hints: dict[int, tuple[int, int]] | None = None,
           closure: tuple[int, ...] = ()) -> tuple[LinkDiagram, dict[int, int]]:
    if hints is not None:
        entries = _orient(entries, hints)
    relabel: dict[int, int] = {}
    for _, arcs, _ in entries:
        for a in arcs:
            if a not in relabel:
                relabel[a] = len(relabel)
    for a in sorted(loops):
        relabel[a] = len(relabel)
    crossings = tuple(Crossing(label, tuple(relabel[a] for a in arcs), sign) for label, arcs, sign in entries)
    new_loops = tuple(relabel[a] for a in sorted(loops))
    bp = relabel[basepoint] if basepoint is not None else None
    diagram = LinkDiagram(crossings, new_loops, bp, tuple(relabel[a] for a in closure))
    return diagram, relabel


def from_raw(entries: list[list], loops: list[int], basepoint: int | None,
             hints: dict[int, tuple[int, int]] | None = None) -> tuple[LinkDiagram, dict[int, int]]:
    return _build(entries, loops, basepoint, hints)


def heads_hint(entries: list[list]) -> dict[int, tuple[int, int]]:
    """Hints that reproduce the orientation already encoded in signed raw entries."""
    return {arcs[s]: (ci, s) for ci, (_, arcs, sign) in enumerate(entries) for s in _IN_SLOTS[sign]}


def from_pd(pd: list[tuple[int, int, int, int]], loops: tuple[int, ...] = (), basepoint: int | None = None) -> LinkDiagram:
    """
    Build a diagram from PD-style tuples: arcs counterclockwise with the
    under strand in slots 0 and 2 and slot 0 incoming. The direction of
    strands that are never under anywhere is chosen to minimise n-.
    """
    entries = [[k, list(x), None] for k, x in enumerate(pd)]
    hints: dict[int, tuple[int, int]] = {}
    for ci, (_, arcs, _) in enumerate(entries):
        a = arcs[0]
        hints[a] = _CONFLICT if a in hints else (ci, 0)
    if basepoint is None:
        basepoint = entries[0][1][0] if entries else (loops[0] if loops else None)
    diagram, _ = _build(entries, list(loops), basepoint, hints)
    return diagram


# ── surgeries ─────────────────────────────────────────────────────────────────

def with_basepoint(d: LinkDiagram, arc: int) -> LinkDiagram:
    if not 0 <= arc < d.n_arcs:
        raise DiagramError(f"basepoint arc {arc} does not exist")
    return LinkDiagram(d.crossings, d.loops, arc, d.closure_arcs)


def _union_raw(d1: LinkDiagram, d2: LinkDiagram):
    offset = d1.n_arcs
    label_offset = max(d1.labels, default=-1) + 1
    e1, l1 = to_raw(d1)
    e2, l2 = to_raw(d2, offset, label_offset)
    return e1 + e2, l1 + l2, offset


def disjoint_union(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    return disjoint_union_surgery(d1, d2)[0]


def disjoint_union_surgery(d1: LinkDiagram, d2: LinkDiagram) -> tuple[LinkDiagram, tuple[int, ...], tuple[int, ...]]:
    """The union plus arc maps from d1 and from d2. Crossings of d2 are relabelled after those of d1."""
    entries, loops, offset = _union_raw(d1, d2)
    closure = tuple(d1.closure_arcs) + tuple(a + offset for a in d2.closure_arcs)
    diagram, relabel = _build(entries, loops, d1.basepoint, closure=closure)
    left = tuple(relabel[a] for a in range(d1.n_arcs))
    right = tuple(relabel[a + offset] for a in range(d2.n_arcs))
    return diagram, left, right


def _raw_saddle(entries: list[list], loops: list[int], x: int, y: int) -> tuple[dict[int, int], tuple[int, int]]:
    """
    Reconnect arcs x and y in place. The arc ending where x ended keeps the
    id x (same for y). Returns the arc substitution and the target locus.
    """
    loop_set = set(loops)
    if x == y:
        if x not in loop_set:
            raise DiagramError("a saddle on a single arc needs a crossingless loop")
        z = max(chain(loops, (a for _, arcs, _ in entries for a in arcs))) + 1
        loops.append(z)
        return {}, (x, z)
    if x in loop_set or y in loop_set:
        keep, drop = (y, x) if x in loop_set else (x, y)
        loops.remove(drop)
        return {drop: keep}, (keep, keep)
    tails = {arcs[s]: (ci, s) for ci, (_, arcs, sign) in enumerate(entries) for s in _OUT_SLOTS[sign]}
    (cx, sx), (cy, sy) = tails[x], tails[y]
    entries[cx][1][sx] = y
    entries[cy][1][sy] = x
    return {}, (x, y)


def saddle(d: LinkDiagram, x: int, y: int) -> Surgery:
    """Oriented 1-handle between arcs x and y; crossings and their order are untouched."""
    for a in (x, y):
        if not 0 <= a < d.n_arcs:
            raise DiagramError(f"arc {a} does not exist")
    entries, loops = to_raw(d)
    subst, locus = _raw_saddle(entries, loops, x, y)
    bp = subst.get(d.basepoint, d.basepoint) if d.basepoint is not None else None
    diagram, relabel = _build(entries, loops, bp)
    arc_map = tuple(relabel[subst.get(a, a)] for a in range(d.n_arcs))
    return Surgery(d, diagram, arc_map, tuple(relabel[a] for a in locus))


@dataclass(frozen=True)
class SplicedSum:
    left: LinkDiagram
    right: LinkDiagram
    union: LinkDiagram
    handle: Surgery
    left_map: tuple[int, ...]
    right_map: tuple[int, ...]

    @property
    def diagram(self) -> LinkDiagram:
        return self.handle.diagram


def connected_sum_surgery(d1: LinkDiagram, d2: LinkDiagram) -> SplicedSum:
    """
    Splice the two basepoint arcs. The result's basepoint is the spliced arc
    ending where d1's basepoint ended.
    """
    if d1.basepoint is None or d2.basepoint is None:
        raise DiagramError("connected sum needs basepoints on both diagrams")
    union, left, right = disjoint_union_surgery(d1, d2)
    handle = saddle(union, left[d1.basepoint], right[d2.basepoint])
    return SplicedSum(
        d1, d2, union, handle,
        tuple(handle.arc_map[a] for a in left),
        tuple(handle.arc_map[a] for a in right),
    )


def connected_sum(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    return connected_sum_surgery(d1, d2).diagram


def smoothing_surgery(d: LinkDiagram, labels, mode: int) -> Surgery:
    """Replace every listed crossing by its `mode` smoothing and re-derive the orientation."""
    labels = [labels] if isinstance(labels, int) else list(labels)
    if mode not in (0, 1):
        raise DiagramError(f"smoothing mode must be 0 or 1, got {mode}")
    removed = {d.crossing_index(label) for label in labels}
    uf = UnionFind(d.n_arcs)
    for ci in removed:
        for u, v in d.crossings[ci].pairs(mode):
            uf.union(u, v)
    entries = []
    for ci, c in enumerate(d.crossings):
        if ci not in removed:
            entries.append([c.label, [uf.find(a) for a in c.arcs], c.sign])
    touched = {a for _, arcs, _ in entries for a in arcs}
    loops = sorted({uf.find(a) for a in range(d.n_arcs)} - touched)

    head_count: dict[int, int] = {}
    hints: dict[int, tuple[int, int]] = {}
    for ci, (_, arcs, sign) in enumerate(entries):
        for s in _IN_SLOTS[sign]:
            head_count[arcs[s]] = head_count.get(arcs[s], 0) + 1
            hints[arcs[s]] = (ci, s)
    for a in touched:
        if head_count.get(a, 0) != 1:
            hints[a] = _CONFLICT

    bp = uf.find(d.basepoint) if d.basepoint is not None else None
    diagram, relabel = _build(entries, loops, bp, hints)
    arc_map = tuple(relabel[uf.find(a)] for a in range(d.n_arcs))
    return Surgery(d, diagram, arc_map)


def replace_crossing(d: LinkDiagram, c: int, mode) -> LinkDiagram:
    """D0 (mode 0 / "zero") or D1 (mode 1 / "one") at crossing c."""
    if isinstance(mode, str):
        try:
            mode = {"zero": 0, "one": 1}[mode]
        except KeyError:
            raise DiagramError(f"unknown smoothing mode {mode!r}") from None
    return smoothing_surgery(d, [c], mode).diagram


def reversal_surgery(d: LinkDiagram, r: int) -> Surgery:
    """Reverse component r. States and circles are untouched; only slots and signs move."""
    if not 0 <= r < d.n_components:
        raise DiagramError(f"no component {r}")
    comp = d.component_labels
    entries = []
    for c in d.crossings:
        under_rev = comp[c.arcs[0]] == r
        over_rev = comp[c.arcs[1]] == r
        arcs = list(c.arcs[2:] + c.arcs[:2]) if under_rev else list(c.arcs)
        sign = -c.sign if under_rev != over_rev else c.sign
        entries.append([c.label, arcs, sign])
    diagram, relabel = _build(entries, list(d.loops), d.basepoint)
    return Surgery(d, diagram, tuple(relabel[a] for a in range(d.n_arcs)))


def reverse_component(d: LinkDiagram, r: int) -> LinkDiagram:
    return reversal_surgery(d, r).diagram

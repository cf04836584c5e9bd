"""
Braid words and their closures.

Strands are drawn bottom to top and oriented upwards; letter k > 0 is
sigma_k (a positive crossing between positions k-1 and k), k < 0 its
inverse. The closure arcs run around the right-hand side, nested so that
position 0 (strand 1) is the outermost; the basepoint sits on that arc.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

from app.diagrams.diagram import NEGATIVE, POSITIVE, LinkDiagram, _build
from app.exceptions import DiagramError

log = logging.getLogger("khtorus.braids")

# Crossing whose smoothings give the documented exact triples of the
# intermediate families: the last sigma_2 before the twist region.
FAMILY_CROSSING = {"332": 5, "342": 7}
_FAMILY_ROWS = {"332": 3, "342": 4}


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise DiagramError(f"a braid needs at least one strand, got {self.strands}")
        for k in self.letters:
            if k == 0 or abs(k) >= self.strands:
                raise DiagramError(f"letter {k} out of range for {self.strands} strands")

    def __mul__(self, other: BraidWord) -> BraidWord:
        """self followed by other (other stacked on top)."""
        if other.strands != self.strands:
            raise DiagramError("cannot compose braids on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return ",".join(str(k) for k in self.letters)


def parse_braid(text: str, strands: int | None = None) -> BraidWord:
    """Comma-separated signed integers, e.g. "-1,-2,-1,-2"."""
    text = text.strip()
    try:
        letters = tuple(int(tok) for tok in text.split(",") if tok.strip()) if text else ()
    except ValueError:
        raise DiagramError(f"cannot parse braid word {text!r}") from None
    if strands is None:
        strands = max((abs(k) for k in letters), default=0) + 1
    return BraidWord(strands, letters)


def braid_closure(word: BraidWord) -> LinkDiagram:
    p = word.strands
    current = list(range(p))
    next_arc = p
    entries = []
    for label, k in enumerate(word.letters):
        i = abs(k) - 1
        left, right = current[i], current[i + 1]
        top_right, top_left = next_arc, next_arc + 1
        next_arc += 2
        if k > 0:
            # under strand: bottom-right -> top-left; over: bottom-left -> top-right
            entries.append([label, [right, top_right, top_left, left], POSITIVE])
        else:
            # under strand: bottom-left -> top-right; over: bottom-right -> top-left
            entries.append([label, [left, right, top_right, top_left], NEGATIVE])
        current[i], current[i + 1] = top_left, top_right

    rename = {current[i]: i for i in range(p) if current[i] != i}
    for entry in entries:
        entry[1] = [rename.get(a, a) for a in entry[1]]
    loops = [i for i in range(p) if current[i] == i]
    diagram, _ = _build(entries, loops, 0, closure=tuple(range(p)))
    return diagram


def torus_word(p: int, q: int) -> BraidWord:
    if p < 1 or q < 0:
        raise DiagramError(f"torus link needs p >= 1 and q >= 0, got ({p}, {q})")
    row = tuple(-k for k in range(1, p))
    return BraidWord(p, row * q)


@lru_cache(maxsize=64)
def torus_diagram(p: int, q: int) -> LinkDiagram:
    """Closure of ((sigma_1 ... sigma_{p-1})^{-1})^q: q(p-1) negative crossings."""
    return braid_closure(torus_word(p, q))


def usual_crossing(p: int, q: int) -> int:
    """Topmost, leftmost crossing of D_{p,q}: the first letter of the top row."""
    if p < 2 or q < 1:
        raise DiagramError(f"D_{{{p},{q}}} has no crossings")
    return (q - 1) * (p - 1)


def top_row(p: int, q: int) -> list[int]:
    """Crossing labels of the top row of D_{p,q}."""
    start = (q - 1) * (p - 1)
    return list(range(start, start + p - 1))


def family_word(name: str, q: int) -> BraidWord:
    """T_{(3,3),(2,q)} ("332") and T_{(3,4),(2,q)} ("342") as 3-strand braid words."""
    if name not in _FAMILY_ROWS:
        raise DiagramError(f"unknown family {name!r}; expected one of {sorted(_FAMILY_ROWS)}")
    if q < 0:
        raise DiagramError(f"twist count must be >= 0, got {q}")
    return BraidWord(3, (-1, -2) * _FAMILY_ROWS[name] + (-1,) * q)


def family_diagram(name: str, q: int) -> LinkDiagram:
    return braid_closure(family_word(name, q))

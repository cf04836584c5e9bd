"""
Maps on the unreduced complex: multiplication by x at a marked arc, and
Shumakovitch's ν, which deletes one x at a time.
"""
from __future__ import annotations

from app.complexes.complex import GradedComplex, Label
from app.exceptions import ChainMapError, DiagramError
from app.linalg.gf2 import iter_bits
from app.maps.base import ChainMap


def _unreduced(c: GradedComplex, what: str):
    if c.reduced:
        raise ChainMapError(f"{what} is defined on the unreduced complex")


def x_bullet_map(c: GradedComplex, arc: int | None = None) -> ChainMap:
    """Multiplication by x on the circle through `arc` (the basepoint by default); bidegree (0,-2)."""
    _unreduced(c, "x•")
    arc = c.diagram.basepoint if arc is None else arc
    if arc is None or not 0 <= arc < c.diagram.n_arcs:
        raise DiagramError(f"cannot mark arc {arc}")
    labels = c.cube.labels

    def image(label: Label) -> list[Label]:
        state, mask = label
        bit = 1 << labels[state][arc]
        return [] if mask & bit else [(state, mask | bit)]

    return ChainMap(c, c, (0, -2), image=image, name=f"x[{arc}]")


def nu_image(label: Label) -> list[Label]:
    state, mask = label
    return [(state, mask & ~(1 << t)) for t in iter_bits(mask)]


def shumakovitch_nu(c: GradedComplex) -> ChainMap:
    """ν(x_1 ... x_k) = sum over t of the monomial with x_t omitted; bidegree (0,2)."""
    _unreduced(c, "ν")
    return ChainMap(c, c, (0, 2), image=nu_image, name="nu")

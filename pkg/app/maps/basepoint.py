"""
Moving the basepoint. Both reduced complexes sit inside the unreduced one
(monomials containing x at the old or at the new marked circle), and
f = x'• ∘ ν carries one onto the other with inverse g = x• ∘ ν.
"""
from __future__ import annotations

from app.complexes.complex import GradedComplex, Label, build_complex
from app.complexes.shumakovitch import nu_image
from app.diagrams.diagram import LinkDiagram, with_basepoint
from app.maps.base import ChainMap, compose, maps_equal
from app.maps.handles import OneHandleMove, handle_chain_map


def _marked_nu(c: GradedComplex, arc: int):
    labels = c.cube.labels

    def image(label: Label) -> list[Label]:
        out = []
        for state, mask in nu_image(label):
            bit = 1 << labels[state][arc]
            if not mask & bit:
                out.append((state, mask | bit))
        return out

    return image


def basepoint_transport(d: LinkDiagram, p: int, p2: int) -> ChainMap:
    """Chain isomorphism C̃(D, p) -> C̃(D, p2) of bidegree (0,0)."""
    source = build_complex(with_basepoint(d, p))
    target = build_complex(with_basepoint(d, p2))
    return ChainMap(source, target, (0, 0), image=_marked_nu(target, p2), name=f"bp{p}->{p2}")


def basepoint_inverse(d: LinkDiagram, p: int, p2: int) -> ChainMap:
    """g = x• ∘ ν: C̃(D, p2) -> C̃(D, p)."""
    source = build_complex(with_basepoint(d, p2))
    target = build_complex(with_basepoint(d, p))
    return ChainMap(source, target, (0, 0), image=_marked_nu(target, p), name=f"bp{p2}->{p}")


def transport_commutes_with_handle(h: OneHandleMove, p: int, p2: int) -> bool:
    """
    Naturality of the transport: F ∘ f = f' ∘ F, where F is the saddle map
    with the basepoint at p2 (left) or p (right) and f, f' move p to p2 in
    the source and in the target of the saddle.
    """
    src_old = build_complex(with_basepoint(h.source, p))
    src_new = build_complex(with_basepoint(h.source, p2))
    tgt_old = build_complex(with_basepoint(h.target, h.arc_map[p]))
    tgt_new = build_complex(with_basepoint(h.target, h.arc_map[p2]))
    before = basepoint_transport(h.source, p, p2)
    after = basepoint_transport(h.target, h.arc_map[p], h.arc_map[p2])
    left = compose(handle_chain_map(h, src_new, tgt_new), before)
    right = compose(after, handle_chain_map(h, src_old, tgt_old))
    return maps_equal(left, right)

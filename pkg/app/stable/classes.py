"""
Stable classes: finite representatives of elements of K̃h(T_{p,∞}),
certified by pushing them along the inclusions until the Stošić range
covers their degree, and products of such classes.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from app.algebra.products import (
    TorusClass,
    fusion_product,
    push_class,
    torus_class,
    unit_class,
)
from app.complexes.grading import Bidegree
from app.config import settings
from app.exceptions import CertificationError, DiagramError, EmptyTableError
from app.stable.table import required_stage

log = logging.getLogger("khtorus.stable")


@dataclass(frozen=True)
class StableClass:
    p: int
    representative: TorusClass
    certified_at: int
    survival: tuple[int, ...]
    zero: bool = False

    @property
    def degree(self) -> Bidegree:
        return self.representative.degree

    @property
    def stage(self) -> int:
        return self.representative.q

    @property
    def i(self) -> int:
        return self.degree.i

    @property
    def delta(self) -> int:
        return self.degree.delta

    def at_stage(self, q: int) -> TorusClass:
        return push_class(self.representative, q)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "i": self.i,
            "delta": self.delta,
            "stage": self.stage,
            "certified_at": self.certified_at,
            "survival": list(self.survival),
            "zero": self.zero,
        }


def _certify(c: TorusClass, allow_zero: bool) -> StableClass:
    top = max(c.q, required_stage(c.p, c.degree.i))
    if top > settings.KH_STABLE_MAX_STAGE or top * (c.p - 1) > settings.KH_MAX_CROSSINGS:
        raise CertificationError(
            f"degree (i={c.degree.i}, δ={c.delta}) of T({c.p},·) needs stage {top}, beyond the ceiling"
        )
    survival = []
    current = c
    while True:
        if current.is_zero:
            if not allow_zero:
                raise CertificationError(f"{c} vanishes at stage {current.q}")
            log.info(f"{c} is zero from stage {current.q} on")
            return StableClass(c.p, c, current.q, tuple(survival), zero=True)
        survival.append(current.q)
        if current.q >= top:
            break
        current = push_class(current, current.q + 1)
    return StableClass(c.p, c, top, tuple(survival))


def stable_class(p: int, i: int, delta: int, witness_q: int | None = None, k: int = 0) -> StableClass:
    """
    The k-th basis class of the witness stage at normalized (i, δ), certified
    to survive into the limit. witness_q defaults to the first stage where
    the degree is already stable.
    """
    q = witness_q if witness_q is not None else required_stage(p, i)
    try:
        c = torus_class(p, q, i, delta, k)
    except EmptyTableError as e:
        raise CertificationError(str(e)) from None
    return _certify(c, allow_zero=False)


def stable_unit(p: int) -> StableClass:
    return _certify(unit_class(p), allow_zero=False)


def stable_product(a: StableClass, b: StableClass) -> StableClass:
    """a·b computed at stage a.stage + b.stage, then certified again (possibly as zero)."""
    if a.p != b.p:
        raise DiagramError(f"cannot multiply stable classes for p={a.p} and p={b.p}")
    product = fusion_product(a.representative, b.representative)
    return _certify(product, allow_zero=True)


@dataclass(frozen=True)
class WidthWitness:
    q: int
    word: str
    witness: TorusClass
    base: TorusClass
    bound: int

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "word": self.word,
            "witness": {"i": self.witness.degree.i, "delta": self.witness.delta},
            "base": {"i": self.base.degree.i, "delta": self.base.delta},
            "bound": self.bound,
        }


def width_lower_bound_witness(q: int) -> WidthWitness:
    """
    A nonzero class of T_{4,q} far from the degree-0 class in δ: vⁿ for
    q = 4n, 4n+1, 4n+2 and vⁿz for q = 4n+3, with v taken in T_{4,4} and z
    in T_{4,3}. The δ-distance bounds the width from below.
    """
    if q < 1:
        raise DiagramError(f"q must be >= 1, got {q}")
    n, rest = divmod(q, 4)
    power, word = unit_class(4), ""
    if n:
        v = torus_class(4, 4, -6, 4)
        power, word = v, "v"
        for _ in range(n - 1):
            power = fusion_product(power, v)
        if n > 1:
            word = f"v^{n}"
    if rest == 3:
        z = torus_class(4, 3, -4, 2)
        witness = fusion_product(power, z) if n else z
        word += "z"
    else:
        witness = push_class(power, q)
    base = push_class(unit_class(4), q)
    if witness.is_zero or base.is_zero:
        raise CertificationError(f"width witness {word or '1'} vanishes in T(4,{q})")
    bound = (witness.delta - base.delta) // 2 + 1
    log.info(f"Width of T(4,{q}) >= {bound}, witnessed by {word or '1'}")
    return WidthWitness(q, word or "1", witness, base, bound)

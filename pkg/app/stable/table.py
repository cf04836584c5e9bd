"""
Stable tables K̃h(T_{p,∞}) on a range of homological degrees, certified
from two consecutive finite stages, and the monomial counts of the known
stable algebras they are compared against.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product

from app.complexes.grading import Bidegree
from app.config import settings
from app.exceptions import DiagramError, ResourceLimitError
from app.homology.tables import render_grid
from app.stable.system import DirectedSystem, stosic_range

log = logging.getLogger("khtorus.stable")

STOSIC = "stosic"
INCLUSION = "inclusion"

# Normalized (i, δ) degree of each generator and the largest exponent it
# reaches in a normal-form monomial (None: unbounded).
_GENERATORS: dict[int, list[tuple[str, tuple[int, int], int | None]]] = {
    2: [("x", (-2, 0), None), ("y", (-3, 0), 1)],
    3: [("x", (-2, 0), 1), ("y", (-3, 0), 1), ("z", (-4, 2), None)],
    4: [("x", (-2, 0), 1), ("y", (-3, 0), 1), ("z", (-4, 2), None),
        ("v", (-6, 4), None), ("w", (-7, 4), 1)],
}


def required_stage(p: int, i_cutoff: int) -> int:
    """Smallest q whose inclusion is an isomorphism in every degree i >= i_cutoff."""
    return max(p + 1, 4 - p - i_cutoff)


def algebra_monomials(p: int, i_cutoff: int) -> dict[tuple[int, int], list[str]]:
    """Normal-form monomials of the stable algebra with i >= i_cutoff, keyed by (i, δ)."""
    try:
        gens = _GENERATORS[p]
    except KeyError:
        raise DiagramError(f"no stable algebra presentation for p={p}") from None
    ranges = []
    for _, (i, _), cap in gens:
        top = -i_cutoff // -i
        ranges.append(range(min(top, cap) + 1 if cap is not None else top + 1))
    out: dict[tuple[int, int], list[str]] = {}
    for exps in product(*ranges):
        i = sum(e * g[1][0] for e, g in zip(exps, gens))
        if i < i_cutoff:
            continue
        delta = sum(e * g[1][1] for e, g in zip(exps, gens))
        word = "".join(name if e == 1 else f"{name}^{e}" for e, (name, _, _) in zip(exps, gens) if e)
        out.setdefault((i, delta), []).append(word or "1")
    return dict(sorted(out.items()))


def algebra_dimensions(p: int, i_cutoff: int) -> dict[tuple[int, int], int]:
    return {key: len(words) for key, words in algebra_monomials(p, i_cutoff).items()}


@dataclass
class StableTable:
    p: int
    cutoff: int
    stage: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)
    evidence: dict[tuple[int, int], str] = field(default_factory=dict)
    candidates: dict[tuple[int, int], int] = field(default_factory=dict)
    complete: bool = True

    def dim(self, i: int, delta: int) -> int:
        return self.entries.get((i, delta), 0)

    def matches(self, expected: dict[tuple[int, int], int]) -> bool:
        return self.entries == {k: v for k, v in expected.items() if v}

    def render(self) -> str:
        cells = {key: str(n) for key, n in self.entries.items()}
        cells.update({key: f"{n}?" for key, n in self.candidates.items()})
        return render_grid(cells)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "cutoff": self.cutoff,
            "stage": self.stage,
            "complete": self.complete,
            "entries": [
                {"i": i, "delta": delta, "dim": n, "evidence": self.evidence[(i, delta)]}
                for (i, delta), n in self.entries.items()
            ],
            "candidates": [{"i": i, "delta": delta, "dim": n} for (i, delta), n in self.candidates.items()],
        }


def stable_table(p: int, cutoff: int, max_stage: int | None = None) -> StableTable:
    """
    Stable dimensions on i >= cutoff. Entries of the last computed stage are
    certified by the Stošić range, or else by the inclusion from the stage
    before being an isomorphism there. With max_stage given, a stage below
    the one required is accepted and the remaining entries are reported as
    uncertified candidates.
    """
    if p < 2:
        raise DiagramError(f"stable tables need p >= 2, got {p}")
    if cutoff > 0:
        raise DiagramError(f"cutoff must be <= 0, got {cutoff}")
    needed = required_stage(p, cutoff)
    ceiling = min(max_stage or settings.KH_STABLE_MAX_STAGE, settings.KH_MAX_CROSSINGS // (p - 1))
    stage = needed
    if needed > ceiling:
        if max_stage is None:
            raise ResourceLimitError(
                f"p={p}, cutoff={cutoff} needs stage {needed} ({needed * (p - 1)} crossings); "
                f"the ceiling is stage {ceiling}"
            )
        stage = ceiling
    if stage < 2:
        raise ResourceLimitError(f"no two stages fit under the ceiling for p={p}")

    system = DirectedSystem(p)
    current = system.table(stage)
    table = StableTable(p, cutoff, stage, complete=stage == needed)
    for (i, delta), n in current.delta_entries().items():
        if i < cutoff:
            continue
        deg = Bidegree.from_delta(i, delta)
        if stosic_range(p, stage, i):
            table.entries[(i, delta)] = n
            table.evidence[(i, delta)] = STOSIC
        elif system.is_iso_at(stage - 1, deg):
            table.entries[(i, delta)] = n
            table.evidence[(i, delta)] = INCLUSION
        else:
            table.candidates[(i, delta)] = n
            table.complete = False
    log.info(f"Stable table p={p}, i >= {cutoff}: {len(table.entries)} certified, "
             f"{len(table.candidates)} candidates (stage {stage})")
    return table

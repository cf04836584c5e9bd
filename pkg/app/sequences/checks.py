"""
Homological-algebra consistency checks on computed triples.

homalg: when K̃h(D) already splits as the sum of the two shifted
homologies, the connecting map has to vanish.
triplethin: for thin D0, D1 and D the width of the combined grid decides
whether the connecting map is zero, injective or surjective.
"""
from __future__ import annotations

from dataclasses import dataclass

from app.homology.tables import BigradedTable, width
from app.sequences.grid import TotalSequenceGrid


@dataclass(frozen=True)
class CheckVerdict:
    name: str
    applies: bool
    holds: bool
    detail: str = ""


def homalg_check(grid: TotalSequenceGrid, table: BigradedTable) -> CheckVerdict:
    degrees = set(table.entries) | set(grid.zero.entries) | set(grid.one.entries)
    splits = all(
        table.dim(d.i, d.j) == grid.zero.dim(d.i, d.j) + grid.one.dim(d.i, d.j) for d in degrees
    )
    if not splits:
        return CheckVerdict("homalg", False, True, "homology does not split")
    return CheckVerdict("homalg", True, grid.is_zero, "split homology, connecting map must vanish")


def triplethin_check(grid: TotalSequenceGrid, table: BigradedTable) -> CheckVerdict:
    parts = [t for t in (grid.zero, grid.one) if not t.is_empty]
    if not parts or table.is_empty or any(width(t) != 1 for t in parts + [table]):
        return CheckVerdict("triplethin", False, True, "not a triple of thin diagrams")
    merged = dict(grid.zero.entries)
    for deg, n in grid.one.entries.items():
        merged[deg] = merged.get(deg, 0) + n
    w = width(BigradedTable(merged))
    dim0, dim1 = grid.zero.total_dim, grid.one.total_dim
    total_rank = sum(a.rank for a in grid.arrows)
    if w == 1:
        return CheckVerdict("triplethin", True, total_rank == 0, "width 1: zero map")
    if w == 2 and dim1 >= dim0:
        return CheckVerdict("triplethin", True, total_rank == dim0, "width 2: injective")
    if w == 2:
        return CheckVerdict("triplethin", True, total_rank == dim1, "width 2: surjective")
    return CheckVerdict("triplethin", False, True, f"combined width {w}")

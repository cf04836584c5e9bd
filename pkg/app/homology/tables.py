"""
Bigraded homology tables, δ-regrouping, width and renderers.

The grid layout puts homological degree i on columns (ascending) and
δ = j - 2i on rows (descending), the way the tables are usually drawn.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from app.complexes.grading import Bidegree, Shift
from app.exceptions import EmptyTableError


@dataclass(frozen=True)
class BigradedTable:
    entries: dict[Bidegree, int]
    reduced: bool = True
    shift: Shift = field(default_factory=Shift)
    diagram_hash: str = ""

    def __post_init__(self):
        # zero entries are dropped so that equal tables compare equal
        object.__setattr__(self, "entries", {k: v for k, v in sorted(self.entries.items()) if v})

    def dim(self, i: int, j: int) -> int:
        return self.entries.get(Bidegree(i, j), 0)

    @property
    def total_dim(self) -> int:
        return sum(self.entries.values())

    @property
    def is_empty(self) -> bool:
        return not self.entries

    def support(self) -> list[Bidegree]:
        return list(self.entries)

    def delta_entries(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for deg, n in self.entries.items():
            key = (deg.i, deg.delta)
            out[key] = out.get(key, 0) + n
        return out

    def shifted(self, s: Shift) -> BigradedTable:
        return BigradedTable(
            {s.apply(deg): n for deg, n in self.entries.items()},
            self.reduced, self.shift + s, self.diagram_hash,
        )

    def to_rows(self) -> list[dict]:
        return [{"i": d.i, "j": d.j, "delta": d.delta, "dim": n} for d, n in self.entries.items()]

    def __str__(self) -> str:
        return render_ascii(self)


@dataclass(frozen=True)
class DeltaTable:
    entries: dict[tuple[int, int], int]
    width: int

    @property
    def thin(self) -> bool:
        return self.width == 1

    @property
    def deltas(self) -> list[int]:
        return sorted({delta for _, delta in self.entries})


def delta_table(t: BigradedTable) -> DeltaTable:
    if t.is_empty:
        raise EmptyTableError("δ-table of an empty homology table")
    entries = t.delta_entries()
    deltas = [delta for _, delta in entries]
    return DeltaTable(entries, (max(deltas) - min(deltas)) // 2 + 1)


def width(t: BigradedTable) -> int:
    return delta_table(t).width


def splitting_holds(unreduced: BigradedTable, reduced: BigradedTable) -> bool:
    """dim Kh^{i,j} == dim K̃h^{i,j-1} + dim K̃h^{i,j+1} everywhere."""
    degrees = set(unreduced.entries)
    for deg in reduced.entries:
        degrees.add(Bidegree(deg.i, deg.j + 1))
        degrees.add(Bidegree(deg.i, deg.j - 1))
    return all(
        unreduced.dim(d.i, d.j) == reduced.dim(d.i, d.j - 1) + reduced.dim(d.i, d.j + 1)
        for d in degrees
    )


def tensor_table(a: BigradedTable, b: BigradedTable) -> BigradedTable:
    """Dimensions of the tensor product: degrees add and dimensions multiply."""
    out: dict[Bidegree, int] = {}
    for da, na in a.entries.items():
        for db, nb in b.entries.items():
            deg = da + db
            out[deg] = out.get(deg, 0) + na * nb
    return BigradedTable(out, a.reduced and b.reduced)


# ── renderers ─────────────────────────────────────────────────────────────────

def render_grid(cells: dict[tuple[int, int], str]) -> str:
    """Columns i ascending, rows δ descending; cells keyed by (i, δ)."""
    if not cells:
        return "(empty)"
    i_values = range(min(i for i, _ in cells), max(i for i, _ in cells) + 1)
    deltas = sorted({delta for _, delta in cells}, reverse=True)
    width_ = max(3, max(len(s) for s in cells.values()) + 1, max(len(str(i)) for i in i_values) + 1)
    header = "δ\\i".rjust(5) + "".join(str(i).rjust(width_) for i in i_values)
    lines = [header]
    for delta in deltas:
        row = str(delta).rjust(5)
        row += "".join(cells.get((i, delta), ".").rjust(width_) for i in i_values)
        lines.append(row)
    return "\n".join(lines)


def render_ascii(t: BigradedTable) -> str:
    return render_grid({k: str(n) for k, n in t.delta_entries().items()})


def render_json(t: BigradedTable) -> str:
    return json.dumps(t.to_rows(), indent=2)


def rows_to_csv(rows: list[dict], fieldnames: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def render_csv(t: BigradedTable) -> str:
    return rows_to_csv(t.to_rows(), ["i", "j", "delta", "dim"])

"""
One handler per CLI subcommand. A handler takes the parsed arguments and
returns a CommandResult: the JSON document, its ASCII rendering, flat rows
for CSV, and whether the command's own checks passed.
"""
import argparse
import logging
from dataclasses import asdict, dataclass, field

from pydantic import BaseModel

from app.algebra.products import fusion_product, torus_class, verify_commutativity
from app.api.relations import run_relation
from app.api.schemas import (
    CheckDocument,
    ClassRef,
    GridArrow,
    GridEntry,
    HomologyDocument,
    JonesDocument,
    ProductDocument,
    StableCandidate,
    StableDocument,
    StableEntry,
    TableRow,
    TripleDocument,
)
from app.complexes.grading import normalization
from app.diagrams.braids import FAMILY_CROSSING, braid_closure, family_diagram, parse_braid, torus_diagram, usual_crossing
from app.diagrams.diagram import LinkDiagram
from app.exceptions import DiagramError
from app.homology.engine import homology_table, reduced_homology, unreduced_homology
from app.homology.jones import graded_euler_characteristic, kauffman_jones, same_polynomial
from app.homology.tables import BigradedTable, render_ascii, width
from app.sequences.checks import homalg_check, triplethin_check
from app.sequences.grid import exactness_holds, total_sequence_grid
from app.sequences.triple import exact_triple
from app.stable.table import algebra_dimensions, stable_table

log = logging.getLogger("khtorus.cli")

TABLE_FIELDS = ["i", "j", "delta", "dim"]


@dataclass
class CommandResult:
    document: BaseModel
    ascii: str
    rows: list[dict] = field(default_factory=list)
    fields: list[str] = field(default_factory=list)
    ok: bool = True


# ── input parsing ─────────────────────────────────────────────────────────────

def _pair(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.replace(":", ",").split(","))
    except ValueError:
        raise DiagramError(f"cannot parse {what} {text!r}") from None


def diagram_from_args(args: argparse.Namespace) -> tuple[LinkDiagram, int | None]:
    """The input diagram and its circled crossing, when the input has one."""
    if args.braid is not None:
        return braid_closure(parse_braid(args.braid, args.strands)), None
    if args.family is not None:
        name, _, q = args.family.partition(":")
        if name not in FAMILY_CROSSING:
            raise DiagramError(f"unknown family {name!r}; expected one of {sorted(FAMILY_CROSSING)}")
        return family_diagram(name, _pair(q or "0", "twist count")[0]), FAMILY_CROSSING[name]
    parts = _pair(args.torus, "torus pair")
    if len(parts) != 2:
        raise DiagramError(f"torus input must be p,q; got {args.torus!r}")
    p, q = parts
    return torus_diagram(p, q), usual_crossing(p, q) if p >= 2 and q >= 1 else None


def _class_ref(text: str) -> tuple[int, int, int]:
    parts = _pair(text, "class reference")
    if len(parts) != 3:
        raise DiagramError(f"class reference must be q,i,delta; got {text!r}")
    return parts


# ── homology and torus ────────────────────────────────────────────────────────

def _table_result(d: LinkDiagram, table: BigradedTable, euler: str | None) -> CommandResult:
    doc = HomologyDocument(
        diagram=d.fingerprint,
        crossings=d.n_crossings,
        n_plus=d.n_plus,
        n_minus=d.n_minus,
        reduced=table.reduced,
        total_dim=table.total_dim,
        width=None if table.is_empty else width(table),
        rows=[TableRow(**row) for row in table.to_rows()],
        euler=euler,
    )
    text = render_ascii(table)
    if euler is not None:
        text += f"\nEuler characteristic: {euler}"
    return CommandResult(doc, text, table.to_rows(), TABLE_FIELDS)


def _quantum_window(table: BigradedTable, window) -> BigradedTable:
    if not window:
        return table
    lo, hi = window
    kept = {deg: n for deg, n in table.entries.items() if lo <= deg.j <= hi}
    return BigradedTable(kept, table.reduced, table.shift, table.diagram_hash)


def run_homology(args: argparse.Namespace) -> CommandResult:
    d, _ = diagram_from_args(args)
    table = unreduced_homology(d) if args.unreduced else reduced_homology(d)
    euler = str(graded_euler_characteristic(table)) if args.euler else None
    return _table_result(d, _quantum_window(table, args.quantum_range), euler)


def run_torus(args: argparse.Namespace) -> CommandResult:
    d = torus_diagram(args.p, args.q)
    table = unreduced_homology(d) if args.unreduced else reduced_homology(d)
    if args.normalized:
        table = table.shifted(normalization(args.p, args.q))
    return _table_result(d, _quantum_window(table, args.quantum_range), None)


def run_jones(args: argparse.Namespace) -> CommandResult:
    d, _ = diagram_from_args(args)
    jones = kauffman_jones(d)
    euler = graded_euler_characteristic(reduced_homology(d))
    agree = same_polynomial(jones, euler)
    doc = JonesDocument(diagram=d.fingerprint, crossings=d.n_crossings,
                        jones=str(jones), euler=str(euler), agree=agree)
    text = f"Jones (state sum):     {jones}\nEuler characteristic:  {euler}\nagree: {agree}"
    return CommandResult(doc, text, [doc.model_dump()], list(JonesDocument.model_fields), ok=agree)


# ── exact triples ─────────────────────────────────────────────────────────────

def _triple_result(args: argparse.Namespace, grid_only: bool) -> CommandResult:
    d, circled = diagram_from_args(args)
    crossing = args.crossing if args.crossing is not None else circled
    if crossing is None:
        raise DiagramError("--crossing is required for braid input")
    t = exact_triple(d, crossing)
    grid = total_sequence_grid(t)
    table = homology_table(t.complex)
    exact = exactness_holds(grid, table)
    verdicts = [homalg_check(grid, table), triplethin_check(grid, table)]
    data = grid.to_dict()
    doc = TripleDocument(
        diagram=d.fingerprint,
        crossing=crossing,
        sign=t.sign,
        w_minus=t.w_minus,
        w_plus=t.w_plus,
        entries=[GridEntry(**e) for e in data["entries"]],
        arrows=[GridArrow(**a) for a in data["arrows"]],
        connecting_rank=sum(a.rank for a in grid.arrows),
        exact=exact,
        checks=[CheckDocument(**asdict(v)) for v in verdicts],
    )
    if grid_only:
        text = grid.render()
    else:
        lines = [f"Triple at crossing {crossing} (sign {t.sign:+d}): w- = {t.w_minus}, w+ = {t.w_plus}",
                 f"D0: {t.d0}", f"D1: {t.d1}", "", grid.render(), "",
                 f"exact: {exact}"]
        lines += [f"{v.name}: {'n/a' if not v.applies else ('holds' if v.holds else 'FAILS')} ({v.detail})"
                  for v in verdicts]
        text = "\n".join(lines)
    ok = exact and all(v.holds for v in verdicts)
    return CommandResult(doc, text, data["entries"], ["i", "delta", "dim0", "dim1"], ok=ok)


def run_triple(args: argparse.Namespace) -> CommandResult:
    return _triple_result(args, grid_only=False)


def run_grid(args: argparse.Namespace) -> CommandResult:
    return _triple_result(args, grid_only=True)


# ── stable range and products ─────────────────────────────────────────────────

def run_stable(args: argparse.Namespace) -> CommandResult:
    table = stable_table(args.p, args.cutoff, args.max_stage)
    matches = None
    if args.p in (2, 3, 4) and table.complete:
        matches = table.matches(algebra_dimensions(args.p, args.cutoff))
    data = table.to_dict()
    doc = StableDocument(
        p=table.p,
        cutoff=table.cutoff,
        stage=table.stage,
        complete=table.complete,
        entries=[StableEntry(**e) for e in data["entries"]],
        candidates=[StableCandidate(**c) for c in data["candidates"]],
        matches_algebra=matches,
    )
    text = (f"Stable table p={table.p}, i >= {table.cutoff} (stage {table.stage}, "
            f"complete={table.complete}, matches algebra={matches})\n{table.render()}")
    return CommandResult(doc, text, data["entries"], ["i", "delta", "dim", "evidence"], ok=matches is not False)


def run_product(args: argparse.Namespace) -> CommandResult:
    a = torus_class(args.p, *_class_ref(args.left))
    b = torus_class(args.p, *_class_ref(args.right))
    c = fusion_product(a, b)
    commutes = verify_commutativity(a, b)
    doc = ProductDocument(
        p=args.p,
        left=ClassRef(q=a.q, i=a.degree.i, delta=a.delta),
        right=ClassRef(q=b.q, i=b.degree.i, delta=b.delta),
        result=ClassRef(q=c.q, i=c.degree.i, delta=c.delta),
        zero=c.is_zero,
        commutes=commutes,
    )
    text = f"{a} · {b} = {'0' if c.is_zero else str(c)}\ncommutes: {commutes}"
    row = {"p": args.p, "q": c.q, "i": c.degree.i, "delta": c.delta, "zero": c.is_zero, "commutes": commutes}
    return CommandResult(doc, text, [row], list(row), ok=commutes)


def run_verify(args: argparse.Namespace) -> CommandResult:
    verdict = run_relation(args.relation)
    text = f"{verdict.relation}: {'holds' if verdict.holds else 'FAILS'} ({verdict.detail})"
    rows = [r.model_dump() for r in verdict.certificate]
    if rows:
        text += "\n" + "\n".join(f"  (i={r['i']}, δ={r['delta']}): rank {r['rank']} / dim {r['dim']}" for r in rows)
    else:
        rows = [{"relation": verdict.relation, "holds": verdict.holds, "detail": verdict.detail}]
    return CommandResult(verdict, text, rows, list(rows[0]), ok=verdict.holds)


HANDLERS = {
    "homology": run_homology,
    "torus": run_torus,
    "triple": run_triple,
    "grid": run_grid,
    "stable": run_stable,
    "product": run_product,
    "verify": run_verify,
    "jones": run_jones,
}

"""
Regression runner for the braid corpus in evaluation/corpus.json.

Methodology:
  - Every diagram: reduced homology, the state-sum Jones polynomial and the
    graded Euler characteristic of the table must agree.
  - Anchors: where a case lists expected total dimension or width, the table
    must match them exactly.
  - Connected sums: the reduced table of D1 # D2 must equal the tensor product
    of the two reduced tables.
  - Isotopic pairs: two different diagrams of the same link give equal tables.
  - A case passes only when every check that applies to it holds.

Usage:
    python evaluation/run_corpus.py [path/to/corpus.json]

Output:
    evaluation/results/run_<timestamp>.md          — markdown summary table
"""
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from app.diagrams.braids import braid_closure, family_diagram, parse_braid  # noqa: E402
from app.diagrams.diagram import connected_sum  # noqa: E402
from app.exceptions import KhovanovError  # noqa: E402
from app.homology.engine import reduced_homology  # noqa: E402
from app.homology.jones import graded_euler_characteristic, kauffman_jones, same_polynomial  # noqa: E402
from app.homology.tables import tensor_table, width  # noqa: E402


BASE_DIR = Path(__file__).resolve().parent


# ── helpers ───────────────────────────────────────────────────────────────────

def load_diagram(case: dict):
    if "family" in case:
        name, _, q = case["family"].partition(":")
        return family_diagram(name, int(q or 0))
    return braid_closure(parse_braid(case["braid"]))


def score_case(case: dict) -> dict:
    t0 = time.perf_counter()
    d = load_diagram(case)
    table = reduced_homology(d)
    jones = kauffman_jones(d)
    euler = graded_euler_characteristic(table)

    expected = case.get("expected", {})
    misses = []
    if "total_dim" in expected and table.total_dim != expected["total_dim"]:
        misses.append(f"total_dim {table.total_dim} != {expected['total_dim']}")
    w = None if table.is_empty else width(table)
    if "width" in expected and w != expected["width"]:
        misses.append(f"width {w} != {expected['width']}")
    agree = same_polynomial(jones, euler)
    if not agree:
        misses.append("Jones != Euler characteristic")

    return {
        "id": case["id"],
        "crossings": d.n_crossings,
        "total_dim": table.total_dim,
        "width": w,
        "jones_agrees": agree,
        "misses": misses,
        "total_ms": int((time.perf_counter() - t0) * 1000),
        "passed": not misses,
        "_diagram": d,
        "_table": table,
    }


def score_pair(left: dict, right: dict) -> dict:
    t0 = time.perf_counter()
    summed = reduced_homology(connected_sum(left["_diagram"], right["_diagram"]))
    expected = tensor_table(left["_table"], right["_table"])
    return {
        "id": f"{left['id']} # {right['id']}",
        "total_dim": summed.total_dim,
        "expected_dim": expected.total_dim,
        "total_ms": int((time.perf_counter() - t0) * 1000),
        "passed": summed.entries == expected.entries,
    }


# ── main ──────────────────────────────────────────────────────────────────────

def evaluate(path: Path | None = None):
    path = path or BASE_DIR / "corpus.json"
    with open(path, "r", encoding="utf-8") as f:
        corpus = json.load(f)

    results_dir = BASE_DIR / "results"
    results_dir.mkdir(exist_ok=True)
    timestamp = time.strftime("%Y-%m-%d_%H-%M-%S")
    out_md    = results_dir / f"run_{timestamp}.md"

    cases = corpus["diagrams"]
    print(f"\n{'='*70}")
    print(f"  Corpus run — {len(cases)} diagrams, {len(corpus.get('connected_sums', []))} connected sums")
    print(f"{'='*70}\n")

    scores: dict[str, dict] = {}
    for case in cases:
        print(f"[{case['id']}] {case.get('description', '')[:70]}")
        try:
            s = score_case(case)
        except KhovanovError as exc:
            print(f"    [ERROR] {type(exc).__name__}: {exc}")
            s = {"id": case["id"], "crossings": None, "total_dim": None, "width": None,
                 "jones_agrees": False, "misses": [str(exc)], "total_ms": 0, "passed": False}
        scores[case["id"]] = s
        icon = "✅" if s["passed"] else "❌"
        print(f"  {icon}  dim={s['total_dim']}  width={s['width']}  Jones={s['jones_agrees']}  [{s['total_ms']}ms]")
        for miss in s["misses"]:
            print(f"     ❌ {miss}")

    pair_scores = []
    for a, b in corpus.get("connected_sums", []):
        if "_table" not in scores[a] or "_table" not in scores[b]:
            pair_scores.append({"id": f"{a} # {b}", "total_dim": None, "expected_dim": None,
                                "total_ms": 0, "passed": False})
            continue
        s = score_pair(scores[a], scores[b])
        pair_scores.append(s)
        icon = "✅" if s["passed"] else "❌"
        print(f"  {icon}  {s['id']}: dim={s['total_dim']} (tensor {s['expected_dim']})  [{s['total_ms']}ms]")

    iso_scores = []
    for a, b in corpus.get("isotopic", []):
        same = "_table" in scores[a] and "_table" in scores[b] and \
            scores[a]["_table"].entries == scores[b]["_table"].entries
        iso_scores.append({"id": f"{a} ~ {b}", "passed": same})
        print(f"  {'✅' if same else '❌'}  {a} ~ {b}")

    # — Markdown table ─────────────────────────────────────────────────────────
    every = list(scores.values()) + pair_scores + iso_scores
    passed = sum(s["passed"] for s in every)
    lines = [
        f"# Corpus Results — {timestamp}", "",
        f"**Total checks:** {len(every)}  |  **Passed:** {passed}  |  **Failed:** {len(every) - passed}", "",
        "## Diagrams", "",
        "| ID | Crossings | dim K̃h | Width | Jones = χ | ms | Pass |",
        "|----|-----------|--------|-------|-----------|----|------|",
    ]
    for s in scores.values():
        ok = "✅" if s["passed"] else "❌"
        note = f" ⚠`{'`,`'.join(s['misses'][:2])}`" if s["misses"] else ""
        lines.append(f"| {s['id']}{note} | {s['crossings']} | {s['total_dim']} | {s['width']} | "
                     f"{s['jones_agrees']} | {s['total_ms']} | {ok} |")

    lines += [
        "", "## Connected sums", "",
        "| Pair | dim K̃h | dim tensor | ms | Pass |",
        "|------|--------|------------|----|------|",
    ]
    for s in pair_scores:
        lines.append(f"| {s['id']} | {s['total_dim']} | {s['expected_dim']} | {s['total_ms']} | "
                     f"{'✅' if s['passed'] else '❌'} |")

    lines += ["", "## Isotopic pairs", ""]
    lines += [f"- {s['id']}: {'✅' if s['passed'] else '❌'}" for s in iso_scores] or ["- None listed."]

    with open(out_md, "w", encoding="utf-8") as f:
        f.write("\n".join(lines))

    print(f"\n[Results]    → {out_md}")
    print(f"\nSummary: {passed}/{len(every)} checks passed\n")
    return passed == len(every)


if __name__ == "__main__":
    arg = Path(sys.argv[1]) if len(sys.argv) > 1 else None
    sys.exit(0 if evaluate(arg) else 1)

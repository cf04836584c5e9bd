import argparse
import logging
import sys

from app.config import settings
from app.exceptions import (
    CertificationError,
    DiagramError,
    EmptyTableError,
    KhovanovError,
    ResourceLimitError,
    VerificationFailure,
)
from app import workers
from app.homology.tables import rows_to_csv

log = logging.getLogger("khtorus")

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def setup_logging(level: str | None = None):
    # ─── Logging setup ────────────────────────────────────────────────────────
    # Diagnostics go to stderr; stdout only carries the emitted document.
    logging.basicConfig(
        level=(level or settings.KH_LOG_LEVEL).upper(),
        format="%(asctime)s | %(name)-25s | %(levelname)s | %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
    )


def _diagram_input(parser: argparse.ArgumentParser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--braid", help='braid word, e.g. "-1,-1,-1"')
    source.add_argument("--torus", metavar="P,Q", help="standard diagram D_{p,q}")
    source.add_argument("--family", metavar="NAME:Q", help='intermediate family "332" or "342" with q twists')
    parser.add_argument("--strands", type=int, help="strand count for --braid (default max|k|+1)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["ascii", "json", "csv"], default="ascii")
    common.add_argument("--log-level", help="overrides KH_LOG_LEVEL")

    parser = argparse.ArgumentParser(prog="khtorus", description="Reduced Khovanov homology of torus links over GF(2)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", parents=[common], help="homology table of a diagram")
    _diagram_input(p)
    p.add_argument("--unreduced", action="store_true")
    p.add_argument("--euler", action="store_true", help="also print the graded Euler characteristic")
    p.add_argument("--quantum-range", nargs=2, type=int, metavar=("LO", "HI"))

    p = sub.add_parser("torus", parents=[common], help="homology table of T_{p,q}")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-q", type=int, required=True)
    p.add_argument("--unreduced", action="store_true")
    p.add_argument("--normalized", action="store_true", help="apply the shift [0,(p-1)(q-1)]")
    p.add_argument("--quantum-range", nargs=2, type=int, metavar=("LO", "HI"))

    for name, text in (("triple", "exact triple at a crossing"), ("grid", "total exact sequence grid")):
        p = sub.add_parser(name, parents=[common], help=text)
        _diagram_input(p)
        p.add_argument("--crossing", type=int, help="crossing id (defaults to the circled crossing)")

    p = sub.add_parser("stable", parents=[common], help="stable table K̃h(T_{p,∞}) on i >= cutoff")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--cutoff", type=int, required=True)
    p.add_argument("--max-stage", type=int, help="accept a partial table computed up to this stage")

    p = sub.add_parser("product", parents=[common], help="fusion product of two torus classes")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--left", required=True, metavar="Q,I,DELTA", help="normalized class of T_{p,Q}")
    p.add_argument("--right", required=True, metavar="Q,I,DELTA")

    from app.api.relations import RELATIONS
    p = sub.add_parser("verify", parents=[common], help="check a named relation")
    p.add_argument("--relation", required=True, choices=sorted(RELATIONS))

    p = sub.add_parser("jones", parents=[common], help="Jones polynomial vs graded Euler characteristic")
    _diagram_input(p)
    return parser


def emit(result, fmt: str) -> str:
    if fmt == "json":
        return result.document.model_dump_json(indent=2)
    if fmt == "csv":
        return rows_to_csv(result.rows, result.fields).rstrip("\n")
    return result.ascii


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)

    from app.api.commands import HANDLERS
    try:
        result = HANDLERS[args.command](args)
        print(emit(result, args.format))
        if not result.ok:
            raise VerificationFailure(f"{args.command}: checks failed")
    except (DiagramError, EmptyTableError) as e:
        log.error(str(e))
        return EXIT_USAGE
    except (ResourceLimitError, CertificationError) as e:
        log.error(str(e))
        return EXIT_RESOURCE
    except KhovanovError as e:
        log.error(f"{type(e).__name__}: {e}")
        return EXIT_VERIFICATION
    finally:
        workers.shutdown()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import structlog

from acr_spaces.catalog import FunctionSpec
from acr_spaces.classifier import Status, VennPlacement, classify
from acr_spaces.errors import LatticeViolationError
from acr_spaces.settings import DEFAULT_SETTINGS, AnalysisSettings
from acr_spaces.verify import verify_ledger
from acr_spaces.witnesses import (
    ac_failure_intervals,
    application_set_A,
    theorem1_adversary,
    theorem2_construction,
)

from .acceptance import run_acceptance
from .lower import function_from_text, set_from_text
from .parser import ParseError, parse_rational, split_top_level
from .plot import emit_plot, write_csv, write_membership_svg, write_svg
from .report import build_report, dumps, write_report
from .syntax import SourceText

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_UNKNOWN = 3
EXIT_LATTICE = 4

log = structlog.get_logger("acr")


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(format="%(message)s", level=level, stream=sys.stderr)
    structlog.configure(
        wrapper_class=structlog.make_filtering_bound_logger(level),
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.dev.ConsoleRenderer(),
        ],
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
    )


def _read_sources(items: list[str]) -> list[SourceText]:
    """Inline expressions, or ``@path`` for a file with one expression per line."""
    sources = []
    for item in items:
        if not item.startswith("@"):
            sources.append(SourceText(item))
            continue
        path = Path(item[1:])
        lines = path.read_text(encoding="utf-8").splitlines()
        sources.extend(
            SourceText(line, origin=str(path))
            for line in lines
            if line.strip() and not line.lstrip().startswith("#")
        )
    if not sources:
        raise ParseError(1, 1, ("expression",), "end of input")
    return sources


def _classify_all(
    functions: list[FunctionSpec], settings: AnalysisSettings
) -> list[VennPlacement]:
    log.info("classify.start", count=len(functions), workers=settings.max_workers)
    with ThreadPoolExecutor(max_workers=settings.max_workers) as executor:
        placements = list(executor.map(lambda f: classify(f, settings=settings), functions))
    log.info("classify.done", count=len(placements))
    return placements


def _has_unknown(placements: list[VennPlacement]) -> bool:
    return any(v.status is Status.UNKNOWN for p in placements for v in p.verdicts)


def _emit(report: dict, args: argparse.Namespace) -> None:
    sys.stdout.write(dumps(report))
    if args.json:
        write_report(report, args.json)


def cmd_classify(args: argparse.Namespace, settings: AnalysisSettings) -> int:
    functions = [function_from_text(s) for s in _read_sources(args.exprs)]
    placements = _classify_all(functions, settings)
    _emit(build_report("classify", settings, placements), args)
    if args.strict and _has_unknown(placements):
        log.warning("classify.unknown", strict=True)
        return EXIT_UNKNOWN
    return EXIT_OK


def cmd_venn(args: argparse.Namespace, settings: AnalysisSettings) -> int:
    names = split_top_level(args.funcs)
    functions = [function_from_text(name) for name in names]
    placements = _classify_all(functions, settings)
    if args.svg:
        write_membership_svg(placements, args.svg)
    _emit(build_report("venn", settings, placements, funcs=names), args)
    if args.strict and _has_unknown(placements):
        return EXIT_UNKNOWN
    return EXIT_OK


def _witness_ledger(args: argparse.Namespace, settings: AnalysisSettings) -> tuple[object, dict]:
    kind = args.kind
    if kind == "ac-failure":
        delta = parse_rational(args.delta)
        return ac_failure_intervals(delta, args.count, settings=settings), {
            "delta": delta,
            "count": args.count,
        }
    if kind == "set-A":
        return application_set_A(settings=settings), {}
    if kind == "thm1":
        f = function_from_text(args.f or "sqrt_periodic")
        depth = args.depth or 20
        eps = parse_rational(args.eps)
        ledger = theorem1_adversary(f, depth, eps, settings=settings)
        return ledger, {"f": f, "depth": depth, "eps": eps}
    f = function_from_text(args.f or "f1")
    depth = args.depth or 5
    return theorem2_construction(f, depth, settings=settings), {"f": f, "depth": depth}


def cmd_witness(args: argparse.Namespace, settings: AnalysisSettings) -> int:
    ledger, parameters = _witness_ledger(args, settings)
    verification = verify_ledger(ledger, settings=settings)
    results = {"ledger": ledger, "verification": verification}
    _emit(build_report(f"witness {args.kind}", settings, results, **parameters), args)
    if not verification.passed:
        log.error("witness.verification_failed", failures=[c.name for c in verification.failures()])
        return EXIT_FAILED
    return EXIT_OK


def cmd_plot(args: argparse.Namespace, settings: AnalysisSettings) -> int:
    f = function_from_text(args.f)
    lo_text, sep, hi_text = args.range.partition(":")
    if not sep:
        raise ParseError(1, len(args.range) + 1, ("':'",), "end of input")
    lo, hi = parse_rational(lo_text), parse_rational(hi_text)
    marks = set_from_text(args.marks) if args.marks else None
    table = emit_plot(f, lo, hi, args.samples, marks, settings=settings)
    write_csv(table, args.out)
    if args.svg:
        write_svg(table, args.svg, title=f.canonical())
    summary = {"function": f, "rows": len(table), "out": str(args.out)}
    _emit(build_report("plot", settings, summary, lo=lo, hi=hi, samples=args.samples), args)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: AnalysisSettings) -> int:
    results = run_acceptance(settings=settings)
    _emit(build_report("verify", settings, results), args)
    failed = [r.name for r in results if not r.passed]
    if failed:
        log.error("verify.failed", criteria=failed)
        return EXIT_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    common.add_argument("--k-max", type=int, help="Cap on the level search M = 2^k")
    common.add_argument("--workers", type=int, help="Threads used for classification")
    common.add_argument("--strict", action="store_true", help="Exit 3 on any Unknown verdict")
    common.add_argument("--json", help="Also write the report to this path")

    ap = argparse.ArgumentParser(prog="acr", description="Certified classification of catalog functions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="Place functions in every space")
    p.add_argument("exprs", nargs="+", help="Expressions, presets, or @file with one per line")
    p.add_argument("--depth", type=int, help="Series/tail materialization depth (default 100)")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("witness", parents=[common], help="Build and re-check a witness ledger")
    p.add_argument("kind", choices=["ac-failure", "thm1", "thm2", "set-A"])
    p.add_argument("--f", help="Function expression or preset")
    p.add_argument("--delta", default="1/4")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--depth", type=int, help="Construction depth (thm1: 20, thm2: 5)")
    p.add_argument("--eps", default="1/2")
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("venn", parents=[common], help="Placements for a list of functions")
    p.add_argument("--funcs", required=True, help="Comma separated presets or expressions")
    p.add_argument("--depth", type=int, help="Series/tail materialization depth (default 100)")
    p.add_argument("--svg", help="Write a membership chart")
    p.set_defaults(handler=cmd_venn)

    p = sub.add_parser("plot", parents=[common], help="Sample a function into CSV")
    p.add_argument("--f", required=True)
    p.add_argument("--range", required=True, help="a:b with rational a < b")
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--marks", help="Set literal drawn as a band at level 0")
    p.add_argument("--out", required=True)
    p.add_argument("--svg")
    p.set_defaults(handler=cmd_plot)

    p = sub.add_parser("verify", parents=[common], help="Run the built-in acceptance suite")
    p.add_argument("--depth", type=int, help="Series/tail materialization depth (default 100)")
    p.set_defaults(handler=cmd_verify)
    return ap


def _settings(args: argparse.Namespace) -> AnalysisSettings:
    depth = None if args.command == "witness" else getattr(args, "depth", None)
    return DEFAULT_SETTINGS.with_overrides(depth=depth, k_max=args.k_max, max_workers=args.workers)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.handler(args, _settings(args))
    except ParseError as e:
        log.error("parse.error", line=e.line, column=e.column, expected=list(e.expected), found=e.found)
        return EXIT_PARSE
    except LatticeViolationError as e:
        log.error("lattice.violation", error=str(e))
        return EXIT_LATTICE
    except (ValueError, OSError) as e:
        log.error("command.failed", command=args.command, error=str(e))
        return EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main())

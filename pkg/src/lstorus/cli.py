"""Command-line interface.

Subcommands: validate, iso, canon, census, localcheck.  Every run prints a
JSON report to stdout (valid JSON on error paths too) and exits 0 on
success, 1 on a negative-but-well-formed outcome (invalid pair, not
equivalent, tolerance failure), 2 on parse/usage/resource errors.  Reports
can also be written to a file, atomically, with --output.  Input files are
never modified.

The census honors the LSTORUS_THREADS environment variable; output is
byte-identical for any thread count.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

from .census import (
    BudgetExceededError,
    CensusError,
    CensusSpec,
    DEFAULT_BUDGET,
    enumerate_census,
)
from .charpair import validate_characteristic
from .classify import (
    CanonicalFormError,
    Verdict,
    canonical_form,
    strong_equivalence,
    weak_equivalence,
)
from .documents import (
    DocumentError,
    SCHEMA_VERSION,
    canonical_json,
    parse_document,
    validity_to_object,
    write_atomic,
)
from .localmodel import LocalModelError, run_local_checks

THREADS_ENV = "LSTORUS_THREADS"


def _emit(report: dict, output: Optional[str]) -> None:
    text = canonical_json(report)
    sys.stdout.write(text)
    if output:
        write_atomic(output, text)


def _error_report(command: str, kind: str, exc: Exception) -> dict:
    error: dict = {"type": kind, "message": str(exc)}
    if isinstance(exc, DocumentError):
        if exc.line is not None:
            error["line"] = exc.line
        if exc.col is not None:
            error["col"] = exc.col
    return {"schema": SCHEMA_VERSION, "command": command, "error": error}


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise CensusError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise CensusError(f"{THREADS_ENV} must be >= 1, got {value}")
    return value


def _verdict_object(verdict: Verdict) -> dict:
    witness = None
    if verdict.witness is not None:
        witness = {
            "phi": dict(sorted(verdict.witness.phi.items())),
            "auto": [list(row) for row in verdict.witness.auto]
            if verdict.witness.auto is not None
            else None,
        }
    return {
        "equivalent": verdict.equivalent,
        "mode": verdict.mode,
        "witness": witness,
        "witness_unique": verdict.witness_unique,
        "reason": verdict.reason,
        "hypotheses": verdict.hypotheses,
        "conclusion": verdict.conclusion,
    }


def cmd_validate(args: argparse.Namespace) -> int:
    command = "validate"
    try:
        doc = parse_document(_read(args.path))
    except DocumentError as exc:
        _emit(_error_report(command, "document", exc), args.output)
        return 2
    except OSError as exc:
        _emit(_error_report(command, "io", exc), args.output)
        return 2
    poset_report = doc.poset.validate()
    label_report = None
    if doc.pair is not None and poset_report.valid:
        label_report = validate_characteristic(doc.pair)
    valid = poset_report.valid and (label_report is None or label_report.valid)
    report = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "valid": valid,
        "lambda_present": doc.pair is not None,
        "poset_violations": validity_to_object(poset_report),
        "label_violations": validity_to_object(label_report)
        if label_report is not None
        else [],
        "faces": len(doc.poset),
        "dim_orbit": doc.poset.dim_orbit,
        "k": doc.k,
    }
    _emit(report, args.output)
    return 0 if valid else 1


def _load_valid_pair(command: str, path: str, output: Optional[str]):
    """Parse and validate a full pair; emits an error report on failure."""
    try:
        doc = parse_document(_read(path))
        if doc.pair is None:
            raise DocumentError(f"{path}: document has no lambda key")
    except (DocumentError, OSError) as exc:
        _emit(_error_report(command, "document", exc), output)
        return None
    poset_report = doc.pair.poset.validate()
    if not poset_report.valid:
        _emit(
            {
                "schema": SCHEMA_VERSION,
                "command": command,
                "error": {
                    "type": "invalid-input",
                    "message": f"{path}: poset is invalid",
                    "violations": validity_to_object(poset_report),
                },
            },
            output,
        )
        return None
    label_report = validate_characteristic(doc.pair)
    if not label_report.valid:
        _emit(
            {
                "schema": SCHEMA_VERSION,
                "command": command,
                "error": {
                    "type": "invalid-input",
                    "message": f"{path}: characteristic function is invalid",
                    "violations": validity_to_object(label_report),
                },
            },
            output,
        )
        return None
    return doc.pair


def cmd_iso(args: argparse.Namespace) -> int:
    command = "iso"
    a = _load_valid_pair(command, args.path_a, args.output)
    if a is None:
        return 2
    b = _load_valid_pair(command, args.path_b, args.output)
    if b is None:
        return 2
    decide = strong_equivalence if args.mode == "strong" else weak_equivalence
    verdict = decide(a, b)
    report = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "inputs": [args.path_a, args.path_b],
        "verdict": _verdict_object(verdict),
    }
    _emit(report, args.output)
    return 0 if verdict.equivalent else 1


def cmd_canon(args: argparse.Namespace) -> int:
    command = "canon"
    pair = _load_valid_pair(command, args.path, args.output)
    if pair is None:
        return 2
    try:
        form = canonical_form(pair, args.mode)
    except CanonicalFormError as exc:
        _emit(_error_report(command, "size", exc), args.output)
        return 2
    report = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "mode": args.mode,
        "canonical_form": form,
    }
    _emit(report, args.output)
    return 0


def cmd_census(args: argparse.Namespace) -> int:
    command = "census"
    try:
        doc = parse_document(_read(args.poset))
    except (DocumentError, OSError) as exc:
        _emit(_error_report(command, "document", exc), args.output)
        return 2
    try:
        threads = _threads()
        spec = CensusSpec(
            poset=doc.poset,
            k=args.k,
            entry_bound=args.bound,
            dedup=args.dedup,
            budget=args.budget,
        )
        result = enumerate_census(spec, threads=threads)
    except BudgetExceededError as exc:
        report = _error_report(command, "budget", exc)
        report["error"]["estimate"] = exc.estimate
        report["error"]["budget"] = exc.budget
        _emit(report, args.output)
        return 2
    except CensusError as exc:
        _emit(_error_report(command, "census", exc), args.output)
        return 2
    report = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "k": args.k,
        "entry_bound": args.bound,
        "dedup": args.dedup,
        "facet_order": list(result.facet_order),
        "total_valid": result.total_valid,
        "class_count": len(result.classes),
        "classes": [
            {
                "labels": {
                    f: list(v)
                    for f, v in zip(result.facet_order, cls.representative)
                },
                "size": cls.size,
            }
            for cls in result.classes
        ],
        "stats": {
            "faces_per_codim": {
                str(c): n for c, n in sorted(result.faces_per_codim.items())
            },
            "euler_count": result.euler_count,
        },
    }
    _emit(report, args.output)
    return 0


def cmd_localcheck(args: argparse.Namespace) -> int:
    command = "localcheck"
    try:
        result = run_local_checks(
            args.n, args.k, args.m, samples=args.samples, seed=args.seed
        )
    except LocalModelError as exc:
        _emit(_error_report(command, "usage", exc), args.output)
        return 2
    report = {"schema": SCHEMA_VERSION, "command": command, **result}
    _emit(report, args.output)
    return 0 if result["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lstorus",
        description=(
            "Validate, compare, enumerate, and numerically check "
            "characteristic pairs of locally standard torus actions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a pair document")
    p.add_argument("path")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("iso", help="decide equivalence of two pairs")
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.add_argument("--mode", choices=["strong", "weak"], default="strong")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("canon", help="canonical form of a pair")
    p.add_argument("path")
    p.add_argument("--mode", choices=["strong", "weak"], default="strong")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("census", help="enumerate labelings over a poset")
    p.add_argument("--poset", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--dedup", choices=["none", "strong", "weak"], default="none")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("localcheck", help="numeric chart-formula checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_localcheck)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

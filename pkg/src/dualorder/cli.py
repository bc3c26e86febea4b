"""Command-line front end.

Exit codes: 0 related / success, 1 not related / suite failures,
2 order or inverse undefined on the input, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Sequence

from . import dual as dual_ops
from . import kernel
from .canonical import ChainParams, GeneratorParams, gen_chain, gen_pair
from .dual import DualMatrix, dual_rank
from .errors import (
    DggiDoesNotExist,
    DmpgiDoesNotExist,
    DualOrderError,
    IndexNotOne,
    InvalidTrials,
    NonInvertibleBlock,
    NotSquare,
    PreconditionUnmet,
    ShapeMismatch,
)
from .matrixio import format_matrix, read_matrix, to_document, write_matrix
from .orders import OrderKind, OrderReport, Witness, check
from .verifier import REGISTRY, run_suites

EXIT_RELATED = 0
EXIT_NOT_RELATED = 1
EXIT_UNDEFINED = 2
EXIT_INPUT = 3

INVERSES = ("mpdgi", "dmpgi", "dggi", "gdgi", "mp", "group")


class InputError(Exception):
    """Bad command-line input; maps to exit 3."""


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def _value_doc(v) -> object:
    if isinstance(v, (kernel.Matrix, DualMatrix)):
        return to_document(v)
    return v


def _value_text(v) -> str:
    if isinstance(v, DualMatrix):
        return f"{_value_text(v.std)} + eps {_value_text(v.dual)}"
    if isinstance(v, kernel.Matrix):
        return json.dumps(to_document(v)["std"])
    return str(v)


def _witness_doc(w: Witness) -> dict:
    return {"equation": w.equation, "lhs": _value_doc(w.lhs), "rhs": _value_doc(w.rhs)}


def report_document(r: OrderReport) -> dict:
    ws = r.witnesses
    return {
        "order": r.kind.value,
        "verdict": r.verdict,
        "witness": _witness_doc(ws[0]) if ws else None,
        "routes": [
            {"name": rt.name, "verdict": rt.verdict, "witnesses": [_witness_doc(w) for w in rt.witnesses]}
            for rt in r.routes
        ],
        "rank_data": r.rank_data,
    }


def _print_report(r: OrderReport) -> None:
    print(f"{r.kind.value}: {'related' if r.verdict else 'NOT related'}")
    for rt in r.routes:
        print(f"  route {rt.name}: {str(rt.verdict).lower()}")
    ws = r.witnesses
    if ws:
        w = ws[0]
        print(f"  violated: {w.equation}")
        print(f"    lhs = {_value_text(w.lhs)}")
        print(f"    rhs = {_value_text(w.rhs)}")
    print("  rank data: " + json.dumps(r.rank_data, sort_keys=True))


def _emit(args, command: str, payload: dict, started: float, text: str | None = None) -> None:
    if args.json:
        doc = {"command": command, "result": payload,
               "meta": {"version": _version(), "elapsed_s": round(time.perf_counter() - started, 6)}}
        print(json.dumps(doc, sort_keys=True, indent=2))
    elif text is not None:
        print(text, end="" if text.endswith("\n") else "\n")


def _emit_error(args, command: str, code: int, kind: str, message: str, started: float, **extra) -> int:
    if args.json:
        _emit(args, command, {"error": kind, "message": message, "exit_code": code, **extra}, started)
    else:
        print(f"{command}: {kind}: {message}", file=sys.stderr)
    return code


# -- commands ------------------------------------------------------------------


def cmd_check(args, started: float) -> int:
    kind = OrderKind.parse(args.order)
    e, f = read_matrix(args.file_e), read_matrix(args.file_f)
    report = check(kind, e, f)
    if args.json:
        _emit(args, "check", report_document(report), started)
    else:
        _print_report(report)
    return EXIT_RELATED if report.verdict else EXIT_NOT_RELATED


def cmd_inverse(args, started: float) -> int:
    x = read_matrix(args.file)
    which = args.which
    if which in ("mp", "group"):
        std = x.std if isinstance(x, DualMatrix) else x
        out = kernel.moore_penrose(std) if which == "mp" else kernel.group_inverse(std)
    else:
        d = x if isinstance(x, DualMatrix) else DualMatrix.real(x)
        out = {"mpdgi": dual_ops.mpdgi, "dmpgi": dual_ops.dmpgi, "dggi": dual_ops.dggi, "gdgi": dual_ops.gdgi}[which](d)
    if args.json:
        _emit(args, "inverse", {"inverse": which, "matrix": to_document(out)}, started)
    else:
        print(format_matrix(out), end="")
    return EXIT_RELATED


def cmd_rank(args, started: float) -> int:
    x = read_matrix(args.file)
    d = x if isinstance(x, DualMatrix) else DualMatrix.real(x)
    rv = dual_rank(d)
    exists, _ = dual_ops.dmpgi_exists(d)
    payload = {**rv.as_dict(), "dmpgi_exists": exists}
    text = (f"rk(E) = {rv.std_rank}\nrk[[E0,E],[E,O]] = {rv.block_rank}\n"
            f"dual rank = {rv.dual_rank}\nDMPGI exists: {str(exists).lower()}")
    _emit(args, "rank", payload, started, text)
    return EXIT_RELATED


def cmd_generate(args, started: float) -> int:
    kind = OrderKind.parse(args.order)
    if args.real and not kind.is_real:
        raise InputError("--real needs one of minus, star, sharp")
    m = args.m if args.m is not None else args.n
    n = args.n
    ranks = [args.re, args.rf] + ([args.rg] if args.chain else [])
    if args.chain and args.rg is None:
        raise InputError("--chain needs --rg")
    if any(r < 0 for r in ranks) or ranks != sorted(ranks) or ranks[-1] > min(m, n) or min(m, n) < 1:
        raise InputError(f"need 0 <= re <= rf{' <= rg' if args.chain else ''} <= min(m, n), got {ranks} with m={m}, n={n}")
    if kind.sharp_family and m != n:
        raise InputError(f"{kind.value} needs square matrices (m = n)")
    if args.similarity and m != n:
        raise InputError("--similarity needs m = n")
    if args.chain:
        mats = gen_chain(kind, ChainParams.random(m, n, *ranks, seed=args.seed, similarity=args.similarity))
        names = "EFG"
    else:
        gp = gen_pair(kind, GeneratorParams.random(m, n, *ranks, seed=args.seed, similarity=args.similarity))
        mats = (gp.e, gp.f)
        names = "EF"
    # Self-check before writing; gen_pair / gen_chain already raise on failure.
    for a, b in zip(mats, mats[1:]):
        if not check(kind, a, b).verdict:  # pragma: no cover
            raise AssertionError("generated pair failed its self-check")
    paths = []
    for name, mat in zip(names, mats):
        path = Path(f"{args.out}_{name}.json")
        path.parent.mkdir(parents=True, exist_ok=True)
        write_matrix(path, mat)
        paths.append(str(path))
    _emit(args, "generate", {"order": kind.value, "files": paths, "seed": args.seed,
                             "m": m, "n": n, "ranks": ranks}, started,
          "\n".join(f"wrote {p}" for p in paths))
    return EXIT_RELATED


def cmd_verify(args, started: float) -> int:
    names = args.suites or list(REGISTRY)
    unknown = [s for s in names if s not in REGISTRY]
    if unknown:
        raise InputError(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(REGISTRY)}")
    results = run_suites(names, args.trials, args.seed, jobs=args.jobs)
    ok = all(r.passed for r in results)
    payload = {"seed": args.seed, "trials": args.trials, "passed": ok, "suites": [r.as_dict() for r in results]}
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.trials} trials, "
                     f"{r.skipped} skipped, {len(r.failures)} failures")
        for fl in r.failures:
            lines.append(f"  seed={fl.seed} digest={fl.digest} claim={fl.claim!r}: {fl.witness}")
    _emit(args, "verify", payload, started, "\n".join(lines))
    return EXIT_RELATED if ok else EXIT_NOT_RELATED


# -- parser --------------------------------------------------------------------


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--json", action="store_true", default=d(False), help="structured output")
    p.add_argument("--seed", type=int, default=d(0), help="random seed (generate, verify)")
    p.add_argument("--jobs", type=int, default=d(1), help="worker processes for verify")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dualorder", description="Exact partial orders on dual matrices.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    kinds = ", ".join(k.value for k in OrderKind)

    p = sub.add_parser("check", help="decide an order on a pair of matrix files")
    p.add_argument("order", help=f"one of: {kinds}")
    p.add_argument("file_e")
    p.add_argument("file_f")
    _global_flags(p, suppress=True)

    p = sub.add_parser("inverse", help="compute a generalized inverse")
    p.add_argument("which", choices=INVERSES)
    p.add_argument("file")
    _global_flags(p, suppress=True)

    p = sub.add_parser("rank", help="print rank data and DMPGI existence")
    p.add_argument("file")
    _global_flags(p, suppress=True)

    p = sub.add_parser("generate", help="write an order-related pair (or chain) from a canonical form")
    p.add_argument("order", help=f"one of: {kinds}")
    p.add_argument("--n", type=int, required=True, help="columns (and rows unless --m)")
    p.add_argument("--m", type=int, default=None, help="rows")
    p.add_argument("--re", type=int, required=True)
    p.add_argument("--rf", type=int, required=True)
    p.add_argument("--rg", type=int, default=None, help="third rank for --chain")
    p.add_argument("--chain", action="store_true")
    p.add_argument("--real", action="store_true", help="assert a real order (minus, star, sharp)")
    p.add_argument("--similarity", action="store_true", help="index-one (P-conjugated) minus / dual-minus form")
    p.add_argument("--out", required=True, help="output path prefix; files are <out>_E.json, <out>_F.json[, <out>_G.json]")
    _global_flags(p, suppress=True)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suites", nargs="*", help=f"subset of: {', '.join(REGISTRY)} (default: all)")
    p.add_argument("--trials", type=int, default=100)
    _global_flags(p, suppress=True)
    return parser


_COMMANDS = {"check": cmd_check, "inverse": cmd_inverse, "rank": cmd_rank,
             "generate": cmd_generate, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else 0
    started = time.perf_counter()
    cmd = args.command
    if args.jobs < 1:
        return _emit_error(args, cmd, EXIT_INPUT, "InputError", "--jobs must be >= 1", started)
    try:
        return _COMMANDS[cmd](args, started)
    except (PreconditionUnmet, IndexNotOne, NotSquare) as exc:
        return _emit_error(args, cmd, EXIT_UNDEFINED, type(exc).__name__, str(exc), started)
    except (DmpgiDoesNotExist, DggiDoesNotExist) as exc:
        ev = exc.evidence
        evidence = ev.as_dict() if hasattr(ev, "as_dict") else (_value_doc(ev) if ev is not None else None)
        return _emit_error(args, cmd, EXIT_UNDEFINED, type(exc).__name__, str(exc), started, evidence=evidence)
    except (InputError, ShapeMismatch, InvalidTrials, NonInvertibleBlock, ValueError) as exc:
        return _emit_error(args, cmd, EXIT_INPUT, type(exc).__name__, str(exc), started)
    except DualOrderError as exc:
        # Bug signals (a proven identity failed) still map into the exit-code contract.
        return _emit_error(args, cmd, EXIT_INPUT, f"internal error ({type(exc).__name__})", str(exc), started)


if __name__ == "__main__":
    sys.exit(main())

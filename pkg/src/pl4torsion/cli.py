"""Command-line front end: ``pl4torsion {invariant,check,example,fuzz}``."""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .complex import alternating_dimension_sum, assemble_complex
from .errors import DegeneracyError, NotAcyclicError, ParseError, ValidationError
from .fileformat import TriangulationFile, dumps, parse, read
from .fuzz import DEFAULT_MIX, FUZZ_QUALITY, fuzz
from .torsion import RANK_TOL, check_acyclic, evaluate, select_partition
from .triangulation import (
    MOVE_KINDS,
    boundary_5simplex_s4,
    build_skeleton,
    canonical_s4,
    check_realization,
    validate_closed_oriented,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_DEGENERACY = 5
EXIT_NOT_ACYCLIC = 6
EXIT_FUZZ_TOLERANCE = 7

EXAMPLES = {
    "s4-canonical": (canonical_s4, "canonical S^4: two copies of the corner simplex"),
    "s4-boundary-5simplex": (boundary_5simplex_s4, "S^4 as the boundary of a 5-simplex"),
}

REPORT_FORMAT = "pl4torsion-report 1"


class CliFailure(Exception):
    def __init__(self, code: int, message: str, report: dict | None = None):
        super().__init__(message)
        self.code = code
        self.report = report


def example_file(name: str) -> str:
    build, comment = EXAMPLES[name]
    t, r = build()
    return dumps(t, r, comment=comment)


def _load(path: str) -> TriangulationFile:
    try:
        if path == "-":
            return parse(sys.stdin.read())
        if path.startswith("example:"):
            return parse(example_file(path.split(":", 1)[1]))
        return read(path)
    except (OSError, KeyError) as exc:
        raise CliFailure(EXIT_PARSE, f"cannot read {path}: {exc}") from exc
    except ParseError as exc:
        raise CliFailure(EXIT_PARSE, f"parse error: {exc}") from exc


def _counts(sk) -> dict:
    n = sk.counts
    return dict(zip(("vertices", "edges", "triangles", "tetrahedra", "simplices"), n))


def _validated(doc: TriangulationFile):
    """Return (skeleton, frames) or raise CliFailure with the matching exit code."""
    rep = validate_closed_oriented(doc.triangulation)
    if not rep.valid:
        raise CliFailure(
            EXIT_VALIDATION,
            "invalid triangulation: " + "; ".join(rep.problems),
            {"validation": _validation_dict(rep)},
        )
    try:
        sk = build_skeleton(doc.triangulation)
        check_realization(doc.triangulation, doc.realization, sk)
        frames = doc.frames()
    except DegeneracyError as exc:
        raise CliFailure(EXIT_DEGENERACY, f"degenerate realization: {exc}") from exc
    except ValidationError as exc:
        raise CliFailure(EXIT_VALIDATION, f"invalid input: {exc}") from exc
    return sk, frames


def _validation_dict(rep) -> dict:
    return {
        "valid": rep.valid,
        "problems": list(rep.problems),
        "violating_tetrahedra": [list(x) for x in rep.violating_tetrahedra],
    }


def _evaluate(doc, frames, rank_tol, seed=None):
    partition = None
    try:
        if seed is not None:
            c = assemble_complex(doc.triangulation, doc.realization, frames)
            if check_acyclic(c, rank_tol).acyclic:
                partition = select_partition(c, rank_tol, np.random.default_rng(seed))
        return evaluate(doc.triangulation, doc.realization, frames, rank_tol, partition)
    except NotAcyclicError as exc:
        report = {"acyclicity": exc.report.as_dict()} if exc.report is not None else None
        raise CliFailure(EXIT_NOT_ACYCLIC, str(exc), report) from exc
    except DegeneracyError as exc:
        raise CliFailure(EXIT_DEGENERACY, f"degenerate realization: {exc}") from exc


def cmd_invariant(args) -> dict:
    start = time.perf_counter()
    doc = _load(args.file)
    sk, frames = _validated(doc)
    res = _evaluate(doc, frames, args.rank_tol, args.seed)
    return {
        "format": REPORT_FORMAT,
        "command": "invariant",
        "flags": {"rank_tol": args.rank_tol, "precision": args.precision, "seed": args.seed},
        "counts": _counts(sk),
        "dims": list(res.complex.dims),
        "acyclicity": res.report.as_dict(),
        "torsion": res.torsion.as_dict(),
        "abs_tau": res.torsion.abs_tau,
        "products": res.products.as_dict(),
        "invariant": res.value,
        "log_invariant": res.log_value,
        "timing": {"seconds": time.perf_counter() - start},
    }


def cmd_check(args) -> dict:
    start = time.perf_counter()
    doc = _load(args.file)
    rep = validate_closed_oriented(doc.triangulation)
    out = {
        "format": REPORT_FORMAT,
        "command": "check",
        "flags": {"rank_tol": args.rank_tol, "precision": args.precision},
        "validation": _validation_dict(rep),
    }
    if rep.valid:
        sk = build_skeleton(doc.triangulation)
        out["counts"] = _counts(sk)
        out["alternating_dimension_sum"] = alternating_dimension_sum(sk)
        try:
            check_realization(doc.triangulation, doc.realization, sk)
            c = assemble_complex(doc.triangulation, doc.realization, doc.frames())
        except (DegeneracyError, ValidationError) as exc:
            out["realization"] = {"ok": False, "problem": str(exc)}
        else:
            out["realization"] = {"ok": True}
            out["dims"] = list(c.dims)
            out["composition_norms"] = c.composition_norms()
            out["acyclicity"] = check_acyclic(c, args.rank_tol).as_dict()
    out["timing"] = {"seconds": time.perf_counter() - start}
    return out


def cmd_example(args) -> str:
    return example_file(args.name)


def parse_move_mix(text: str) -> dict[str, float]:
    """``"1-5=2,5-1=2,2-4=2,4-2=2,3-3=1"``; kinds not mentioned get weight 0."""
    mix = {k: 0.0 for k in MOVE_KINDS}
    for part in text.split(","):
        kind, _, w = part.partition("=")
        kind = kind.strip().replace(">", "").replace("->", "-")
        if kind not in mix:
            raise argparse.ArgumentTypeError(f"unknown move kind {kind!r}")
        try:
            mix[kind] = float(w)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad weight in {part!r}") from exc
        if mix[kind] < 0:
            raise argparse.ArgumentTypeError("weights must be non-negative")
    if not any(mix.values()):
        raise argparse.ArgumentTypeError("at least one weight must be positive")
    return mix


def cmd_fuzz(args) -> dict:
    start = time.perf_counter()
    doc = _load(args.file)
    sk, frames = _validated(doc)
    if frames is not None:
        raise CliFailure(EXIT_VALIDATION, "frame overrides are not supported by fuzz")
    _evaluate(doc, None, args.rank_tol)
    res = fuzz(
        doc.triangulation,
        doc.realization,
        args.moves,
        args.seed,
        mix=args.move_mix,
        tol_ratio=args.tol_ratio,
        tol_inv=args.tol_inv,
        rank_tol=args.rank_tol,
        min_quality=args.min_quality,
    )
    return {
        "format": REPORT_FORMAT,
        "command": "fuzz",
        "flags": {
            "rank_tol": args.rank_tol,
            "precision": args.precision,
            "moves": args.moves,
            "seed": args.seed,
            "move_mix": dict(args.move_mix),
            "tol_ratio": args.tol_ratio,
            "tol_inv": args.tol_inv,
            "min_quality": args.min_quality,
        },
        "counts": _counts(sk),
        "initial": {
            "abs_tau": res.initial.torsion.abs_tau,
            "invariant": res.initial.value,
        },
        "steps": [s.as_dict() for s in res.steps],
        "applied": len(res.applied),
        "skipped": len(res.steps) - len(res.applied),
        "max_ratio_residual": res.max_ratio_residual,
        "max_invariant_drift": res.max_invariant_drift,
        "final_counts": _counts(build_skeleton(res.triangulation)),
        "passed": res.passed,
        "timing": {"seconds": time.perf_counter() - start},
    }


def _summary(report: dict) -> str:
    cmd = report["command"]
    lines = []
    if "counts" in report:
        c = report["counts"]
        lines.append(
            "faces: " + ", ".join(f"{k} {v}" for k, v in c.items())
        )
    if cmd == "invariant":
        ac = report["acyclicity"]
        lines.append(f"dims: {ac['dims']}  ranks: {ac['ranks']}  acyclic: {ac['acyclic']}")
        for m in report["torsion"]["minors"]:
            lines.append(
                f"  {m['map']}: |minor| = {m['abs_minor']!r} (size {m['size']}, exponent {m['exponent']:+d})"
            )
        lines.append(f"|tau| = {report['abs_tau']!r}")
        lines.append(f"I = {report['invariant']!r}")
    elif cmd == "check":
        v = report["validation"]
        lines.append("closed and oriented: " + ("yes" if v["valid"] else "no"))
        lines.extend(f"  {p}" for p in v["problems"])
        if "alternating_dimension_sum" in report:
            lines.append(f"20 - 10 N0 + 4 N1 - N2 = {report['alternating_dimension_sum']}")
        if "realization" in report and not report["realization"]["ok"]:
            lines.append(f"realization: {report['realization']['problem']}")
        if "composition_norms" in report:
            lines.append(
                "composition norms: " + ", ".join(f"{x:.3e}" for x in report["composition_norms"])
            )
            ac = report["acyclicity"]
            lines.append(f"dims: {ac['dims']}  ranks: {ac['ranks']}  acyclic: {ac['acyclic']}")
    elif cmd == "fuzz":
        for s in report["steps"]:
            if s["status"] == "applied":
                lines.append(
                    f"  move {s['index']}: {s['kind']} {s['arg']}  residual {s['ratio_residual']:.3e}"
                    f"  drift {s['invariant_drift']:.3e}"
                )
            else:
                lines.append(f"  move {s['index']}: skipped ({s.get('note', '')})")
        lines.append(f"max ratio residual: {report['max_ratio_residual']:.3e}")
        lines.append(f"max invariant drift: {report['max_invariant_drift']:.3e}")
        lines.append("PASS" if report["passed"] else "FAIL")
    lines.append(f"time: {report['timing']['seconds']:.3f} s")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank-tol", type=float, default=RANK_TOL, help="relative singular value cutoff")
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument(
        "--precision", choices=["binary64"], default="binary64", help="floating point format"
    )

    p = argparse.ArgumentParser(prog="pl4torsion", description="Torsion invariant of triangulated PL 4-manifolds.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("invariant", parents=[common], help="compute |tau| and I")
    q.add_argument("file", help="triangulation file, '-' for stdin, or example:<name>")
    q.add_argument("--seed", type=int, default=None, help="randomize the minor selection")
    q.set_defaults(func=cmd_invariant)

    q = sub.add_parser("check", parents=[common], help="validation, compositions and ranks")
    q.add_argument("file")
    q.set_defaults(func=cmd_check)

    q = sub.add_parser("example", help="print a builtin triangulation")
    q.add_argument("name", choices=sorted(EXAMPLES))
    q.set_defaults(func=cmd_example)

    q = sub.add_parser("fuzz", parents=[common], help="random Pachner moves with ratio checks")
    q.add_argument("file")
    q.add_argument("--moves", type=int, default=6)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--tol-ratio", type=float, default=1e-7)
    q.add_argument("--tol-inv", type=float, default=1e-6)
    q.add_argument(
        "--move-mix",
        type=parse_move_mix,
        default=dict(DEFAULT_MIX),
        help="comma-separated kind=weight, e.g. 1-5=2,5-1=2,2-4=2,4-2=2,3-3=1",
    )
    q.add_argument(
        "--min-quality",
        type=float,
        default=FUZZ_QUALITY,
        help="reject moves creating simplices with |V| below this times (longest edge)^4",
    )
    q.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
    except CliFailure as exc:
        if getattr(args, "json", False):
            doc = {"format": REPORT_FORMAT, "command": args.command, "error": str(exc), "exit_code": exc.code}
            doc.update(exc.report or {})
            print(json.dumps(doc, indent=2))
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    if isinstance(out, str):
        sys.stdout.write(out)
        return EXIT_OK
    print(json.dumps(out, indent=2) if args.json else _summary(out))
    if args.command == "fuzz" and not out["passed"]:
        return EXIT_FUZZ_TOLERANCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

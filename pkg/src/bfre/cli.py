"""Command-line front end: solve, resolve and verify problem files.

Problem files are JSON objects with keys ``tnorm`` ({"family", "param"}),
``a_plus``, ``a_minus`` (equal-shape matrices), ``b`` and ``c``.  Exit codes:
0 success (optimum found / no mismatches), 2 infeasible, 1 bad input or cap
exceeded.  The BFRE_EPS environment variable overrides the comparison
tolerance.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from .errors import CapExceeded
from .optimize import Solution, enumerate_feasible_decomposition, solve
from .oracle import (
    DEFAULT_CAP, brute_force_optimum, random_feasible_instance, random_instance,
)
from .resolution import (
    ProblemInstance, build_tables, check_feasibility, tables_to_json,
)
from .simplify import Mode
from .tnorms import InvalidParameter, validate

_VERIFY_FAMILIES = (("lukasiewicz", None), ("product", None),
                    ("yager", 2.0), ("hamacher", 1.0))


def load_problem(source) -> ProblemInstance:
    """Build an instance from a dict or a JSON file path."""
    if isinstance(source, dict):
        data = source
    else:
        with open(source) as fh:
            data = json.load(fh)
    for key in ("tnorm", "a_plus", "a_minus", "b", "c"):
        if key not in data:
            raise ValueError(f"missing key {key!r}")
    tn = data["tnorm"]
    if not isinstance(tn, dict) or "family" not in tn:
        raise ValueError("tnorm must be an object with a 'family' key")
    t = validate(tn["family"], tn.get("param"))
    return ProblemInstance(
        [list(map(float, row)) for row in data["a_plus"]],
        [list(map(float, row)) for row in data["a_minus"]],
        [float(v) for v in data["b"]],
        [float(v) for v in data["c"]],
        t,
    )


def problem_to_dict(p: ProblemInstance) -> dict:
    tn = {"family": p.tnorm.family.value}
    if p.tnorm.param is not None:
        tn["param"] = p.tnorm.param
    return {"tnorm": tn, "a_plus": [list(r) for r in p.a_plus],
            "a_minus": [list(r) for r in p.a_minus], "b": list(p.b), "c": list(p.c)}


def _fmt(v: float) -> str:
    s = f"{v:.6g}"
    return "0" if s == "-0" else s


def _print_tables(tables, out):
    names = (("relaxation", "relaxation sets"), ("solution", "solution sets"),
             ("column_interval", "column intervals"), ("restricted", "restricted sets"))
    data = tables_to_json(tables)
    header = "      " + " ".join(f"{'x%d' % (j + 1):>10}" for j in tables.col_ids)
    for key, title in names:
        print(f"{title}:", file=out)
        print(header, file=out)
        if key == "column_interval":
            print("    - " + " ".join(f"{s:>10}" for s in data[key]), file=out)
        else:
            for rid, row in zip(tables.row_ids, data[key]):
                print(f"  {rid + 1:>3} " + " ".join(f"{s:>10}" for s in row), file=out)
        print(file=out)


def _solution_json(sol: Solution) -> dict:
    out = {"status": sol.status.value}
    if sol.optimal:
        out["objective"] = sol.objective
        out["x"] = sol.x
    else:
        out["reason"] = sol.reason.value
        if sol.witness is not None:
            out["witness"] = sol.witness + 1
    if sol.ledger is not None:
        out["presolve"] = sol.ledger.to_json()
    out["search"] = {
        "nodes_created": sol.stats.nodes_created,
        "nodes_expanded": sol.stats.nodes_expanded,
        "candidates_evaluated": sol.stats.candidates_evaluated,
    }
    if sol.events:
        out["trace"] = sol.trace_lines()
    return out


def cmd_solve(args, out=None) -> int:
    out = out or sys.stdout
    try:
        p = load_problem(args.path)
    except (OSError, ValueError, InvalidParameter, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    t0 = time.perf_counter()
    mode = Mode.FEASIBILITY_PRESERVING if args.no_simplify else Mode.OPTIMALITY_PRESERVING
    sol = solve(p, mode=mode, record=args.trace)
    dt = time.perf_counter() - t0
    if args.json:
        print(json.dumps(_solution_json(sol), indent=2), file=out)
    else:
        print(f"status: {sol.status.value}", file=out)
        if sol.optimal:
            print(f"objective: {_fmt(sol.objective)}", file=out)
            print("x*: (" + ", ".join(_fmt(v) for v in sol.x) + ")", file=out)
        else:
            where = f" (index {sol.witness + 1})" if sol.witness is not None else ""
            print(f"reason: {sol.reason.value}{where}", file=out)
        if sol.ledger is not None:
            chain = " -> ".join(str(v) for v in sol.ledger.bound_sequence())
            print(f"presolve bound: {chain}", file=out)
            fixed = sol.ledger.fixed_assignments()
            if fixed:
                print("fixed: " + ", ".join(f"x{j + 1}={_fmt(v)}"
                                            for j, v in sorted(fixed.items())), file=out)
            for line in sol.ledger.describe():
                print("  " + line, file=out)
        s = sol.stats
        print(f"search: created {s.nodes_created}, expanded {s.nodes_expanded}, "
              f"candidates {s.candidates_evaluated}", file=out)
        if args.trace:
            for line in sol.trace_lines():
                print(line, file=out)
        if args.tables:
            _print_tables(build_tables(p), out)
    if not args.no_timing:
        print(f"time: {dt:.3f}s", file=out)
    return 0 if sol.optimal else 2


def cmd_resolve(args, out=None) -> int:
    out = out or sys.stdout
    try:
        p = load_problem(args.path)
    except (OSError, ValueError, InvalidParameter, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    t0 = time.perf_counter()
    tables = build_tables(p)
    report = check_feasibility(tables)
    boxes = None
    if args.boxes:
        try:
            boxes = enumerate_feasible_decomposition(p, cap=args.cap)
        except CapExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    if args.json:
        doc = {"feasibility": report.status.value, "tables": tables_to_json(tables)}
        if report.witness is not None:
            doc["witness"] = report.witness + 1
        if boxes is not None:
            doc["boxes"] = [
                {"assignment": {str(i + 1): j + 1 for i, j in sorted(a.items())},
                 "box": [str(s) for s in box]}
                for a, box in boxes
            ]
        print(json.dumps(doc, indent=2), file=out)
    else:
        print(f"feasibility: {report.status.value}"
              + (f" (index {report.witness + 1})" if report.witness is not None else ""),
              file=out)
        if args.tables:
            _print_tables(tables, out)
        if boxes is not None:
            print(f"feasible boxes: {len(boxes)}", file=out)
            for a, box in boxes:
                picks = ",".join(f"{i + 1}->{j + 1}" for i, j in sorted(a.items()))
                print("  e{" + picks + "}: " + " x ".join(str(s) for s in box), file=out)
    if not args.no_timing:
        print(f"time: {time.perf_counter() - t0:.3f}s", file=out)
    return 0 if report.ok else 2


def _compare(p: ProblemInstance, cap: int) -> list:
    """Solver vs brute force on one instance; returns mismatch strings."""
    sol = solve(p)
    rep = brute_force_optimum(build_tables(p), p.c, cap=cap)
    mismatches = []
    if sol.optimal != (rep.optimum is not None):
        mismatches.append(
            f"status: solver={sol.status.value} oracle="
            + ("optimal" if rep.optimum else "infeasible"))
    elif sol.optimal and abs(sol.objective - rep.optimum[1]) > 1e-9:
        mismatches.append(f"objective: solver={sol.objective!r} oracle={rep.optimum[1]!r}")
    return mismatches


def cmd_verify(args, out=None) -> int:
    out = out or sys.stdout
    t0 = time.perf_counter()
    failures = 0
    checked = 0
    if args.path is not None:
        try:
            p = load_problem(args.path)
        except (OSError, ValueError, InvalidParameter, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        try:
            mismatches = _compare(p, args.cap)
        except CapExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        checked += 1
        for msg in mismatches:
            failures += 1
            print(f"mismatch: {msg}", file=out)
    if args.seed is not None:
        rng = random.Random(args.seed)
        for k in range(args.count):
            family, param = _VERIFY_FAMILIES[k % len(_VERIFY_FAMILIES)]
            gen = random_feasible_instance if k % 2 else random_instance
            p = gen(rng, family, param)
            try:
                mismatches = _compare(p, args.cap)
            except CapExceeded as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 1
            checked += 1
            for msg in mismatches:
                failures += 1
                print(f"mismatch [{family} #{k}]: {msg}", file=out)
    if checked == 0:
        print("error: give a problem file, --seed, or both", file=sys.stderr)
        return 1
    print(f"verified {checked} instance(s): "
          + ("all agree" if failures == 0 else f"{failures} mismatch(es)"), file=out)
    if not args.no_timing:
        print(f"time: {time.perf_counter() - t0:.3f}s", file=out)
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bfre",
        description="Solve linear optimization over bipolar fuzzy relational "
                    "equation systems with continuous Archimedean t-norms.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--no-timing", action="store_true", help="suppress the timing line")

    sp = sub.add_parser("solve", help="find a global optimum")
    sp.add_argument("path", help="problem JSON file")
    sp.add_argument("--trace", action="store_true", help="print the search trace")
    sp.add_argument("--tables", action="store_true", help="print the resolution tables")
    sp.add_argument("--no-simplify", action="store_true",
                    help="feasibility-preserving presolve only; search all "
                         "admissible assignments")
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("resolve", help="resolve the feasible region")
    sp.add_argument("path", help="problem JSON file")
    sp.add_argument("--tables", action="store_true", help="print the resolution tables")
    sp.add_argument("--boxes", action="store_true", help="enumerate the feasible boxes")
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap")
    common(sp)
    sp.set_defaults(func=cmd_resolve)

    sp = sub.add_parser("verify", help="cross-check the solver against brute force")
    sp.add_argument("path", nargs="?", default=None, help="problem JSON file")
    sp.add_argument("--seed", type=int, default=None, help="also run a random batch")
    sp.add_argument("--count", type=int, default=40, help="batch size for --seed")
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="oracle enumeration cap")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

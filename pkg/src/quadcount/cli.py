"""Command line entry point: ``quadcount <subcommand> ...``.

Exit codes: 0 success, 2 budget exceeded, 3 invalid input, 4 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, replace
from fractions import Fraction

from .config import ExperimentConfig
from .conics import lattice_cover
from .counting import BRUTE_BUDGET
from .errors import ConstraintUnsatisfiable, InvalidInput, InvariantViolation, TooLarge
from .experiment import count_points, experiment_forms, growth_experiment, theorem_rhs
from .forms import dual_form, load_form
from .lines import line_point_count, lines_up_to_height
from .localarith import RESIDUE_BUDGET, C_value, minor_gcd_D, rho
from .selfcheck import run_selfcheck

EXIT_OK, EXIT_BUDGET, EXIT_INPUT, EXIT_INVARIANT = 0, 2, 3, 4


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _emit(obj, out: str | None) -> None:
    text = json.dumps(_jsonable(obj), indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=_positive, default=argparse.SUPPRESS)
    common.add_argument("--budget", type=_positive, default=argparse.SUPPRESS,
                        help="enumeration budget (grid points or residue tuples)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the result to this path")

    p = argparse.ArgumentParser(prog="quadcount", parents=[common],
                                description="Count primitive zeros of quaternary quadratic forms.")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("count", parents=[common], help="N(B) for a form file")
    c.add_argument("form")
    c.add_argument("--B", type=_positive, required=True)
    c.add_argument("--method", choices=("brute", "sliced", "both"), default="both")

    r = sub.add_parser("rho", parents=[common], help="zeros of the dual form mod m")
    r.add_argument("form")
    r.add_argument("--m", type=_positive, required=True)

    b = sub.add_parser("bound", parents=[common], help="the upper-bound right-hand side at B")
    b.add_argument("form")
    b.add_argument("--B", type=int, required=True)
    b.add_argument("--eps", type=float, default=1e-3)

    cv = sub.add_parser("cover", parents=[common], help="lattice cover of a ternary form's zeros")
    cv.add_argument("form")

    ln = sub.add_parser("lines", parents=[common], help="rational lines with det <= H")
    ln.add_argument("form")
    ln.add_argument("--H", type=_positive, required=True)
    ln.add_argument("--B", type=_positive, default=None, help="also count points of height <= B")

    e = sub.add_parser("experiment", parents=[common], help="growth experiment from a JSON config")
    e.add_argument("config")

    sub.add_parser("selfcheck", parents=[common], help="run the invariant sweep")
    return p


def _run(args) -> int:
    workers = getattr(args, "workers", 1)
    out = getattr(args, "out", None)
    if args.cmd == "count":
        Q = load_form(args.form)
        rep = count_points(Q, args.B, args.method, workers, getattr(args, "budget", BRUTE_BUDGET))
        _emit(asdict(rep), out)
    elif args.cmd == "rho":
        Q = load_form(args.form)
        if not Q.classical:
            raise InvalidInput("rho needs a classical form (integral Gram matrix)")
        value = rho(dual_form(Q), args.m, getattr(args, "budget", RESIDUE_BUDGET))
        _emit({"m": args.m, "rho": value}, out)
    elif args.cmd == "bound":
        Q = load_form(args.form)
        _emit(asdict(theorem_rhs(Q, args.B, args.eps)), out)
    elif args.cmd == "cover":
        q = load_form(args.form)
        lats = lattice_cover(q)
        _emit({"disc": q.disc, "D": minor_gcd_D(q), "C": C_value(q),
               "lattices": [{"vectors": l.vectors, "det_sq": l.det_sq} for l in lats]}, out)
    elif args.cmd == "lines":
        Q = load_form(args.form)
        rows = []
        for l in lines_up_to_height(Q, args.H):
            row = {"basis": l.basis, "plucker": l.plucker, "det_sq": l.det_sq}
            if args.B:
                row["points"] = line_point_count(l, args.B)
            rows.append(row)
        _emit({"H": args.H, "count": len(rows), "lines": rows}, out)
    elif args.cmd == "experiment":
        cfg = ExperimentConfig.load(args.config)
        over = {k: getattr(args, k) for k in ("workers", "seed", "out") if hasattr(args, k)}
        if hasattr(args, "budget"):
            over["brute_budget"] = args.budget
        cfg = replace(cfg, **over)
        res = growth_experiment(experiment_forms(cfg), cfg.B_grid, cfg)
        if not cfg.out:
            sys.stdout.write(res.csv_text)
        print(json.dumps({"rows": len(res.rows), "skipped": res.skipped,
                          "max_N_over_B2_nonsquare": res.max_N_over_B2_nonsquare,
                          "max_N_over_B2logB_square": res.max_N_over_B2logB_square}), file=sys.stderr)
    elif args.cmd == "selfcheck":
        results = run_selfcheck(getattr(args, "seed", 0))
        for name, ok, detail in results:
            print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not all(ok for _, ok, _ in results):
            return EXIT_INVARIANT
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except TooLarge as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InvalidInput, ConstraintUnsatisfiable, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

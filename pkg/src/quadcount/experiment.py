"""Random forms, the upper-bound right-hand side, and growth experiments."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import ExperimentConfig
from .counting import BRUTE_BUDGET, CountReport, brute_force_count, sliced_count
from .errors import (ConstraintUnsatisfiable, HeightRegimeError, InvalidInput, InvariantViolation,
                     NonClassical, SingularForm, TooLarge)
from .forms import QuadraticForm, build_form, form_from_json
from .localarith import is_square, pi_B, squarefull_part, varpi

CSV_COLUMNS = ("form_id", "delta", "delta_bad", "height", "B", "N", "N_over_B2", "N_over_B2logB",
               "rhs", "N_over_rhs", "method", "elapsed")


# ---------------------------------------------------------------------------
# random forms
# ---------------------------------------------------------------------------

def _disc_is_square(d: Fraction) -> bool:
    return d > 0 and is_square(d.numerator) and is_square(d.denominator)


def satisfies_constraint(Q: QuadraticForm, constraint: str | None) -> bool:
    if constraint is None:
        return True
    if constraint == "square":
        return _disc_is_square(Q.disc)
    if constraint == "nonsquare":
        return not _disc_is_square(Q.disc)
    if constraint == "squarefree":
        return Q.disc.denominator == 1 and squarefull_part(Q.disc.numerator) == 1
    raise InvalidInput(f"unknown constraint {constraint!r}")


def random_form(cfg: ExperimentConfig, index: int = 0) -> QuadraticForm:
    """Quaternary form drawn from (seed, index); coefficients bounded by cfg.coeff_bound.

    Rejection-samples until non-singular and constraint-satisfying.
    """
    rng = np.random.default_rng([cfg.seed, index])
    b = cfg.coeff_bound
    cross = b // 2 if cfg.classical else b
    for _ in range(cfg.max_rejections):
        coeffs = {}
        for i in range(4):
            for j in range(i, 4):
                if i == j:
                    coeffs[(i, i)] = int(rng.integers(-b, b + 1))
                else:
                    v = int(rng.integers(-cross, cross + 1))
                    coeffs[(i, j)] = 2 * v if cfg.classical else v
        try:
            Q = build_form(4, coeffs)
        except SingularForm:
            continue
        if satisfies_constraint(Q, cfg.constraint):
            return Q
    raise ConstraintUnsatisfiable(
        f"no form satisfying {cfg.constraint!r} after {cfg.max_rejections} draws (bound {b})")


def experiment_forms(cfg: ExperimentConfig) -> list[tuple[str, QuadraticForm]]:
    out = [(f"x{i}", form_from_json(obj)) for i, obj in enumerate(cfg.forms)]
    out += [(f"r{i}", random_form(cfg, i)) for i in range(cfg.n_forms)]
    return out


# ---------------------------------------------------------------------------
# counting with both methods
# ---------------------------------------------------------------------------

def count_points(Q: QuadraticForm, B: int, method: str = "both", workers: int = 1,
                 budget: int = BRUTE_BUDGET) -> CountReport:
    """Count with one method, or with both and insist that they agree."""
    if method == "brute":
        return brute_force_count(Q, B, budget)
    if method == "sliced":
        return sliced_count(Q, B, workers)
    if method != "both":
        raise InvalidInput(f"unknown method {method!r}")
    a = brute_force_count(Q, B, budget)
    s = sliced_count(Q, B, workers)
    if a.count != s.count:
        raise InvariantViolation(f"brute force gives {a.count}, slicing gives {s.count} at B={B}")
    return CountReport(B, a.count, "both", s.slices_visited, s.singular_slices, a.elapsed + s.elapsed)


# ---------------------------------------------------------------------------
# the upper bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    B: int
    epsilon: float
    rhs: float
    pi_B: Fraction
    count: int
    ratio: float
    delta: int
    delta_bad: int
    varpi: Fraction
    height: int
    hypothesis_ok: bool


def theorem_rhs(Q: QuadraticForm, B: int, epsilon: float = 1e-3, count: int | None = None) -> BoundReport:
    """varpi(D) D_bad^(1/4+eps) (|Q|^4/|D|)^(5/8) Pi_B (B^(4/3) + B^2/|D|^(1/4)) and N(B)/rhs."""
    if Q.n != 4:
        raise InvalidInput("the bound concerns quaternary forms")
    if not Q.classical:
        raise NonClassical("the bound needs an integer discriminant (classical form)")
    if B < 2:
        raise InvalidInput("B must be at least 2")
    if epsilon < 0:
        raise InvalidInput("epsilon must be nonnegative")
    if math.log(Q.height) > 20 * math.log(B):
        raise HeightRegimeError(
            f"height {Q.height} exceeds B^20; this regime needs a separate argument and is not evaluated")
    delta = Q.int_disc()
    ad = abs(delta)
    dbad = squarefull_part(delta)
    vp = varpi(ad)
    pb = pi_B(delta, B)
    log_rhs = (math.log(float(vp)) + (0.25 + epsilon) * math.log(dbad)
               + 0.625 * (4 * math.log(Q.height) - math.log(ad)) + math.log(float(pb))
               + math.log(B ** (4 / 3) + B * B / ad ** 0.25))
    rhs = math.exp(log_rhs)
    if count is None:
        count = count_points(Q, B, "brute").count
    # hypothesis: D_bad <= B^(1/20), i.e. D_bad^20 <= B
    return BoundReport(B, epsilon, rhs, pb, count, count / rhs, delta, dbad, vp, Q.height,
                       dbad ** 20 <= B)


# ---------------------------------------------------------------------------
# growth experiment
# ---------------------------------------------------------------------------

@dataclass
class ExperimentResult:
    rows: list[dict]
    max_N_over_B2_nonsquare: float | None = None
    max_N_over_B2logB_square: float | None = None
    skipped: int = 0
    csv_text: str = field(default="", repr=False)


def _cell(args) -> dict:
    form_id, Q, B, cfg = args
    delta = Q.disc
    row = {"form_id": form_id, "delta": delta, "height": Q.height, "B": B}
    row["delta_bad"] = squarefull_part(delta.numerator) if delta.denominator == 1 else None
    can_brute = (2 * B + 1) ** 3 <= cfg.brute_budget
    can_slice = B <= cfg.sliced_max_B
    method = "both" if can_brute and can_slice else "brute" if can_brute else "sliced" if can_slice else None
    t0 = time.perf_counter()
    n = None
    if method is not None:
        try:
            n = count_points(Q, B, method, 1, cfg.brute_budget).count
        except TooLarge:
            method = None
    row["elapsed"] = time.perf_counter() - t0
    row["method"] = method or "skipped"
    row["N"] = n
    row["N_over_B2"] = n / B ** 2 if n is not None else None
    row["N_over_B2logB"] = n / (B ** 2 * math.log(B)) if n is not None and B >= 2 else None
    row["rhs"] = row["N_over_rhs"] = None
    if n is not None and B >= 2 and Q.classical:
        try:
            rep = theorem_rhs(Q, B, cfg.epsilon, n)
            row["rhs"], row["N_over_rhs"] = rep.rhs, rep.ratio
        except HeightRegimeError:
            pass
    return row


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return str(v)


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def growth_experiment(forms: Sequence[tuple[str, QuadraticForm]], Bgrid: Sequence[int],
                      cfg: ExperimentConfig) -> ExperimentResult:
    """N(B) over a grid of B for each form, with ratio columns; rows in (form, B) order."""
    jobs = [(fid, Q, int(B), cfg) for fid, Q in forms for B in Bgrid]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            rows = list(ex.map(_cell, jobs))  # map preserves submission order
    else:
        rows = [_cell(j) for j in jobs]
    ns = [r["N_over_B2"] for r in rows if r["N"] is not None and not _disc_is_square(r["delta"])]
    sq = [r["N_over_B2logB"] for r in rows
          if r["N_over_B2logB"] is not None and _disc_is_square(r["delta"])]
    text = rows_to_csv(rows)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return ExperimentResult(rows, max(ns) if ns else None, max(sq) if sq else None,
                            sum(r["method"] == "skipped" for r in rows), text)

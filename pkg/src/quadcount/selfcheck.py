"""Fast invariant sweep used by ``quadcount selfcheck``.

Each check returns ``(name, ok, detail)``; the sweep never stops at the first
failure so a single run reports everything that is off.
"""

from __future__ import annotations

import random
from typing import Callable

from . import linalg
from .conics import conic_zeros_in_box, lattice_cover
from .counting import brute_force_count, siegel_witness, sliced_count
from .forms import build_form, diagonal_form, dual_form, restrict_to_hyperplane
from .lattices import kernel_lattice
from .lines import lines_up_to_height, plucker_relation
from .localarith import C_value, chi, exp_sum, gcd_inequality_holds, rho_bruteforce, rho_closed_form


def _random_classical(rng: random.Random, bound: int = 5):
    while True:
        coeffs = {(i, i): rng.randint(-bound, bound) for i in range(4)}
        coeffs.update({(i, j): rng.randint(-(bound // 2), bound // 2) * 2
                       for i in range(4) for j in range(i + 1, 4)})
        try:
            return build_form(4, coeffs)
        except ValueError:
            continue


def _check_dual_identity(rng) -> str:
    for _ in range(100):
        Q = _random_classical(rng)
        c = [rng.randint(-6, 6) for _ in range(4)]
        if linalg.content(c) != 1:
            continue
        rc = restrict_to_hyperplane(Q, c)
        assert rc.q.disc == dual_form(Q)(c), (Q.gram2, c)
        assert kernel_lattice(c).det_sq == sum(x * x for x in c)
    return "det of restriction equals the dual form, 100 draws"


def _check_rho(rng) -> str:
    for _ in range(4):
        Q = _random_classical(rng)
        d = Q.int_disc()
        for p in (3, 5, 7):
            if d % p:
                assert rho_bruteforce(dual_form(Q), p) == rho_closed_form(d, p)
    return "closed form for rho(p), p in 3, 5, 7"


def _check_exp_sum(rng) -> str:
    Q = diagonal_form(1, 1, 1, -1)
    for p in (3, 5, 7):
        v = exp_sum(dual_form(Q), 1, p)
        assert abs(v - chi(-1, p) * p * p) < 1e-6 * p * p
    return "complete sums equal chi(p) p^2"


def _check_counts(rng) -> str:
    assert brute_force_count(diagonal_form(1, 1, 1, -1), 1).count == 12
    assert brute_force_count(diagonal_form(1, 1, -1, -1), 1).count == 32
    for _ in range(2):
        Q = _random_classical(rng)
        assert brute_force_count(Q, 5).count == sliced_count(Q, 5).count
    return "N(1) values and method agreement at B=5"


def _check_cover(rng) -> str:
    for ent in ((1, 1, -25), (1, 1, 3), (2, 3, -5)):
        q = diagonal_form(*ent)
        cov = lattice_cover(q)
        zs = conic_zeros_in_box(q, (30, 30, 30))
        assert all(any(linalg.in_lattice(l.vectors, z) for l in cov) for z in zs)
        if C_value(q) == 0:
            assert not zs
    return "cover soundness on three conics"


def _check_gcd(rng) -> str:
    for _ in range(1000):
        ok, _, _ = gcd_inequality_holds(rng.randint(1, 10 ** 9), rng.randint(1, 10 ** 9))
        assert ok
    return "gcd inequality, 1000 pairs"


def _check_witness(rng) -> str:
    for _ in range(50):
        x = [rng.randint(-20, 20) for _ in range(4)]
        if linalg.content(x) != 1:
            continue
        c = siegel_witness(x)
        assert sum(a * b for a, b in zip(c, x)) == 0
        assert max(map(abs, c)) <= 4 * (1 + max(map(abs, x))) ** (1 / 3)
    return "witnesses orthogonal and short"


def _check_lines(rng) -> str:
    Q = diagonal_form(1, 1, -1, -1)
    ls = lines_up_to_height(Q, 10)
    assert ls and all(l.vanishes_on(Q) and plucker_relation(l.plucker) == 0 for l in ls)
    assert all(l.det_sq == sum(p * p for p in l.plucker) for l in ls)
    assert not lines_up_to_height(diagonal_form(1, 1, 1, -1), 10)
    return f"{len(ls)} lines of det <= 10 on the split form"


CHECKS: dict[str, Callable] = {
    "dual_identity": _check_dual_identity,
    "rho_closed_form": _check_rho,
    "exp_sum": _check_exp_sum,
    "counting": _check_counts,
    "cover": _check_cover,
    "gcd_inequality": _check_gcd,
    "witness": _check_witness,
    "lines": _check_lines,
}


def run_selfcheck(seed: int = 0) -> list[tuple[str, bool, str]]:
    out = []
    for name, fn in CHECKS.items():
        rng = random.Random(f"{seed}:{name}")
        try:
            out.append((name, True, fn(rng)))
        except AssertionError as exc:
            out.append((name, False, f"violated: {exc}"))
    return out

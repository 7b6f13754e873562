"""Fixed desk-scale corpora shared by the acceptance suite and the recording script."""

from __future__ import annotations

import random

from . import linalg
from .config import ExperimentConfig
from .experiment import random_form
from .forms import QuadraticForm, diagonal_form, restrict_to_hyperplane

CORPUS_SEED = 20240611


def classical_forms(count: int = 20, bound: int = 5, seed: int = CORPUS_SEED,
                    constraint: str | None = None) -> list[QuadraticForm]:
    cfg = ExperimentConfig(seed=seed, coeff_bound=bound, n_forms=count, constraint=constraint)
    return [random_form(cfg, i) for i in range(count)]


def slicing_pairs(count: int, bound: int = 50, cmax: int = 20, seed: int = CORPUS_SEED):
    """(Q, c) with classical Q of height <= bound and primitive c."""
    rng = random.Random(seed)
    cfg = ExperimentConfig(seed=seed, coeff_bound=bound, n_forms=count)
    out = []
    for i in range(count):
        Q = random_form(cfg, i)
        while True:
            c = [rng.randint(-cmax, cmax) for _ in range(4)]
            if linalg.content(c) == 1:
                break
        out.append((Q, tuple(c)))
    return out


def ternary_restrictions(count: int = 20, seed: int = CORPUS_SEED) -> list[QuadraticForm]:
    """Nonsingular restricted conics Q_c, plus a few fixed conics with local obstructions."""
    fixed = [diagonal_form(1, 1, 3), diagonal_form(1, 1, -25), diagonal_form(1, 2, -7 * 9),
             diagonal_form(3, 5, -7)]
    out = list(fixed)
    for Q, c in slicing_pairs(4 * count, bound=5, cmax=4, seed=seed):
        if len(out) >= count:
            break
        q = restrict_to_hyperplane(Q, c).q
        if q.disc != 0:
            out.append(q)
    return out


LOWER_FAMILY = diagonal_form(1, 1, 1, -1)
SPLIT_FORM = diagonal_form(1, 1, -1, -1)

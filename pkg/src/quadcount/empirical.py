"""Measurements of the implied constants on the desk corpora.

Each function returns a dict whose ``observed`` entry is the corpus maximum of
the relevant ratio.  ``scripts/record_constants.py`` freezes these into
``constants.py``; the acceptance suite recomputes them and compares.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from . import linalg
from .conics import conic_zeros_in_box, lattice_cover
from .corpus import SPLIT_FORM, classical_forms, slicing_pairs, ternary_restrictions
from .counting import siegel_witnesses, sliced_count
from .experiment import _disc_is_square, theorem_rhs
from .forms import dual_form, restricted_spectrum
from .lattices import (SublatticeBasis, box_product_ratio, coefficient_constant, kernel_lattice,
                       reduced_basis)
from .lines import line_point_count, lines_up_to_height
from .localarith import C_value, S_h_window, frakS, minor_gcd_D, squarefull_part


def spectral_constants(n_pairs: int = 500) -> dict:
    worst_product, ratio = 0.0, 0.0
    for Q, c in slicing_pairs(n_pairs, bound=50):
        mu = restricted_spectrum(Q, c)
        exact = dual_form(Q)(c) / sum(x * x for x in c)
        err = abs(mu[0] * mu[1] * mu[2] - float(exact)) / (1 + abs(float(exact)))
        worst_product = max(worst_product, err)
        ratio = max(ratio, abs(float(Q.disc)) / (Q.height ** 2 * abs(mu[0] * mu[1])))
    return {"observed": ratio, "product_error": worst_product}


def box_ratios() -> dict:
    ell = [np.eye(4, dtype=int).tolist(), np.diag([100, 1, 1, 1]).tolist(), np.diag([1, 4, 9, 25]).tolist()]
    worst = 0.0
    for c in ((0, 0, 0, 1), (1, 1, 1, 1), (3, 4, 0, 0), (2, -3, 5, 7), (1, 10, -4, 3)):
        lat = kernel_lattice(c)
        for e in ell:
            for r in (1.0, 10.0, 37.5):
                worst = max(worst, box_product_ratio(lat, e, r))
    return {"observed": worst}


def reduced_constant(samples: int = 300, seed: int = 1) -> dict:
    rng = np.random.default_rng(seed)
    worst = Fraction(0)
    lats = [kernel_lattice(c) for c in ((1, 1, 1, 1), (3, 4, 0, 0), (2, -3, 5, 7))]
    lats.append(reduced_basis(SublatticeBasis.from_vectors([(1, 0, 0, 0), (1000, 1, 0, 0), (0, 0, 1, 0)])))
    for lat in lats:
        for _ in range(samples):
            coeffs = rng.integers(-50, 51, size=3).tolist()
            worst = max(worst, coefficient_constant(lat, lat.combine(coeffs)))
    return {"observed": float(worst)}


def conic_box_counts() -> dict:
    worst = 0.0
    for q in ternary_restrictions():
        for box in ((5, 5, 5), (20, 3, 7), (40, 40, 40), (2, 60, 60)):
            n = len(conic_zeros_in_box(q, box))
            worst = max(worst, n / (1 + math.prod(box) ** (1 / 3)))
    return {"observed": worst}


def cover_constants() -> dict:
    """kappa_cover_det = max |D_q| / (det * (D^sq)^(3/2)), kappa_I = max I / C (C > 0)."""
    nl, ic = 0.0, 0.0
    zero_c_violations = 0
    for q in ternary_restrictions():
        cov = lattice_cover(q)
        cval = C_value(q)
        dsq = squarefull_part(minor_gcd_D(q))
        d = abs(q.int_disc())
        for lat in cov:
            nl = max(nl, d / (math.sqrt(lat.det_sq) * dsq ** 1.5))
        if cval:
            ic = max(ic, len(cov) / cval)
        elif cov:
            zero_c_violations += 1
    return {"observed_det": nl, "observed_I": ic, "zero_c_nonempty": zero_c_violations}


def reduced_primitive_grid(radius: int) -> np.ndarray:
    """Primitive 0 <= x1 <= x2 <= x3 <= x4 <= radius (orbit representatives under signed permutations)."""
    rows = [x for x in itertools.combinations_with_replacement(range(radius + 1), 4)
            if math.gcd(*x) == 1]
    return np.array(rows, dtype=np.int64)


def siegel_constant(radius: int = 30) -> dict:
    xs = reduced_primitive_grid(radius)
    cs = siegel_witnesses(xs)
    dots = np.einsum("ij,ij->i", xs, cs)
    ratio = np.abs(cs).max(axis=1) / (1 + np.abs(xs).max(axis=1)) ** (1 / 3)
    return {"observed": float(ratio.max()), "orthogonal": bool(np.all(dots == 0)), "points": len(xs)}


def singular_slices(forms=None, Bs=(5, 10, 20)) -> dict:
    forms = forms if forms is not None else classical_forms(5)
    worst = 0.0
    for Q in forms:
        for B in Bs:
            rep = sliced_count(Q, B)
            worst = max(worst, rep.singular_slices / B ** (2 / 3))
    return {"observed": worst}


def axis_centers(X: int) -> list[tuple[int, ...]]:
    out = [(0, 0, 0, 0)]
    for i in range(4):
        for s in (X, -X):
            v = [0, 0, 0, 0]
            v[i] = s
            out.append(tuple(v))
    return out


def average_order(Xs=(8, 12, 16, 24, 32), n_forms: int = 5) -> dict:
    table = []
    for Q in classical_forms(n_forms):
        dual = dual_form(Q)
        delta = Q.int_disc()
        row = []
        for X in Xs:
            s = S_h_window(dual, 1, axis_centers(X), X)
            row.append(s / (float(frakS(delta, X)) * X ** 4 / math.log(X)))
        table.append(row)
    return {"observed": max(max(r) for r in table), "table": table,
            "trend": max(r[-1] / r[0] for r in table)}


def line_constants(H: int = 60, Bs=(10, 50)) -> dict:
    ls = lines_up_to_height(SPLIT_FORM, H)
    kc = max((n + 1) / math.sqrt(l.det_sq) for n, l in enumerate(ls))
    kl = len(ls) / H
    kline = max(line_point_count(l, B) / (1 + B * B / math.sqrt(l.det_sq)) for l in ls for B in Bs)
    return {"observed_c": kc, "observed_L": kl, "observed_line": kline, "lines": len(ls)}


def bound_ratios(Bs=(5, 10, 20, 50), n_forms: int = 20) -> dict:
    thm, conj = 0.0, 0.0
    used = 0
    for Q in classical_forms(n_forms, constraint="squarefree"):
        for B in Bs:
            rep = theorem_rhs(Q, B, 1e-3)
            if not rep.hypothesis_ok:
                continue
            used += 1
            thm = max(thm, rep.ratio)
            if not _disc_is_square(Q.disc):
                conj = max(conj, rep.count / B ** 2)
    return {"observed_thm": thm, "observed_conj": conj, "cells": used}

"""Zeros of ternary forms: box enumeration and the lattice cover of primitive zeros.

``lattice_cover`` works one prime p | Delta_q at a time.  Starting from Z^3 it
repeatedly pulls q back to the current sublattice, strips the p-content, and
replaces the lattice by the preimages of the linear subspaces of F_p^3 that
cover the zero set of the reduction.  A branch stops when the pulled-back
form has good reduction at p, and dies when the lattice falls inside pZ^3
(no primitive vectors left).  Every primitive zero follows some branch, so the
cover is sound by construction; branches for different primes are
intersected at the end.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np
from sympy.ntheory import sqrt_mod

from . import linalg
from .errors import InvalidInput, NonClassical, TooLarge
from .forms import QuadraticForm
from .lattices import BoxBounds, SublatticeBasis
from .localarith import factorize, legendre

BOX_BUDGET = 10 ** 8
_F64_EXACT = 2 ** 62


# ---------------------------------------------------------------------------
# box enumeration
# ---------------------------------------------------------------------------

def _isqrt_vec(d: np.ndarray) -> np.ndarray:
    s = np.floor(np.sqrt(d.astype(np.float64))).astype(np.int64)
    for _ in range(2):
        s = np.where(s * s > d, s - 1, s)
        s = np.where((s + 1) * (s + 1) <= d, s + 1, s)
    return s


def box_zeros(gram2: Sequence[Sequence[int]], bounds: Sequence[int], budget: int = BOX_BUDGET,
              solve: int | None = None) -> np.ndarray:
    """All integer x with |x_i| <= bounds[i] and x^T gram2 x = 0 (zero vector included).

    Coordinate ``solve`` (default: the one with the largest range) is found by
    an exact integer square root; the others are enumerated on a grid, one
    value of the first free coordinate at a time.
    """
    n = len(gram2)
    b = [int(v) for v in bounds]
    if any(v < 0 for v in b):
        return np.zeros((0, n), dtype=np.int64)
    s = max(range(n), key=lambda i: (b[i], -i)) if solve is None else solve
    free = [i for i in range(n) if i != s]
    grid_size = math.prod(2 * b[i] + 1 for i in free)
    if grid_size > budget:
        raise TooLarge(f"box enumeration of {grid_size} points exceeds the budget {budget}")
    g = [[int(x) for x in row] for row in gram2]
    a = g[s][s] // 2
    absg = sum(abs(x) for row in g for x in row)
    big = max(b) if b else 0
    if (absg * big) ** 2 * 4 >= _F64_EXACT:
        return _box_zeros_python(g, b, s, free)

    out = []
    first, rest = free[0], free[1:]
    axes = [np.arange(-b[i], b[i] + 1, dtype=np.int64) for i in rest]
    if axes:
        mesh = [m.ravel() for m in np.meshgrid(*axes, indexing="ij")]
    else:
        mesh = []
    size = mesh[0].size if mesh else 1
    # contributions of the non-first free coordinates
    lin_rest = np.zeros(size, dtype=np.int64)
    c_rest = np.zeros(size, dtype=np.int64)
    cross_first = np.zeros(size, dtype=np.int64)
    for ii, i in enumerate(rest):
        lin_rest += g[s][i] * mesh[ii]
        cross_first += g[first][i] * mesh[ii]
        for jj, j in enumerate(rest):
            c_rest += g[i][j] * mesh[ii] * mesh[jj]
    c_rest //= 2
    line_hits = []
    for t in range(-b[first], b[first] + 1):
        lin = lin_rest + g[s][first] * t
        c = c_rest + cross_first * t + (g[first][first] // 2) * t * t
        free_vals = [np.full(size, t, dtype=np.int64)] + mesh
        if a != 0:
            d = lin * lin - 4 * a * c
            ok = d >= 0
            if not np.any(ok):
                continue
            idx = np.nonzero(ok)[0]
            dd = d[idx]
            r = _isqrt_vec(dd)
            sq = r * r == dd
            idx, r = idx[sq], r[sq]
            for sign in (1, -1):
                if sign == -1:
                    keep = r != 0
                    idx_s, r_s = idx[keep], r[keep]
                else:
                    idx_s, r_s = idx, r
                num = -lin[idx_s] + sign * r_s
                den = 2 * a
                good = num % den == 0
                xs = num[good] // den
                sel = idx_s[good]
                inb = np.abs(xs) <= b[s]
                if np.any(inb):
                    pts = np.zeros((int(np.count_nonzero(inb)), n), dtype=np.int64)
                    pts[:, s] = xs[inb]
                    for k, i in enumerate(free):
                        pts[:, i] = free_vals[k][sel[inb]]
                    out.append(pts)
        else:
            nz = lin != 0
            idx = np.nonzero(nz)[0]
            good = (-c[idx]) % lin[idx] == 0
            sel = idx[good]
            xs = -c[sel] // lin[sel]
            inb = np.abs(xs) <= b[s]
            if np.any(inb):
                pts = np.zeros((int(np.count_nonzero(inb)), n), dtype=np.int64)
                pts[:, s] = xs[inb]
                for k, i in enumerate(free):
                    pts[:, i] = free_vals[k][sel[inb]]
                out.append(pts)
            whole = np.nonzero((~nz) & (c == 0))[0]
            for j in whole:
                base = [int(free_vals[k][j]) for k in range(len(free))]
                for xsv in range(-b[s], b[s] + 1):
                    p = [0] * n
                    p[s] = xsv
                    for k, i in enumerate(free):
                        p[i] = base[k]
                    line_hits.append(p)
    if line_hits:
        out.append(np.array(line_hits, dtype=np.int64))
    if not out:
        return np.zeros((0, n), dtype=np.int64)
    return np.concatenate(out)


def _box_zeros_python(g, b, s, free) -> np.ndarray:
    n = len(g)
    a = g[s][s] // 2
    pts = []
    for vals in itertools.product(*(range(-b[i], b[i] + 1) for i in free)):
        x = [0] * n
        for k, i in enumerate(free):
            x[i] = vals[k]
        lin = sum(g[s][i] * x[i] for i in free)
        c = sum(g[i][j] * x[i] * x[j] for i in free for j in free) // 2
        roots = set()
        if a:
            d = lin * lin - 4 * a * c
            if d >= 0:
                r = math.isqrt(d)
                if r * r == d:
                    for num in (-lin + r, -lin - r):
                        if num % (2 * a) == 0:
                            roots.add(num // (2 * a))
        elif lin:
            if c % lin == 0:
                roots.add(-c // lin)
        elif c == 0:
            roots.update(range(-b[s], b[s] + 1))
        for rt in roots:
            if abs(rt) <= b[s]:
                y = list(x)
                y[s] = rt
                pts.append(y)
    if not pts:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(pts, dtype=object if max(b) > 2 ** 40 else np.int64)


def primitive_rows(pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return pts
    g = np.gcd.reduce(np.abs(pts).astype(np.int64), axis=1)
    return pts[g == 1]


def conic_zeros_in_box(q: QuadraticForm, bounds, budget: int = BOX_BUDGET) -> list[tuple[int, ...]]:
    """Primitive zeros y of q with |y_i| <= L_i, both y and -y listed, sorted."""
    lims = [math.floor(x) for x in bounds]
    pts = primitive_rows(box_zeros(q.gram2, lims, budget))
    return sorted(tuple(int(v) for v in row) for row in pts)


# ---------------------------------------------------------------------------
# lattice cover
# ---------------------------------------------------------------------------

def _vp(n: int, p: int) -> int:
    if n == 0:
        return 10 ** 9
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def _poly_content_vp(g2, p: int) -> int:
    """p-adic valuation of the content of the polynomial with doubled Gram g2."""
    vals = [g2[i][i] // 2 for i in range(3)] + [g2[i][j] for i in range(3) for j in range(i + 1, 3)]
    return min(_vp(v, p) for v in vals)


def _cross(u, v, p):
    return [(u[1] * v[2] - u[2] * v[1]) % p,
            (u[2] * v[0] - u[0] * v[2]) % p,
            (u[0] * v[1] - u[1] * v[0]) % p]


def _odd_zero_subspaces(g2, p: int) -> list[list[list[int]]]:
    """Subspaces of F_p^3 (as generator lists) covering the zero set of q mod p."""
    s = [[x % p for x in row] for row in g2]
    from .localarith import _rank_mod_p

    r = _rank_mod_p(s, p)
    if r == 1:
        ell = next(row for row in s if any(row))
        if ell[0]:
            return [[[(-ell[1]) % p, ell[0], 0], [(-ell[2]) % p, 0, ell[0]]]]
        if ell[1]:
            return [[[1, 0, 0], [0, (-ell[2]) % p, ell[1]]]]
        return [[[1, 0, 0], [0, 1, 0]]]
    if r != 2:
        raise AssertionError(f"unexpected rank {r} mod {p}")
    for i, j in ((0, 1), (0, 2), (1, 2)):
        mnr = (s[i][i] * s[j][j] - s[i][j] * s[j][i]) % p
        if mnr:
            break
    k = _cross(s[i], s[j], p)
    if legendre(-mnr, p) == -1:
        return [[k]]
    inv2 = pow(2, -1, p)
    alpha, beta, gamma = s[i][i] * inv2 % p, s[i][j] % p, s[j][j] * inv2 % p
    disc = (beta * beta - 4 * alpha * gamma) % p
    sd = sqrt_mod(disc, p)
    dirs = []
    if alpha:
        inv = pow(2 * alpha, -1, p)
        for sg in (1, -1):
            dirs.append((((-beta + sg * sd) * inv) % p, 1))
    else:
        dirs = [(1, 0), ((-gamma) % p, beta)]
    out = []
    for a_, b_ in dirs:
        v = [0, 0, 0]
        v[i] = a_
        v[j] = b_
        out.append([k, v])
    return out


_F2_POINTS = [v for v in itertools.product((0, 1), repeat=3) if any(v)]


def _f2_zero_subspaces(g2) -> list[list[list[int]]]:
    def q2(v):
        return (sum(g2[i][j] * v[i] * v[j] for i in range(3) for j in range(3)) // 2) % 2

    zeros = {v for v in _F2_POINTS if q2(v) == 0}
    out, covered = [], set()
    for u, v in itertools.combinations(_F2_POINTS, 2):
        w = tuple((a + b) % 2 for a, b in zip(u, v))
        if u < v < w and {u, v, w} <= zeros:
            out.append([list(u), list(v)])
            covered |= {u, v, w}
    for v in sorted(zeros - covered):
        out.append([list(v)])
    return out


def _hnf_key(basis_cols: list[list[int]]) -> tuple:
    vecs = linalg.lattice_basis(basis_cols)
    return tuple(tuple(v) for v in vecs)


def _prime_cover(a: list[list[int]], p: int, xi: int, depth_cap: int) -> list[list[list[int]]]:
    """Lattices (as lists of basis vectors) covering primitive zeros of a, for one prime."""
    results: dict[tuple, list[list[int]]] = {}

    def refine(vecs: list[list[int]], vdet: int) -> None:
        if all(x % p == 0 for v in vecs for x in v):
            return
        t = linalg.transpose(vecs)  # columns are basis vectors
        g2 = [[2 * x for x in row] for row in linalg.matmul(vecs, linalg.matmul(a, t))]
        e = _poly_content_vp(g2, p)
        g2 = [[x // p ** e for x in row] for row in g2]
        dv = _vp(linalg.det_bareiss(g2), p)
        good = dv == 1 if p == 2 else dv == 0
        if good or vdet >= depth_cap:
            key = _hnf_key(vecs)
            results.setdefault(key, [list(v) for v in key])
            return
        subs = _f2_zero_subspaces(g2) if p == 2 else _odd_zero_subspaces(g2, p)
        for gens in subs:
            sub = linalg.lattice_basis(gens + [[p if i == j else 0 for j in range(3)] for i in range(3)])
            child = [[sum(s_[k] * vecs[k][c] for k in range(3)) for c in range(3)] for s_ in sub]
            refine(child, vdet + _vp(linalg.det_bareiss(sub), p))

    refine([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 0)
    lats = list(results.values())
    # lattices are stored in Hermite form, so l1 is inside l2 iff adding it changes nothing
    keep = [l1 for i, l1 in enumerate(lats)
            if not any(j != i and linalg.lattice_basis(l2 + l1) == l2 for j, l2 in enumerate(lats))]
    return keep


def lattice_cover(q: QuadraticForm, depth_slack: int = 6) -> list[SublatticeBasis]:
    """Full-rank lattices in Z^3 whose union contains every primitive zero of q.

    Empty when a local obstruction shows q has no primitive zero (in particular
    whenever C(q) = 0).
    """
    if q.n != 3:
        raise InvalidInput("lattice_cover needs a ternary form")
    if not q.classical:
        raise NonClassical("lattice_cover needs an integral Gram matrix")
    a = q.int_matrix()
    delta = linalg.det_bareiss(a)
    if delta == 0:
        raise InvalidInput("form is singular")
    current = [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]
    for p, xi in (factorize(delta) if abs(delta) > 1 else ()):
        plist = _prime_cover(a, p, xi, 2 * xi + depth_slack)
        if not plist:
            return []
        current = [linalg.lattice_intersection(l1, l2) for l1 in current for l2 in plist]
    out = [SublatticeBasis.from_vectors(v) for v in current]
    out.sort(key=lambda s: (s.det_sq, s.vectors))
    return out

"""Exact counts of primitive zeros of quaternary forms in the box |x| <= B.

N(B) counts vectors: x and -x are both counted.  Two independent methods:

* ``brute_force_count`` walks (x1, x2, x3) and solves the quadratic in x4;
* ``sliced_count`` covers every primitive zero by a hyperplane c.x = 0 with
  small |c|, and enumerates zeros of the restricted conic on each slice.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .conics import box_zeros, lattice_cover, primitive_rows
from .errors import BadDimension, InvalidInput, NotPrimitive, TooLarge
from .forms import QuadraticForm, restrict_to_hyperplane
from .lattices import SublatticeBasis, box_adapted_basis, sup_norm

BRUTE_BUDGET = 401 ** 3  # (x1, x2, x3) grid points, i.e. B <= 200
SLICE_BOX_BUDGET = 10 ** 7
IDENTITY4 = [[int(i == j) for j in range(4)] for i in range(4)]


@dataclass(frozen=True)
class CountReport:
    B: int
    count: int
    method: str
    slices_visited: int = 0
    singular_slices: int = 0
    elapsed: float = 0.0


def _check_quaternary(Q: QuadraticForm, B: int) -> None:
    if Q.n != 4:
        raise BadDimension("counting needs a quaternary form")
    if B < 1:
        raise InvalidInput("B must be at least 1")


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------

def brute_force_points(Q: QuadraticForm, B: int, budget: int = BRUTE_BUDGET) -> np.ndarray:
    """All primitive zeros with |x| <= B as rows of an int64 array."""
    _check_quaternary(Q, B)
    if (2 * B + 1) ** 3 > budget:
        raise TooLarge(f"brute force at B={B} exceeds the grid budget {budget}")
    pts = box_zeros(Q.gram2, [B] * 4, budget=budget, solve=3)
    return primitive_rows(pts)


def brute_force_count(Q: QuadraticForm, B: int, budget: int = BRUTE_BUDGET) -> CountReport:
    t0 = time.perf_counter()
    n = len(brute_force_points(Q, B, budget))
    return CountReport(B, n, "brute", 0, 0, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# Siegel witnesses
# ---------------------------------------------------------------------------

def _shell_key(c: Sequence[int]):
    support = tuple(i for i, v in enumerate(c) if v)
    return (sup_norm(c), len(support), support, tuple(abs(v) for v in c), tuple(c))


def witness_candidates(radius: int) -> np.ndarray:
    """Primitive c with |c| <= radius, first nonzero entry positive, in witness order."""
    cands = []
    for c in np.ndindex(*(2 * radius + 1,) * 4):
        v = tuple(x - radius for x in c)
        if linalg.content(v) != 1 or linalg.canonical_sign(v) != v:
            continue
        cands.append(v)
    cands.sort(key=_shell_key)
    return np.array(cands, dtype=np.int64).reshape(-1, 4)


def siegel_witness(x: Sequence[int]) -> tuple[int, ...]:
    """First primitive c (by sup norm, then support, then entries) with c.x = 0."""
    x = tuple(int(v) for v in x)
    if len(x) != 4:
        raise BadDimension("witnesses are 4-vectors")
    if linalg.content(x) != 1:
        raise NotPrimitive(f"{x} is not primitive")
    r = 1
    while True:
        shell = [c for c in _shell(r)]
        hits = [c for c in shell if sum(a * b for a, b in zip(c, x)) == 0]
        if hits:
            return min(hits, key=_shell_key)
        r += 1


def _shell(r: int) -> Iterable[tuple[int, ...]]:
    for c in np.ndindex(*(2 * r + 1,) * 4):
        v = tuple(int(t) - r for t in c)
        if sup_norm(v) == r and linalg.content(v) == 1 and linalg.canonical_sign(v) == v:
            yield v


def siegel_witnesses(xs: np.ndarray, radius: int | None = None) -> np.ndarray:
    """Vectorised ``siegel_witness`` over the rows of ``xs``."""
    xs = np.asarray(xs, dtype=np.int64)
    if radius is None:
        radius = slicing_radius(int(np.abs(xs).max()) if len(xs) else 1)
    cands = witness_candidates(radius)
    out = np.zeros_like(xs)
    chunk = max(1, 2_000_000 // max(1, len(cands)))
    for s in range(0, len(xs), chunk):
        blk = xs[s:s + chunk]
        dots = blk @ cands.T
        first = np.argmax(dots == 0, axis=1)
        ok = dots[np.arange(len(blk)), first] == 0
        if not np.all(ok):
            raise AssertionError("witness radius too small")
        out[s:s + chunk] = cands[first]
    return out


def slicing_radius(B: int) -> int:
    """Smallest J for which every primitive x with |x| <= B has a witness of sup norm <= J.

    Pigeonhole: the (J+1)^4 vectors in [0, J]^4 take values c.x in an interval
    of length 4JB, so (J+1)^4 > 4JB + 1 forces a nonzero difference with c.x = 0.
    """
    j = 1
    while (j + 1) ** 4 <= 4 * j * B + 1:
        j += 1
    return j


# ---------------------------------------------------------------------------
# sliced counting
# ---------------------------------------------------------------------------

def _canon_rows(pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return pts
    nz = pts != 0
    first = np.argmax(nz, axis=1)
    sign = np.sign(pts[np.arange(len(pts)), first])
    return pts * sign[:, None]


def _points_in_lattice(Q: QuadraticForm, lat: SublatticeBasis, B: int) -> np.ndarray:
    """Primitive zeros x of Q in a rank-3 lattice with |x| <= B."""
    basis, bounds = box_adapted_basis(lat, IDENTITY4, 2 * B)
    f = np.array(basis.vectors, dtype=object)  # 3 x 4
    g = np.array(Q.gram2, dtype=object)
    g2 = (f @ g @ f.T).tolist()
    lam = box_zeros(g2, [math.floor(b) for b in bounds], budget=SLICE_BOX_BUDGET)
    if len(lam) == 0:
        return np.zeros((0, 4), dtype=np.int64)
    x = lam.astype(np.int64) @ np.array(basis.vectors, dtype=np.int64)
    x = x[np.all(np.abs(x) <= B, axis=1)]
    return primitive_rows(x)


def _rank2_points(vecs: Sequence[Sequence[int]], B: int) -> np.ndarray:
    """Primitive x in the rank-2 lattice spanned by ``vecs`` with |x| <= B."""
    lat = SublatticeBasis.from_vectors(vecs)
    basis, bounds = box_adapted_basis(lat, IDENTITY4, 2 * B)
    l1, l2 = (math.floor(b) for b in bounds)
    a = np.arange(-l1, l1 + 1, dtype=np.int64)
    b = np.arange(-l2, l2 + 1, dtype=np.int64)
    aa, bb = (m.ravel() for m in np.meshgrid(a, b, indexing="ij"))
    v = np.array(basis.vectors, dtype=np.int64)
    x = aa[:, None] * v[0] + bb[:, None] * v[1]
    x = x[np.all(np.abs(x) <= B, axis=1)]
    return primitive_rows(x)


def _binary_factor_directions(alpha: int, beta: int, gamma: int) -> list[tuple[int, int]]:
    """Primitive (a, b) with alpha a^2 + beta ab + gamma b^2 = 0; empty if irreducible over Q."""
    d = beta * beta - 4 * alpha * gamma
    if d < 0:
        return []
    s = math.isqrt(d)
    if s * s != d:
        return []
    out = []
    if alpha == 0:
        out = [(1, 0), (-gamma, beta)] if beta or gamma else [(1, 0), (0, 1)]
    else:
        for num in {-beta + s, -beta - s}:
            out.append((num, 2 * alpha))
    prim = set()
    for a, b in out:
        g = math.gcd(a, b)
        if g:
            prim.add(linalg.canonical_sign((a // g, b // g)))
    return sorted(prim)


def radical_completion(k: Sequence[int]) -> list[list[int]]:
    """Unimodular 3x3 matrix (columns) whose first column is the primitive vector k."""
    h, u, _ = linalg.column_hermite([list(k)])
    # k^T U = (1, 0, 0), so the columns of (U^-1)^T form a basis starting with k
    uinv = linalg.adjugate(u)
    d = linalg.det_bareiss(u)
    uinv = [[x * d for x in row] for row in uinv]  # det is +-1
    return linalg.transpose(uinv)


def singular_slice_planes(q: QuadraticForm) -> tuple[list[int], list[list[list[int]]]]:
    """Radical k of a rank-2 ternary form and the rational planes through it where q vanishes.

    Returns (k, planes) with each plane given by two coefficient vectors.
    """
    ker = linalg.integer_kernel(q.gram2)
    if len(ker) != 1:
        raise InvalidInput("restricted conic should have rank 2")
    k = list(linalg.primitive_part(ker[0]))
    w = radical_completion(k)
    wt = linalg.transpose(w)
    gw = linalg.matmul(wt, linalg.matmul(q.gram2, w))
    alpha, beta, gamma = gw[1][1] // 2, gw[1][2], gw[2][2] // 2
    planes = []
    for a, b in _binary_factor_directions(alpha, beta, gamma):
        v = [a * w[i][1] + b * w[i][2] for i in range(3)]
        planes.append([k, v])
    return k, planes


def _slice_points(Q: QuadraticForm, c: tuple[int, ...], B: int) -> tuple[np.ndarray, bool]:
    rc = restrict_to_hyperplane(Q, c)
    e = rc.basisE
    if rc.singular:
        k, planes = singular_slice_planes(rc.q)
        out = []
        if planes:
            for pl in planes:
                vecs = [e.combine(v) for v in pl]
                out.append(_rank2_points(vecs, B))
        else:
            x = np.array([e.combine(k)], dtype=np.int64)
            out.append(x[np.all(np.abs(x) <= B, axis=1)])
        return np.concatenate(out), True
    if Q.classical:
        lats = lattice_cover(rc.q)
    else:
        lats = [SublatticeBasis.from_vectors(linalg.identity(3))]
    out = [np.zeros((0, 4), dtype=np.int64)]
    for lam in lats:
        hat = SublatticeBasis.from_vectors([e.combine(h) for h in lam.vectors])
        out.append(_points_in_lattice(Q, hat, B))
    return np.concatenate(out), False


def slice_vectors(B: int) -> list[tuple[int, ...]]:
    """Primitive c (up to sign) with |c| <= slicing_radius(B)."""
    j = slicing_radius(B)
    out = []
    for t in np.ndindex(*(2 * j + 1,) * 4):
        v = tuple(int(s) - j for s in t)
        if linalg.content(v) == 1 and linalg.canonical_sign(v) == v:
            out.append(v)
    return out


def _work(args) -> tuple[np.ndarray, int]:
    Q, cs, B = args
    pts, sing = [np.zeros((0, 4), dtype=np.int64)], 0
    for c in cs:
        p, s = _slice_points(Q, c, B)
        sing += s
        if len(p):
            pts.append(_canon_rows(p))
    allp = np.concatenate(pts)
    return (np.unique(allp, axis=0) if len(allp) else allp), sing


def sliced_points(Q: QuadraticForm, B: int, workers: int = 1) -> tuple[np.ndarray, int, int]:
    """Canonical-sign primitive zeros with |x| <= B, slices visited, singular slices."""
    _check_quaternary(Q, B)
    cs = slice_vectors(B)
    if workers <= 1:
        chunks = [cs]
    else:
        chunks = [cs[i::workers] for i in range(workers)]
    jobs = [(Q, ch, B) for ch in chunks]
    if workers <= 1:
        results = [_work(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_work, jobs))
    pts = np.concatenate([r[0] for r in results]) if results else np.zeros((0, 4), dtype=np.int64)
    pts = np.unique(pts, axis=0) if len(pts) else pts
    sing = sum(r[1] for r in results)
    return pts, len(cs), sing


def sliced_count(Q: QuadraticForm, B: int, workers: int = 1) -> CountReport:
    t0 = time.perf_counter()
    pts, visited, sing = sliced_points(Q, B, workers)
    return CountReport(B, 2 * len(pts), "sliced", visited, sing, time.perf_counter() - t0)

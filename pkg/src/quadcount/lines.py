"""Rational lines on a quadric surface with square discriminant.

A line is stored through the rank-2 lattice of its integer points.  Every
such line lies in some hyperplane c.x = 0 whose restricted conic is then a
line pair, so Q*(c) = 0; scanning small c with Q*(c) = 0 and splitting the
singular conic finds all lines of bounded determinant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .counting import _rank2_points, singular_slice_planes
from .errors import BadDimension
from .forms import QuadraticForm, dual_form, restrict_to_hyperplane
from .lattices import SublatticeBasis, reduced_basis

PLUCKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def plucker(u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(u[i] * v[j] - u[j] * v[i] for i, j in PLUCKER_PAIRS)


def plucker_relation(p: Sequence[int]) -> int:
    """p12 p34 - p13 p24 + p14 p23, zero exactly on decomposable vectors."""
    return p[0] * p[5] - p[1] * p[4] + p[2] * p[3]


@dataclass(frozen=True)
class RationalLine:
    basis: tuple[tuple[int, ...], tuple[int, ...]]
    plucker: tuple[int, ...]
    det_sq: int

    @classmethod
    def from_vectors(cls, u: Sequence[int], v: Sequence[int]) -> "RationalLine":
        """Line through the saturation of span(u, v) in Z^4."""
        # saturate: the integer points of the real span are the kernel of its annihilator
        ann = linalg.integer_kernel([list(u), list(v)])
        sat = linalg.integer_kernel(ann)
        red = reduced_basis(SublatticeBasis.from_vectors(sat))
        b1, b2 = (linalg.canonical_sign(w) for w in red.vectors)
        p = linalg.canonical_sign(plucker(b1, b2))
        return cls((b1, b2), p, red.det_sq)

    @property
    def det(self) -> float:
        return math.sqrt(self.det_sq)

    def vanishes_on(self, Q: QuadraticForm) -> bool:
        """Q(s g1 + t g2) is identically zero in (s, t)."""
        g1, g2 = self.basis
        cross = sum(g1[i] * Q.gram2[i][j] * g2[j] for i in range(4) for j in range(4))
        return Q(g1) == 0 and Q(g2) == 0 and cross == 0


def _is_rational_square(x: Fraction) -> bool:
    x = Fraction(x)
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def line_scan_radius(H: int) -> int:
    """Sup-norm radius guaranteeing a c with Q*(c) = 0 orthogonal to each line of det <= H.

    The orthogonal lattice of a line has rank 2 and determinant d(L), so its
    first minimum is at most sqrt(2 d(L) / sqrt(3)).
    """
    return math.isqrt(math.floor(2 * H / math.sqrt(3))) + 1


def _dual_zeros(Q: QuadraticForm, radius: int) -> list[tuple[int, ...]]:
    """Primitive c (first nonzero positive) with |c| <= radius and Q*(c) = 0."""
    dual = dual_form(Q)
    den = 1
    for row in dual.matrix:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    m = np.array([[int(x * den) for x in row] for row in dual.matrix], dtype=object)
    r = np.arange(-radius, radius + 1, dtype=np.int64)
    c2, c3, c4 = (a.ravel() for a in np.meshgrid(r, r, r, indexing="ij"))
    rest = np.stack([c2, c3, c4], axis=1)
    mi = m.astype(np.int64) if np.abs(m).max() * (4 * radius) ** 2 < 2 ** 62 else None
    out = []
    for c1 in range(0, radius + 1):
        full = np.concatenate([np.full((len(rest), 1), c1, dtype=np.int64), rest], axis=1)
        if mi is not None:
            vals = np.einsum("ij,jk,ik->i", full, mi, full)
        else:
            fo = full.astype(object)
            vals = np.array([int(v) for v in ((fo @ m) * fo).sum(axis=1)], dtype=object)
        for row in full[np.nonzero(vals == 0)[0]]:
            c = tuple(int(v) for v in row)
            if any(c) and linalg.content(c) == 1 and linalg.canonical_sign(c) == c:
                out.append(c)
    return out


def lines_up_to_height(Q: QuadraticForm, H: int) -> list[RationalLine]:
    """All rational lines on Q = 0 with d(L) <= H, sorted by d(L).

    Empty when the discriminant is not a rational square.
    """
    if Q.n != 4:
        raise BadDimension("lines live on quaternary quadrics")
    if H < 1 or not _is_rational_square(Q.disc):
        return []
    found: dict[tuple[int, ...], RationalLine] = {}
    for c in _dual_zeros(Q, line_scan_radius(H)):
        rc = restrict_to_hyperplane(Q, c)
        _, planes = singular_slice_planes(rc.q)
        for pl in planes:
            u, v = (rc.basisE.combine(w) for w in pl)
            line = RationalLine.from_vectors(u, v)
            if line.det_sq <= H * H:
                found.setdefault(line.plucker, line)
    return sorted(found.values(), key=lambda l: (l.det_sq, l.plucker))


def line_point_count(line: RationalLine, B: int) -> int:
    """Primitive x on the line's lattice with |x| <= B (x and -x both counted)."""
    if B < 1:
        return 0
    return len(_rank2_points(line.basis, B))

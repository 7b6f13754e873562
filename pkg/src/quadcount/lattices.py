"""Integer sublattices of Z^n: kernel lattices, reduced and box-adapted bases.

Determinants are kept squared (``det_sq`` is the Gram determinant) so that
every identity can be checked in exact integer arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DegenerateEllipsoid, InvalidInput, NotPrimitive

COEFF_BOUND_CONSTANT = 4 ** 8  # n^(2n) with n = 4


@dataclass(frozen=True)
class SublatticeBasis:
    vectors: tuple[tuple[int, ...], ...]
    det_sq: int

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[int]]) -> "SublatticeBasis":
        vecs = tuple(tuple(int(x) for x in v) for v in vectors)
        if not vecs:
            raise InvalidInput("a basis needs at least one vector")
        d = linalg.gram_det(vecs)
        if d <= 0:
            raise InvalidInput("basis vectors are linearly dependent")
        return cls(vecs, d)

    @property
    def rank(self) -> int:
        return len(self.vectors)

    @property
    def ambient(self) -> int:
        return len(self.vectors[0])

    def coordinates(self, x: Sequence[int]):
        return linalg.solve_coordinates(self.vectors, x)

    def __contains__(self, x) -> bool:
        return linalg.in_lattice(self.vectors, x)

    def combine(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(c * v[i] for c, v in zip(coeffs, self.vectors)) for i in range(self.ambient))

    def transformed(self, t: Sequence[Sequence[int]]) -> "SublatticeBasis":
        """Basis whose j-th vector is sum_i t[i][j] * vectors[i]."""
        k = self.rank
        new = [self.combine([t[i][j] for i in range(k)]) for j in range(k)]
        return SublatticeBasis.from_vectors(new)


@dataclass(frozen=True)
class BoxBounds:
    L: tuple[float, ...]

    def __post_init__(self):
        if not all(math.isfinite(x) and x > 0 for x in self.L):
            raise InvalidInput(f"box bounds must be positive and finite: {self.L}")

    def __iter__(self):
        return iter(self.L)

    def __getitem__(self, i):
        return self.L[i]

    @property
    def product(self) -> float:
        return math.prod(self.L)


def sup_norm(v: Sequence[int]) -> int:
    return max(abs(x) for x in v)


# ---------------------------------------------------------------------------
# reduction on a Gram matrix
# ---------------------------------------------------------------------------

def _integral_gram(g) -> list[list[int]]:
    """Scale a rational Gram matrix to an integer one (LLL is scale invariant)."""
    fr = [[Fraction(x) for x in row] for row in g]
    den = 1
    for row in fr:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return [[int(x * den) for x in row] for row in fr]


def lll_gram(g: Sequence[Sequence], delta: Fraction = Fraction(99, 100)) -> list[list[int]]:
    """LLL on an exact positive-definite Gram matrix, in integer arithmetic.

    Works with the integral Gram-Schmidt data d_i (leading principal minors)
    and lambda_ij = d_j mu_ij, so no fractions appear.  Returns the unimodular
    transform ``T`` (columns are new basis vectors in old coordinates).
    """
    a = _integral_gram(g)
    n = len(a)
    dp, dq = delta.numerator, delta.denominator
    h = [[int(i == j) for j in range(n)] for i in range(n)]  # h[k] = k-th new vector (row)
    lam = [[0] * n for _ in range(n)]
    d = [1] + [0] * n  # d[i + 1] belongs to vector i

    def dot(i, j):
        hi, hj = h[i], h[j]
        return sum(hi[r] * a[r][c] * hj[c] for r in range(n) if hi[r] for c in range(n) if hj[c])

    def redi(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            h[k] = [x - q * y for x, y in zip(h[k], h[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swapi(k, kmax):
        h[k], h[k - 1] = h[k - 1], h[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lk = lam[k][k - 1]
        bnew = (d[k - 1] * d[k + 1] + lk * lk) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lk * t) // d[k]
            lam[i][k - 1] = (bnew * t + lk * lam[i][k]) // d[k + 1]
        d[k] = bnew

    if n == 0:
        return h
    d[1] = a[0][0]
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = dot(k, j)
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u <= 0:
                        raise InvalidInput("Gram matrix is not positive definite")
                    d[k + 1] = u
        while True:
            redi(k, k - 1)
            lk = lam[k][k - 1]
            if dq * d[k + 1] * d[k - 1] < dp * d[k] * d[k] - dq * lk * lk:
                swapi(k, kmax)
                k = max(1, k - 1)
            else:
                for l in range(k - 2, -1, -1):
                    redi(k, l)
                k += 1
                break
    return linalg.transpose(h)


def _greedy_sup_pass(vectors: list[list[int]]) -> list[list[int]]:
    """Shorten vectors in sup-norm by unimodular moves v_j += sum e_i v_i, e_i in {-1,0,1}."""
    k = len(vectors)
    improved = True
    while improved:
        improved = False
        for j in range(k):
            others = [i for i in range(k) if i != j]
            best = vectors[j]
            for coeffs in itertools.product((-1, 0, 1), repeat=len(others)):
                if not any(coeffs):
                    continue
                cand = [vectors[j][a] + sum(e * vectors[i][a] for e, i in zip(coeffs, others))
                        for a in range(len(best))]
                if sup_norm(cand) < sup_norm(best):
                    best = cand
            if best is not vectors[j]:
                vectors[j] = best
                improved = True
    return vectors


def reduced_basis(lat: SublatticeBasis) -> SublatticeBasis:
    """Reduced basis: exact LLL on the Euclidean Gram matrix, then a greedy sup-norm pass.

    Coefficient extraction satisfies |c_j| <= 4^8 |x| / |g_j| (sup norms).
    """
    t = lll_gram(linalg.gram(lat.vectors))
    red = lat.transformed(t)
    vecs = _greedy_sup_pass([list(v) for v in red.vectors])
    vecs.sort(key=lambda v: (sup_norm(v), [-abs(x) for x in v]))
    return SublatticeBasis(tuple(tuple(v) for v in vecs), lat.det_sq)


def coefficient_constant(lat: SublatticeBasis, x: Sequence[int]) -> Fraction:
    """max_j |c_j| |g_j| / |x| for x = sum c_j g_j (sup norms); 0 for x = 0."""
    if not any(x):
        return Fraction(0)
    coords = lat.coordinates(x)
    if coords is None:
        raise InvalidInput(f"{tuple(x)} is not in the span of the lattice")
    nx = sup_norm(x)
    return max(abs(c) * sup_norm(g) / nx for c, g in zip(coords, lat.vectors))


# ---------------------------------------------------------------------------
# kernel lattice and hat lattice
# ---------------------------------------------------------------------------

def kernel_lattice(c: Sequence[int]) -> SublatticeBasis:
    """Reduced basis of {x in Z^n : c.x = 0}; det_sq = |c|_2^2 for primitive c."""
    c = [int(v) for v in c]
    if linalg.content(c) != 1:
        raise NotPrimitive(f"{tuple(c)} is not primitive")
    ker = linalg.integer_kernel([c])
    return reduced_basis(SublatticeBasis.from_vectors(ker))


def hat_lattice(coeff_lat: SublatticeBasis, basis_e: SublatticeBasis) -> SublatticeBasis:
    """Image {sum y_i e_i : y in coeff_lat} of a coefficient lattice under a basis E."""
    if coeff_lat.ambient != basis_e.rank:
        raise InvalidInput("coefficient lattice dimension must equal the rank of E")
    vecs = [basis_e.combine(h) for h in coeff_lat.vectors]
    return SublatticeBasis.from_vectors(vecs)


# ---------------------------------------------------------------------------
# box-adapted basis for an ellipsoid
# ---------------------------------------------------------------------------

def _ball_volume(k: int) -> float:
    return math.pi ** (k / 2) / math.gamma(k / 2 + 1)


def _restricted_gram(lat: SublatticeBasis, ellipsoid) -> list[list]:
    if all(isinstance(x, int) for row in ellipsoid for x in row):
        e = ellipsoid
    else:
        e = [[Fraction(x) for x in row] for row in ellipsoid]
    n = lat.ambient
    if len(e) != n or any(len(row) != n for row in e):
        raise InvalidInput("ellipsoid matrix must match the ambient dimension")
    v = lat.vectors
    return [[sum(v[a][i] * e[i][j] * v[b][j] for i in range(n) for j in range(n))
             for b in range(lat.rank)] for a in range(lat.rank)]


def box_adapted_basis(lat: SublatticeBasis, ellipsoid, r: float) -> tuple[SublatticeBasis, BoxBounds]:
    """Basis f_j and bounds L_j with |lambda_j| <= L_j for every lattice point
    x = sum lambda_j f_j satisfying x^T ellipsoid x <= r^2.

    ``ellipsoid`` is an ambient symmetric matrix; it only needs to be positive
    definite on the real span of the lattice.
    """
    if not r > 0:
        raise InvalidInput("radius must be positive")
    f = _restricted_gram(lat, ellipsoid)
    ev = np.linalg.eigvalsh(np.array([[float(x) for x in row] for row in f]))
    if ev[0] <= 1e-12 * max(1.0, abs(ev[-1])):
        raise DegenerateEllipsoid("ellipsoid is not positive definite on the lattice span")
    t = lll_gram(f)
    new = lat.transformed(t)
    f2 = linalg.matmul(linalg.transpose(t), linalg.matmul(f, t))
    inv = _inverse_diagonal(f2)
    # tight bound r * sqrt((F^-1)_jj), nudged up against float rounding
    bounds = tuple(r * math.sqrt(float(d)) * (1 + 1e-12) + 1e-12 for d in inv)
    return new, BoxBounds(bounds)


def _inverse_diagonal(f) -> list[Fraction]:
    adj = linalg.adjugate(f)
    d = linalg.det_rational(f)
    return [Fraction(adj[j][j]) / d for j in range(len(f))]


def ellipsoid_measure(lat: SublatticeBasis, ellipsoid, r: float) -> float:
    """Volume of {x in span(lat) : x^T E x <= r^2} inside the real span."""
    f = _restricted_gram(lat, ellipsoid)
    k = lat.rank
    return _ball_volume(k) * r ** k * math.sqrt(lat.det_sq) / math.sqrt(float(linalg.det_rational(f)))


def box_product_ratio(lat: SublatticeBasis, ellipsoid, r: float) -> float:
    """L_1...L_k / (meas(E) / det(lattice)) for the box-adapted basis."""
    _, bounds = box_adapted_basis(lat, ellipsoid, r)
    return bounds.product / (ellipsoid_measure(lat, ellipsoid, r) / math.sqrt(lat.det_sq))


def lattice_points_in_ellipsoid(lat: SublatticeBasis, ellipsoid, r: float) -> list[tuple[int, ...]]:
    """All lattice points with x^T E x <= r^2, via the box-adapted basis."""
    basis, bounds = box_adapted_basis(lat, ellipsoid, r)
    e = [[Fraction(x) for x in row] for row in ellipsoid]
    n = lat.ambient
    r2 = Fraction(r) ** 2
    out = []
    ranges = [range(-math.floor(b), math.floor(b) + 1) for b in bounds]
    for lam in itertools.product(*ranges):
        x = basis.combine(lam)
        if sum(x[i] * e[i][j] * x[j] for i in range(n) for j in range(n)) <= r2:
            out.append(x)
    return out

"""Integral quadratic forms in three or four variables.

A form is stored through ``gram2``, twice its Gram matrix, so that every
integral polynomial form has an integer representation:

    Q(x) = x^T gram2 x / 2.

The Gram matrix ``M = gram2 / 2`` has determinant ``disc`` (kept as an exact
``Fraction``).  Forms whose ``M`` is integral are *classical*; the local
arithmetic and the lattice cover only accept those.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .errors import BadDimension, InvalidInput, NonClassical, NotPrimitive, SingularForm


@dataclass(frozen=True)
class QuadraticForm:
    n: int
    gram2: tuple[tuple[int, ...], ...]
    disc: Fraction
    height: int
    classical: bool

    @classmethod
    def from_gram2(cls, gram2: Sequence[Sequence[int]], allow_singular: bool = False) -> "QuadraticForm":
        g = tuple(tuple(int(x) for x in row) for row in gram2)
        n = len(g)
        if n not in (2, 3, 4) or any(len(row) != n for row in g):
            raise BadDimension(f"expected a square matrix of size 2..4, got {n} rows")
        for i in range(n):
            if g[i][i] % 2:
                raise InvalidInput("diagonal of gram2 must be even (integral x_i^2 coefficients)")
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise InvalidInput("gram2 must be symmetric")
        d = Fraction(linalg.det_bareiss(g), 2 ** n)
        if d == 0 and not allow_singular:
            raise SingularForm("form is singular (zero discriminant)")
        height = max([abs(g[i][i]) // 2 for i in range(n)]
                     + [abs(g[i][j]) for i in range(n) for j in range(i + 1, n)])
        classical = all(x % 2 == 0 for row in g for x in row)
        return cls(n, g, d, height, classical)

    # -- polynomial view -------------------------------------------------
    def coeffs(self) -> dict[tuple[int, int], int]:
        """Polynomial coefficients keyed by 0-based (i, j), i <= j; zeros omitted."""
        out = {}
        for i in range(self.n):
            for j in range(i, self.n):
                v = self.gram2[i][i] // 2 if i == j else self.gram2[i][j]
                if v:
                    out[(i, j)] = v
        return out

    def __call__(self, x: Sequence[int]) -> int:
        g = self.gram2
        s = 0
        for i in range(self.n):
            xi = x[i]
            if xi:
                s += xi * sum(g[i][j] * x[j] for j in range(self.n))
        return s // 2

    @property
    def matrix(self) -> list[list[Fraction]]:
        return [[Fraction(x, 2) for x in row] for row in self.gram2]

    def int_matrix(self) -> list[list[int]]:
        if not self.classical:
            raise NonClassical("Gram matrix is not integral")
        return [[x // 2 for x in row] for row in self.gram2]

    def int_disc(self) -> int:
        if self.disc.denominator != 1:
            raise NonClassical(f"discriminant {self.disc} is not an integer")
        return self.disc.numerator

    def scaled(self, k: int) -> "QuadraticForm":
        return QuadraticForm.from_gram2([[k * x for x in row] for row in self.gram2])

    def to_json(self) -> dict:
        coeffs = {}
        for i in range(self.n):
            for j in range(i, self.n):
                v = self.gram2[i][i] // 2 if i == j else self.gram2[i][j]
                coeffs[f"{i + 1},{j + 1}"] = v
        return {"n": self.n, "coeffs": coeffs}


def build_form(n: int, coeffs: Mapping[tuple[int, int], int]) -> QuadraticForm:
    """Form with polynomial coefficients ``coeffs[(i, j)]`` (0-based, i <= j)."""
    if n not in (3, 4):
        raise BadDimension(f"n must be 3 or 4, got {n}")
    g = [[0] * n for _ in range(n)]
    for (i, j), v in coeffs.items():
        if not (0 <= i <= j < n):
            raise InvalidInput(f"bad coefficient index {(i, j)} for n={n}")
        v = int(v)
        if i == j:
            g[i][i] += 2 * v
        else:
            g[i][j] += v
            g[j][i] += v
    return QuadraticForm.from_gram2(g)


def diagonal_form(*entries: int) -> QuadraticForm:
    return build_form(len(entries), {(i, i): a for i, a in enumerate(entries)})


def form_from_json(obj: Mapping | str) -> QuadraticForm:
    """Parse the form file format ``{"n": 4, "coeffs": {"1,1": 1, ...}}``."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        n = int(obj["n"])
        raw = obj["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed form file: {exc}") from None
    coeffs = {}
    for key, val in raw.items():
        try:
            i, j = (int(t) for t in str(key).split(","))
            v = int(val) if not isinstance(val, str) else int(val.strip())
        except ValueError:
            raise InvalidInput(f"bad coefficient entry {key!r}: {val!r}") from None
        if isinstance(val, float):
            raise InvalidInput(f"coefficient {key!r} must be an integer")
        if i > j:
            raise InvalidInput(f"coefficient key {key!r} must have i <= j")
        coeffs[(i - 1, j - 1)] = coeffs.get((i - 1, j - 1), 0) + v
    return build_form(n, coeffs)


def load_form(path) -> QuadraticForm:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{path}: not valid JSON ({exc})") from None
    return form_from_json(obj)


# ---------------------------------------------------------------------------
# dual form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DualForm:
    """Quadratic form with (rational) Gram matrix ``adj(M)``.

    ``source_disc`` is the discriminant of the form it was built from; the
    local arithmetic needs it for the character and for R(N).
    """

    n: int
    matrix: tuple[tuple[Fraction, ...], ...]
    source_disc: Fraction
    disc: Fraction = field(default=Fraction(0))

    @property
    def integral(self) -> bool:
        return all(x.denominator == 1 for row in self.matrix for x in row)

    def int_matrix(self) -> list[list[int]]:
        if not self.integral:
            raise NonClassical("dual form has non-integral Gram matrix")
        return [[x.numerator for x in row] for row in self.matrix]

    def __post_init__(self):
        ints = None
        if self.integral:
            ints = tuple(tuple(x.numerator for x in row) for row in self.matrix)
        object.__setattr__(self, "_ints", ints)

    def __call__(self, x: Sequence[int]):
        m = self._ints if self._ints is not None else self.matrix
        n = self.n
        s = sum(m[i][j] * x[i] * x[j] for i in range(n) for j in range(n))
        if isinstance(s, Fraction):
            return s.numerator if s.denominator == 1 else s
        return s

    @property
    def source_int_disc(self) -> int:
        if self.source_disc.denominator != 1:
            raise NonClassical("source discriminant is not an integer")
        return self.source_disc.numerator


def dual_form(form: QuadraticForm | DualForm) -> DualForm:
    """Adjugate form; applying it twice to a quaternary Q gives Delta_Q^2 * M."""
    m = form.matrix
    adj = linalg.adjugate([[Fraction(x) for x in row] for row in m])
    adj_t = tuple(tuple(Fraction(x) for x in row) for row in adj)
    return DualForm(form.n, adj_t, Fraction(form.disc), Fraction(linalg.det_rational(adj_t)))


def evaluate(form: QuadraticForm | DualForm, x: Sequence[int]):
    return form(x)


# ---------------------------------------------------------------------------
# restriction to a hyperplane
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RestrictedConic:
    q: QuadraticForm
    basisE: "SublatticeBasis"  # noqa: F821
    c: tuple[int, ...]

    @property
    def singular(self) -> bool:
        return self.q.disc == 0


def restrict_to_hyperplane(Q: QuadraticForm, c: Sequence[int]) -> RestrictedConic:
    """Q on the kernel lattice of ``c``, in coordinates of a basis of that lattice.

    The restriction may be singular (exactly when Q*(c) = 0); it then has rank 2.
    """
    from .lattices import kernel_lattice

    if Q.n != 4:
        raise BadDimension("restriction needs a quaternary form")
    c = tuple(int(v) for v in c)
    if linalg.content(c) != 1:
        raise NotPrimitive(f"{c} is not primitive")
    lat = kernel_lattice(c)
    e = lat.vectors
    g2 = [[sum(e[a][i] * Q.gram2[i][j] * e[b][j] for i in range(4) for j in range(4))
           for b in range(3)] for a in range(3)]
    q = QuadraticForm.from_gram2(g2, allow_singular=True)
    return RestrictedConic(q, lat, c)


def restricted_spectrum(Q: QuadraticForm, c: Sequence[int]) -> tuple[float, float, float]:
    """Eigenvalues of Q on the real orthogonal complement of ``c``, by decreasing modulus."""
    c = np.asarray(c, dtype=float)
    if not np.any(c):
        raise InvalidInput("c must be nonzero")
    m = np.asarray([[float(x) for x in row] for row in Q.matrix])
    e4 = c / np.linalg.norm(c)
    basis = []
    for v in np.eye(4):
        w = v - (v @ e4) * e4
        for b in basis:
            w -= (w @ b) * b
        nrm = np.linalg.norm(w)
        if nrm > 1e-9:
            basis.append(w / nrm)
        if len(basis) == 3:
            break
    u = np.column_stack(basis)
    mu = np.linalg.eigvalsh(u.T @ m @ u)
    mu = sorted(mu, key=abs, reverse=True)
    return float(mu[0]), float(mu[1]), float(mu[2])

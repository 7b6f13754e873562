"""Exact linear algebra over Z and Q for small matrices.

Matrices are plain lists (or tuples) of rows holding Python ints or
``Fraction``s.  Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = Sequence[Sequence]


def transpose(a: Matrix) -> list[list]:
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det_bareiss(a: Matrix) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    m = [list(row) for row in a]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det_rational(a: Matrix) -> Fraction:
    """Determinant over Q by Gaussian elimination (accepts ints or Fractions)."""
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    result = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            result = -result
        result *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return result


def det(a: Matrix):
    """Exact determinant; integer input gives an int, otherwise a Fraction."""
    if all(isinstance(x, int) for row in a for x in row):
        return det_bareiss(a)
    return det_rational(a)


def minor(a: Matrix, i: int, j: int) -> list[list]:
    return [row[:j] + row[j + 1:] for k, row in enumerate(map(list, a)) if k != i]


def adjugate(a: Matrix) -> list[list]:
    """Classical adjoint: adj(A)[i][j] = (-1)^(i+j) det(A with row j, col i removed)."""
    n = len(a)
    if n == 1:
        return [[1]]
    return [[(-1) ** (i + j) * det(minor(a, j, i)) for j in range(n)] for i in range(n)]


def rank_rational(a: Matrix) -> int:
    m = [[Fraction(x) for x in row] for row in a]
    rows, cols = len(m), len(m[0]) if m else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def column_hermite(a: Matrix) -> tuple[list[list[int]], list[list[int]], int]:
    """Column-style echelon reduction over Z.

    Returns ``(H, U, r)`` with ``U`` unimodular and ``A U = H`` where the first
    ``r`` columns of ``H`` are independent and the remaining ones are zero.
    """
    h = [list(map(int, row)) for row in a]
    m = len(h)
    n = len(h[0]) if m else 0
    u = identity(n)

    def colop(j_dst: int, j_src: int, f: int) -> None:
        for row in h:
            row[j_dst] -= f * row[j_src]
        for row in u:
            row[j_dst] -= f * row[j_src]

    def swap(j1: int, j2: int) -> None:
        for row in h:
            row[j1], row[j2] = row[j2], row[j1]
        for row in u:
            row[j1], row[j2] = row[j2], row[j1]

    def negate(j: int) -> None:
        for row in h:
            row[j] = -row[j]
        for row in u:
            row[j] = -row[j]

    piv = 0
    for i in range(m):
        if piv >= n:
            break
        while True:
            nz = [j for j in range(piv, n) if h[i][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(h[i][j]))
            if jmin != piv:
                swap(jmin, piv)
            done = True
            for j in range(piv + 1, n):
                if h[i][j] != 0:
                    colop(j, piv, h[i][j] // h[i][piv])
                    if h[i][j] != 0:
                        done = False
            if done:
                break
        if h[i][piv] != 0:
            if h[i][piv] < 0:
                negate(piv)
            for j in range(piv):
                if h[i][j] != 0:
                    colop(j, piv, h[i][j] // h[i][piv])
            piv += 1
    return h, u, piv


def integer_kernel(a: Matrix) -> list[list[int]]:
    """Basis (as vectors) of {x in Z^n : A x = 0}."""
    _, u, r = column_hermite(a)
    n = len(u)
    return [[u[i][j] for i in range(n)] for j in range(r, n)]


def lattice_basis(generators: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of the Z-span of the given integer vectors (returned as vectors)."""
    cols = transpose(generators)
    h, _, r = column_hermite(cols)
    return [[h[i][j] for i in range(len(h))] for j in range(r)]


def lattice_intersection(b1: Sequence[Sequence[int]], b2: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of the intersection of two lattices given by bases (vectors)."""
    k1 = len(b1)
    big = transpose(list(b1) + [[-x for x in v] for v in b2])
    ker = integer_kernel(big)
    gens = [[sum(k[j] * b1[j][i] for j in range(k1)) for i in range(len(b1[0]))] for k in ker]
    return lattice_basis(gens) if gens else []


def solve_coordinates(basis: Sequence[Sequence[int]], x: Sequence[int]):
    """Rational coordinates of ``x`` in the span of ``basis``; ``None`` if outside."""
    k = len(basis)
    n = len(x)
    aug = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(x[i])] for i in range(n)]
    r = 0
    pivots = []
    for c in range(k):
        piv = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][k] != 0 for i in range(r, n)):
        return None
    coords = [Fraction(0)] * k
    for row, c in enumerate(pivots):
        coords[c] = aug[row][k]
    return coords


def in_lattice(basis: Sequence[Sequence[int]], x: Sequence[int]) -> bool:
    coords = solve_coordinates(basis, x)
    return coords is not None and all(c.denominator == 1 for c in coords)


def gram(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[sum(a * b for a, b in zip(u, v)) for v in vectors] for u in vectors]


def gram_det(vectors: Sequence[Sequence[int]]) -> int:
    return det_bareiss(gram(vectors))


def content(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


def is_primitive(v: Sequence[int]) -> bool:
    return content(v) == 1


def primitive_part(v: Sequence[int]) -> tuple[int, ...]:
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    return tuple(int(x) // g for x in v)


def canonical_sign(v: Sequence[int]) -> tuple[int, ...]:
    """Representative of {v, -v} whose first nonzero entry is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)

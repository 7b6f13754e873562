"""Local and multiplicative arithmetic attached to a quadratic form.

Covers the character of the discriminant, the Euler products Pi_B and
frakS, the divisor-like weight R(N), local densities rho(m) of the dual form,
complete exponential sums, the ternary invariants chi_q / D(q) / C(q), and
windowed sums of R over values of the dual form.

Integer-only routines require classical forms (integral Gram matrix), so that
the discriminant and Q*(x) are integers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint, primerange

from .errors import InvariantViolation, InvalidInput, NonClassical, TooLarge, ZeroInput
from .forms import DualForm, QuadraticForm

RESIDUE_BUDGET = 10 ** 9  # residue tuples enumerated by rho / exp_sum
BOX_BUDGET = 10 ** 8  # lattice points enumerated by U_count / S_h_window
INT64_SAFE = 2 ** 62


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of |n| as sorted (p, e) pairs."""
    n = abs(int(n))
    if n == 0:
        raise ZeroInput("cannot factor 0")
    return tuple(sorted(factorint(n).items()))


def squarefull_part(n: int) -> int:
    """Product of p^e over p^e || n with e >= 2."""
    if n == 0:
        raise ZeroInput("square-full part of 0 is undefined")
    return math.prod(p ** e for p, e in factorize(n) if e >= 2)


def varpi(m: int) -> Fraction:
    """prod_{p | m} (1 + 1/p)."""
    if m == 0:
        raise ZeroInput("varpi(0) is undefined")
    return math.prod((Fraction(p + 1, p) for p, _ in factorize(m)), start=Fraction(1))


def tau(n: int) -> int:
    return math.prod(e + 1 for _, e in factorize(n))


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def legendre(a: int, p: int) -> int:
    """Legendre symbol for an odd prime p, by Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def chi(delta: int, p: int) -> int:
    """Character of the discriminant at the prime p.

    Legendre symbol for odd p; at p = 2 the Kronecker convention
    (+1 if delta = +-1 mod 8, -1 if delta = +-3 mod 8, 0 if delta even).
    """
    if delta == 0:
        raise ZeroInput("discriminant must be nonzero")
    if p == 2:
        if delta % 2 == 0:
            return 0
        return 1 if delta % 8 in (1, 7) else -1
    return legendre(delta, p)


class CharacterTable:
    """Cached values of chi(delta, p) for primes up to ``bound``."""

    def __init__(self, delta: int, bound: int = 1000):
        if delta == 0:
            raise ZeroInput("discriminant must be nonzero")
        self.delta = int(delta)
        self.bound = bound
        self._values = {p: chi(self.delta, p) for p in primerange(2, bound + 1)}

    def __call__(self, p: int) -> int:
        v = self._values.get(p)
        if v is None:
            v = chi(self.delta, p)
        return v

    def at(self, n: int) -> int:
        """Completely multiplicative extension to n >= 1."""
        return math.prod((self(p) ** e for p, e in factorize(n)), start=1)


def primes_upto(x: float) -> list[int]:
    return list(primerange(2, math.floor(x) + 1)) if x >= 2 else []


def pi_B(delta: int, B: float) -> Fraction:
    """prod_{p <= B} (1 + chi(p)/p), exactly."""
    return math.prod((1 + Fraction(chi(delta, p), p) for p in primes_upto(B)), start=Fraction(1))


def _local_R(delta: int, p: int, xi: int) -> int:
    if (2 * delta) % p == 0:
        return xi + 1
    c = chi(delta, p)
    return sum(c ** k for k in range(xi + 1))


def R_value(delta: int, n: int) -> int:
    """Multiplicative weight R(n): tau(p^xi) at p | 2 delta, sum_k chi(p)^k elsewhere."""
    if delta == 0:
        raise ZeroInput("discriminant must be nonzero")
    if n < 1:
        raise InvalidInput("R is defined for positive integers")
    return math.prod((_local_R(delta, p, e) for p, e in factorize(n)), start=1)


def frakS(delta: int, X: float) -> Fraction:
    """prod_{p <= X} (1 + R(p)/p)."""
    return math.prod((1 + Fraction(_local_R(delta, p, 1), p) for p in primes_upto(X)),
                     start=Fraction(1))


def mertens_product(X: float) -> Fraction:
    return math.prod((Fraction(p, p - 1) for p in primes_upto(X)), start=Fraction(1))


# ---------------------------------------------------------------------------
# vectorised R over arrays of values
# ---------------------------------------------------------------------------

def spf_sieve(n: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..n (entries 0 and 1 are 0 / 1)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    if n >= 1:
        spf[1] = 1
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    rest = spf[2:] == 0
    spf[2:][rest] = np.arange(2, n + 1)[rest]
    return spf


def _powmod_vec(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    result = np.ones_like(base)
    b = base % mod
    e = exp.copy()
    while np.any(e > 0):
        odd = (e & 1) == 1
        result = np.where(odd, (result * b) % mod, result)
        b = (b * b) % mod
        e >>= 1
    return result


def _chi_vec(delta: int, primes: np.ndarray) -> np.ndarray:
    out = np.zeros(primes.shape, dtype=np.int64)
    odd = primes != 2
    p = primes[odd]
    if p.size:
        if p.max() > 3_000_000_000:
            raise TooLarge("prime too large for vectorised Legendre symbols")
        a = np.mod(delta, p)
        pw = _powmod_vec(a, (p - 1) // 2, p)
        out[odd] = np.where(a == 0, 0, np.where(pw == 1, 1, -1))
    if np.any(~odd):
        out[~odd] = chi(delta, 2)
    return out


def R_values(delta: int, values: np.ndarray) -> np.ndarray:
    """R(|v|) for every entry of an integer array of nonzero values."""
    v = np.abs(np.asarray(values, dtype=np.int64))
    if v.size == 0:
        return np.zeros(0, dtype=np.int64)
    if np.any(v == 0):
        raise ZeroInput("R is undefined at 0")
    uniq, inverse = np.unique(v, return_inverse=True)
    nmax = int(uniq[-1])
    if nmax > 200_000_000:
        return np.array([R_value(delta, int(x)) for x in uniq], dtype=np.int64)[inverse]
    spf = spf_sieve(nmax)
    rem = uniq.copy()
    res = np.ones_like(uniq)
    two_delta = 2 * abs(delta)
    while True:
        live = rem > 1
        if not np.any(live):
            break
        p = np.where(live, spf[rem], 1)
        xi = np.zeros_like(rem)
        while True:
            div = live & (rem % p == 0)
            if not np.any(div):
                break
            rem = np.where(div, rem // p, rem)
            xi += div
        pl = p[live]
        xil = xi[live]
        bad = (two_delta % pl) == 0
        c = _chi_vec(delta, pl)
        # sum_{k=0}^{xi} c^k for c in {-1, 1}
        good_val = np.where(c == 1, xil + 1, np.where(xil % 2 == 0, 1, 0))
        res[live] *= np.where(bad, xil + 1, good_val)
    return res[inverse]


# ---------------------------------------------------------------------------
# residues of the dual form, rho and exponential sums
# ---------------------------------------------------------------------------

def _dual_ints(qdual: DualForm) -> list[list[int]]:
    if not qdual.integral:
        raise NonClassical("dual form must have an integral Gram matrix (classical Q)")
    return qdual.int_matrix()


def residue_histogram(qdual: DualForm, q: int, budget: int = RESIDUE_BUDGET) -> np.ndarray:
    """counts[r] = #{x in (Z/q)^n : Q*(x) = r mod q}."""
    n = qdual.n
    if q < 1:
        raise InvalidInput("modulus must be positive")
    if q ** n > budget:
        raise TooLarge(f"{q}^{n} residue tuples exceed the budget {budget}")
    a = [[x % q for x in row] for row in _dual_ints(qdual)]
    if q == 1:
        return np.array([1], dtype=np.int64)
    grid = np.meshgrid(*([np.arange(q, dtype=np.int64)] * (n - 1)), indexing="ij")
    rest = np.zeros_like(grid[0])
    for i in range(1, n):
        for j in range(1, n):
            if a[i][j]:
                rest = (rest + a[i][j] * (grid[i - 1] * grid[j - 1] % q)) % q
    lin = np.zeros_like(grid[0])
    for j in range(1, n):
        if a[0][j]:
            lin = (lin + 2 * a[0][j] * grid[j - 1]) % q
    counts = np.zeros(q, dtype=np.int64)
    for x1 in range(q):
        vals = (a[0][0] * x1 * x1 + x1 * lin + rest) % q
        counts += np.bincount(vals.ravel(), minlength=q)
    return counts


def rho_bruteforce(qdual: DualForm, m: int, budget: int = RESIDUE_BUDGET) -> int:
    return int(residue_histogram(qdual, m, budget)[0])


def rho_closed_form(delta: int, p: int) -> int:
    """p^3 + chi(p)(p^2 - p), valid for odd p not dividing the square-full part."""
    return p ** 3 + legendre(delta, p) * (p * p - p)


def rho(qdual: DualForm, m: int, budget: int = RESIDUE_BUDGET, test_mode: bool = False) -> int:
    """#{x in (Z/m)^4 : Q*(x) = 0 mod m}, multiplicatively over prime powers."""
    if m < 1:
        raise InvalidInput("m must be positive")
    delta = qdual.source_int_disc
    _dual_ints(qdual)
    dbad = squarefull_part(delta)
    total = 1
    for p, k in factorize(m) if m > 1 else ():
        closed = None
        if k == 1 and p != 2 and dbad % p != 0:
            closed = rho_closed_form(delta, p)
        if closed is not None and not test_mode:
            total *= closed
            continue
        brute = rho_bruteforce(qdual, p ** k, budget)
        if closed is not None and brute != closed:
            raise InvariantViolation(f"rho({p}) closed form {closed} != enumeration {brute}")
        total *= brute
    return total


def rho_bound_holds(delta_bad: int, p: int, k: int, value: int) -> bool:
    """rho(p^k) <= 4k p^{3k} (delta_bad^3, p^{4k})^{1/4}, compared at the 4th power."""
    g = math.gcd(delta_bad ** 3, p ** (4 * k))
    return value ** 4 <= (4 * k) ** 4 * p ** (12 * k) * g


def exp_sum(qdual: DualForm, a: int, q: int, budget: int = RESIDUE_BUDGET) -> complex:
    """sum_{x mod q} e(a Q*(x) / q), summed from the exact residue histogram."""
    counts = residue_histogram(qdual, q, budget)
    total = 0j
    for r in range(q):
        if counts[r]:
            total += int(counts[r]) * cmath.exp(2j * math.pi * ((a * r) % q) / q)
    return total


# ---------------------------------------------------------------------------
# ternary invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalProfile:
    p: int
    xi: int
    chi_q: int
    d_contrib: int
    c_factor: int


def _rank_mod_p(m: Sequence[Sequence[int]], p: int) -> int:
    a = [[x % p for x in row] for row in m]
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def _f2_profile(q: QuadraticForm) -> tuple[int, int]:
    """(rank, zero count in F_2^3) of the polynomial q reduced mod 2."""
    vecs = list(product((0, 1), repeat=q.n))
    val = {v: q(v) % 2 for v in vecs}

    def polar(x, y):
        s = tuple((a + b) % 2 for a, b in zip(x, y))
        return (val[s] - val[x] - val[y]) % 2

    rad = [x for x in vecs if val[x] == 0 and all(polar(x, y) == 0 for y in vecs)]
    rank = q.n - (len(rad).bit_length() - 1)
    zeros = sum(1 for v in vecs if val[v] == 0)
    return rank, zeros


def reduction_rank(q: QuadraticForm, p: int) -> int:
    if p == 2:
        return _f2_profile(q)[0]
    return _rank_mod_p(q.gram2, p)


def chi_q_ternary(q: QuadraticForm, p: int) -> int:
    """+1 / -1 if q mod p has rank 2 and is reducible / irreducible over F_p, else 0."""
    if q.n != 3:
        raise InvalidInput("chi_q is defined for ternary forms")
    if p == 2:
        rank, zeros = _f2_profile(q)
        if rank != 2:
            return 0
        return 1 if zeros == 6 else -1
    g = q.gram2
    if _rank_mod_p(g, p) != 2:
        return 0
    for i in range(3):
        for j in range(i + 1, 3):
            mnr = (g[i][i] * g[j][j] - g[i][j] * g[j][i]) % p
            if mnr:
                return legendre(-mnr, p)
    raise AssertionError("rank-2 symmetric matrix without a nonzero principal 2x2 minor")


def _ternary_matrix(q: QuadraticForm) -> list[list[int]]:
    if q.n != 3:
        raise InvalidInput("expected a ternary form")
    if not q.classical:
        raise NonClassical("ternary invariants need an integral Gram matrix")
    return q.int_matrix()


def minor_gcd_D(q: QuadraticForm) -> int:
    """Highest common factor of the nine 2x2 minors of the Gram matrix."""
    a = _ternary_matrix(q)
    g = 0
    for r1 in range(3):
        for r2 in range(r1 + 1, 3):
            for c1 in range(3):
                for c2 in range(c1 + 1, 3):
                    g = math.gcd(g, a[r1][c1] * a[r2][c2] - a[r1][c2] * a[r2][c1])
    return g


def local_profile(q: QuadraticForm, p: int) -> LocalProfile:
    _ternary_matrix(q)
    delta = q.int_disc()
    if delta == 0:
        raise InvalidInput("ternary form is singular")
    d = minor_gcd_D(q)
    xi = _valuation(delta, p)
    chi_val = chi_q_ternary(q, p)
    if (2 * d) % p == 0:
        factor = xi + 1
    else:
        factor = sum(chi_val ** k for k in range(xi + 1))
    return LocalProfile(p, xi, chi_val, _valuation(d, p), factor)


def _valuation(n: int, p: int) -> int:
    n = abs(n)
    if n == 0:
        raise ZeroInput("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def C_value(q: QuadraticForm) -> int:
    """prod over p^xi || Delta_q: tau(p^xi) if p | 2D(q), else sum_k chi_q(p)^k."""
    _ternary_matrix(q)
    delta = q.int_disc()
    if delta == 0:
        raise InvalidInput("ternary form is singular")
    return math.prod((local_profile(q, p).c_factor for p, _ in factorize(delta)), start=1)


# ---------------------------------------------------------------------------
# the gcd inequality
# ---------------------------------------------------------------------------

def gcd_inequality_holds(m: int, n: int) -> tuple[bool, int, int]:
    """(m, n^2)^{1/6} <= m^{1/12} h / (m, h^4)^{1/4} with h = (m, n).

    Compared after raising to the 12th power: (m, n^2)^2 against
    m h^12 / (m, h^4)^3 (an integer).  Returns (holds, lhs, rhs).
    """
    if m < 1 or n == 0:
        raise InvalidInput("need m >= 1 and n != 0")
    h = math.gcd(m, n)
    lhs = math.gcd(m, n * n) ** 2
    g = math.gcd(m, h ** 4)
    rhs = m * h ** 12 // g ** 3
    return lhs <= rhs, lhs, rhs


# ---------------------------------------------------------------------------
# windowed sums over boxes
# ---------------------------------------------------------------------------

def _box_slices(qdual: DualForm, center: Sequence[int], X: int, budget: int):
    """Yield Q*(x) over the sup-norm box of radius X about ``center``, one x_1-slice at a time."""
    a = _dual_ints(qdual)
    n = qdual.n
    if X < 0:
        raise InvalidInput("X must be nonnegative")
    side = 2 * X + 1
    if side ** n > budget:
        raise TooLarge(f"box with {side}^{n} points exceeds the budget {budget}")
    reach = max(abs(int(c)) for c in center) + X
    if sum(abs(v) for row in a for v in row) * reach * reach >= INT64_SAFE:
        raise TooLarge("values of Q* in this box overflow 64-bit arithmetic")
    axes = [np.arange(int(center[i]) - X, int(center[i]) + X + 1, dtype=np.int64) for i in range(n)]
    grid = np.meshgrid(*axes[1:], indexing="ij")
    rest = np.zeros_like(grid[0])
    lin = np.zeros_like(grid[0])
    for i in range(1, n):
        for j in range(1, n):
            if a[i][j]:
                rest += a[i][j] * grid[i - 1] * grid[j - 1]
        if a[0][i]:
            lin += 2 * a[0][i] * grid[i - 1]
    for x1 in axes[0]:
        x1 = int(x1)
        yield a[0][0] * x1 * x1 + x1 * lin + rest


def U_count(qdual: DualForm, a: int, tau_: float, center: Sequence[int], X: int,
            budget: int = BOX_BUDGET) -> int:
    """#{x in box : Q*(x) != 0, a | Q*(x), P^-(|Q*(x)|/a) >= tau}, with P^-(1) = infinity."""
    if a < 1:
        raise InvalidInput("a must be positive")
    if tau_ < 2:
        raise InvalidInput("tau must be at least 2")
    small = [p for p in primes_upto(math.ceil(tau_) - 1) if p < tau_]
    total = 0
    for vals in _box_slices(qdual, center, X, budget):
        v = np.abs(vals[(vals != 0) & (vals % a == 0)]) // a
        keep = np.ones(v.shape, dtype=bool)
        for p in small:
            keep &= (v % p) != 0
        total += int(np.count_nonzero(keep))
    return total


def default_centers(X: int, n: int = 4) -> list[tuple[int, ...]]:
    return [tuple(c) for c in product((-X, 0, X), repeat=n)]


def S_h_window(qdual: DualForm, h: int, centers: Iterable[Sequence[int]] | None, X: int,
               budget: int = BOX_BUDGET) -> int:
    """max over centers of sum_{x in box, Q*(x) != 0, h | Q*(x)} R(|Q*(x)|)."""
    if h < 1:
        raise InvalidInput("h must be positive")
    delta = qdual.source_int_disc
    if centers is None:
        centers = default_centers(X, qdual.n)
    best = 0
    for center in centers:
        vals_parts, count_parts = [], []
        for vals in _box_slices(qdual, center, X, budget):
            v = vals[(vals != 0) & (vals % h == 0)]
            if v.size:
                u, c = np.unique(np.abs(v), return_counts=True)
                vals_parts.append(u)
                count_parts.append(c)
        if not vals_parts:
            continue
        uniq, inverse = np.unique(np.concatenate(vals_parts), return_inverse=True)
        counts = np.bincount(inverse, weights=np.concatenate(count_parts)).astype(np.int64)
        total = int(np.dot(R_values(delta, uniq), counts))
        best = max(best, total)
    return best

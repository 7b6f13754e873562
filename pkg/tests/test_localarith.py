import cmath
import itertools
import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from quadcount.constants import KAPPA_S
from quadcount.errors import InvalidInput, NonClassical, TooLarge, ZeroInput
from quadcount.forms import build_form, diagonal_form, dual_form
from quadcount.localarith import (C_value, CharacterTable, R_value, R_values, S_h_window, U_count, chi,
                                  chi_q_ternary, exp_sum, frakS, gcd_inequality_holds, local_profile,
                                  mertens_product, minor_gcd_D, pi_B, rho, rho_bound_holds,
                                  rho_bruteforce, rho_closed_form, squarefull_part, tau, varpi)

from strategies import classical_quaternary

STD = diagonal_form(1, 1, 1, -1)
STD_DUAL = dual_form(STD)


def oracle_squarefull(n):
    n = abs(n)
    out, p = 1, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e >= 2:
            out *= p ** e
        p += 1
    return out


@pytest.mark.parametrize("n,expected", [(12, 4), (720, 144), (1, 1), (-1, 1), (-72, 72)])
def test_squarefull_examples(n, expected):
    assert squarefull_part(n) == expected


@given(st.integers(1, 10 ** 6))
def test_squarefull_matches_trial_division(n):
    assert squarefull_part(n) == oracle_squarefull(n)


def test_zero_inputs():
    with pytest.raises(ZeroInput):
        squarefull_part(0)
    with pytest.raises(ZeroInput):
        chi(0, 3)


def test_varpi():
    assert varpi(1) == 1 and varpi(12) == 2 and varpi(7) == Fraction(8, 7)


def test_chi_examples():
    assert chi(-1, 5) == 1 and chi(-1, 3) == -1 and chi(15, 5) == 0
    # Kronecker convention at 2
    assert [chi(d, 2) for d in (1, 3, 5, 7, 2)] == [1, -1, -1, 1, 0]


@given(st.integers(-10 ** 6, 10 ** 6).filter(bool), st.sampled_from(list(sympy.primerange(3, 200))))
def test_chi_matches_jacobi(d, p):
    assert chi(d, p) == sympy.jacobi_symbol(d % p, p)


def test_character_table_multiplicative():
    t = CharacterTable(-7, 100)
    for m, n in itertools.product(range(1, 40), repeat=2):
        assert t.at(m * n) == t.at(m) * t.at(n)


def test_pi_B_examples():
    assert pi_B(-1, 10) == Fraction(36, 35)
    assert pi_B(-1, 1.5) == 1
    assert pi_B(1, 10) == Fraction(3, 2) * Fraction(4, 3) * Fraction(6, 5) * Fraction(8, 7)


def test_R_examples():
    assert R_value(-1, 5) == 2 and R_value(-1, 3) == 0
    assert R_value(-1, 8) == 4
    assert R_value(-1, 9) == 1


def test_R_values_vectorised_agree():
    import numpy as np
    for d in (-1, -3, 5, 12, -36):
        ns = np.arange(1, 3000)
        assert R_values(d, ns).tolist() == [R_value(d, int(n)) for n in ns]


@settings(max_examples=300)
@given(st.integers(-50, 50).filter(bool), st.integers(1, 10 ** 5), st.integers(1, 10 ** 5))
def test_R_submultiplicative(d, u, v):
    bad = [p for p in sympy.primefactors(math.gcd(u, v))
           if (2 * d) % p and (sympy.multiplicity(p, u) % 2 or sympy.multiplicity(p, v) % 2)]
    if not bad:
        assert R_value(d, u * v) <= tau(u) * R_value(d, v)


def test_frakS_examples():
    assert frakS(-1, 2) == 2
    assert frakS(-1, 1) == 1
    expect = Fraction(2) * Fraction(3, 3) * Fraction(7, 5) * Fraction(7, 7)
    assert frakS(-1, 10) == expect


@pytest.mark.parametrize("delta", [-1, 1, -3, 5, 12, -81, 1001, 7])
def test_frakS_bounded_by_character_product(delta):
    """S <= (4/3)(3/2) varpi Pi_X prod (1-1/p)^-1 exactly; the extra 4/3 absorbs p = 2."""
    for X in (2, 10, 50, 200):
        lhs = frakS(delta, X)
        rhs = Fraction(4, 3) * Fraction(3, 2) * varpi(abs(delta)) * pi_B(delta, X) * mertens_product(X)
        assert lhs <= rhs


def test_rho_examples():
    assert rho(STD_DUAL, 5) == 145 == rho_bruteforce(STD_DUAL, 5)
    assert rho(STD_DUAL, 1) == 1
    assert rho(STD_DUAL, 15) == 3045 == rho_bruteforce(STD_DUAL, 15)
    assert rho(STD_DUAL, 15, test_mode=True) == 3045


def test_rho_budget():
    with pytest.raises(TooLarge):
        rho(STD_DUAL, 4, budget=100)
    with pytest.raises(NonClassical):
        rho(dual_form(build_form(4, {(0, 1): 1, (2, 3): 1})), 3)


@settings(max_examples=25, deadline=None)
@given(classical_quaternary())
def test_rho_multiplicative(Q):
    d = dual_form(Q)
    for m, n in ((3, 4), (5, 4), (3, 5), (7, 2)):
        assert rho_bruteforce(d, m * n) == rho_bruteforce(d, m) * rho_bruteforce(d, n)


@settings(max_examples=25, deadline=None)
@given(classical_quaternary())
def test_rho_closed_form_and_bound(Q):
    d = dual_form(Q)
    delta = Q.int_disc()
    dbad = squarefull_part(delta)
    for p in (3, 5, 7):
        v = rho_bruteforce(d, p)
        if dbad % p:
            assert v == rho_closed_form(delta, p)
        assert rho_bound_holds(dbad, p, 1, v)
    for q, p, k in ((9, 3, 2), (27, 3, 3), (25, 5, 2)):
        assert rho_bound_holds(dbad, p, k, rho_bruteforce(d, q))


def test_exp_sum_examples():
    assert abs(exp_sum(STD_DUAL, 1, 5) - 25) < 1e-9
    assert abs(exp_sum(STD_DUAL, 0, 5) - 625) < 1e-9
    for b in range(1, 7):
        assert abs(exp_sum(STD_DUAL, b, 7) + 49) < 1e-6 * 49


def test_exp_sum_direct_summation_oracle():
    """Histogram-based sum against term-by-term summation."""
    q, a = 5, 2
    mat = STD_DUAL.int_matrix()
    direct = 0j
    for x in itertools.product(range(q), repeat=4):
        v = sum(mat[i][j] * x[i] * x[j] for i in range(4) for j in range(4))
        direct += cmath.exp(2j * math.pi * a * v / q)
    assert abs(exp_sum(STD_DUAL, a, q) - direct) < 1e-8


def test_chi_q_examples():
    q = diagonal_form(1, 1, 9)  # x^2 + y^2 with the z term vanishing mod 3
    assert chi_q_ternary(q, 3) == -1
    q5 = diagonal_form(1, 1, 25)
    assert chi_q_ternary(q5, 5) == 1
    assert chi_q_ternary(diagonal_form(1, 1, 1), 3) == 0


def test_chi_q_at_two_uses_polynomial():
    # xy + z^2: the Gram matrix mod 2 misreads this; as a polynomial it is smooth (rank 3)
    assert chi_q_ternary(build_form(3, {(0, 1): 1, (2, 2): 1}), 2) == 0
    # xy + 4z^2 -> the split pair of lines x = 0, y = 0
    assert chi_q_ternary(build_form(3, {(0, 1): 1, (2, 2): 4}), 2) == 1
    # x^2 + xy + y^2 + 4z^2 -> irreducible over F_2
    assert chi_q_ternary(build_form(3, {(0, 0): 1, (0, 1): 1, (1, 1): 1, (2, 2): 4}), 2) == -1
    # classical forms reduce to a square of a linear form mod 2
    assert chi_q_ternary(diagonal_form(1, 3, 5), 2) == 0


def oracle_chi_q(q, p):
    """Count projective zeros over F_p: rank-2 line pair has 2p+1, a point has 1."""
    pts = [v for v in itertools.product(range(p), repeat=3) if any(v)]
    zeros = sum(1 for v in pts if q(v) % p == 0) // (p - 1)
    from quadcount.localarith import reduction_rank
    if reduction_rank(q, p) != 2:
        return 0
    return 1 if zeros == 2 * p + 1 else -1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=6, max_size=6), st.sampled_from([3, 5, 7, 11]))
def test_chi_q_matches_point_count(c, p):
    coeffs = {(0, 0): c[0], (1, 1): c[1], (2, 2): c[2], (0, 1): 2 * c[3], (0, 2): 2 * c[4], (1, 2): 2 * c[5]}
    try:
        q = build_form(3, coeffs)
    except ValueError:
        return
    assert chi_q_ternary(q, p) == oracle_chi_q(q, p)


def test_minor_gcd_examples():
    assert minor_gcd_D(diagonal_form(1, 1, 1)) == 1
    assert minor_gcd_D(diagonal_form(7, 7, 7)) == 49


def test_D_divisibility_on_restrictions():
    from quadcount.corpus import slicing_pairs
    from quadcount.forms import restrict_to_hyperplane
    for Q, c in slicing_pairs(500, bound=20, cmax=10):
        q = restrict_to_hyperplane(Q, c).q
        if q.disc == 0:
            continue
        d = minor_gcd_D(q)
        assert (q.int_disc() ** 2) % d ** 3 == 0
        assert (2 ** 8 * Q.int_disc()) % d == 0


def test_C_examples():
    assert C_value(diagonal_form(1, 1, -1)) == 1
    assert C_value(diagonal_form(1, 1, 3)) == 0
    assert C_value(diagonal_form(1, 1, -25)) == 3
    prof = local_profile(diagonal_form(1, 1, -25), 5)
    assert (prof.xi, prof.chi_q, prof.c_factor) == (2, 1, 3)


def test_gcd_inequality_examples():
    assert gcd_inequality_holds(1, 1) == (True, 1, 1)
    for p in (2, 3, 5, 101):
        ok, lhs, rhs = gcd_inequality_holds(p ** 3, p)
        assert ok and lhs == p ** 4 and rhs == p ** 6


@given(st.integers(1, 10 ** 9), st.integers(-10 ** 9, 10 ** 9).filter(bool))
def test_gcd_inequality_property(m, n):
    assert gcd_inequality_holds(m, n)[0]


def test_U_count_examples():
    side = 7 ** 4
    zeros = sum(1 for x in itertools.product(range(-3, 4), repeat=4)
                if -x[0] ** 2 - x[1] ** 2 - x[2] ** 2 + x[3] ** 2 == 0)
    assert U_count(STD_DUAL, 1, 2, (0, 0, 0, 0), 3) == side - zeros
    # frozen from a trial-division oracle over the 7^4 box
    assert U_count(STD_DUAL, 1, 3, (0, 0, 0, 0), 3) == 1200
    assert U_count(STD_DUAL, 10 ** 6, 2, (0, 0, 0, 0), 3) == 0
    with pytest.raises(TooLarge):
        U_count(STD_DUAL, 1, 2, (0, 0, 0, 0), 200, budget=10 ** 6)


def test_S_h_examples():
    # frozen from direct enumeration with an independently coded R over the 9^4 box
    assert S_h_window(STD_DUAL, 1, [(0, 0, 0, 0)], 4) == 13112
    # X = 0 at a point on the null cone contributes nothing
    assert S_h_window(STD_DUAL, 1, [(1, 0, 0, 1)], 0) == 0


def test_S_h_ratio_flat_for_standard_form():
    vals = []
    for X in (8, 12, 16):
        s = S_h_window(STD_DUAL, 1, [(0, 0, 0, 0)], X)
        vals.append(s / (float(frakS(-1, X)) * X ** 4 / math.log(X)))
    assert max(vals) <= KAPPA_S and vals[-1] <= 1.5 * vals[0]


def test_invalid_arguments():
    with pytest.raises(InvalidInput):
        U_count(STD_DUAL, 0, 2, (0, 0, 0, 0), 1)
    with pytest.raises(InvalidInput):
        S_h_window(STD_DUAL, 0, None, 1)
    with pytest.raises(InvalidInput):
        gcd_inequality_holds(0, 1)

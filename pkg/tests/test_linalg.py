import itertools
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from quadcount import linalg

small = st.integers(-20, 20)
mat3 = st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3)


def leibniz_det(a):
    n = len(a)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= a[i][perm[i]]
        total += (-1) ** inv * prod
    return total


@given(mat3)
def test_bareiss_matches_leibniz(a):
    assert linalg.det_bareiss(a) == leibniz_det(a)
    assert linalg.det_rational(a) == leibniz_det(a)


@given(mat3)
def test_adjugate_identity(a):
    adj = linalg.adjugate(a)
    d = linalg.det_bareiss(a)
    assert linalg.matmul(a, adj) == [[d * (i == j) for j in range(3)] for i in range(3)]


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=3))
def test_column_hermite_is_unimodular_and_consistent(rows):
    h, u, r = linalg.column_hermite(rows)
    assert abs(linalg.det_bareiss(u)) == 1
    assert linalg.matmul(rows, u) == h
    assert r == linalg.rank_rational(rows)
    for v in linalg.integer_kernel(rows):
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in rows)


@given(st.lists(small, min_size=4, max_size=4).filter(lambda v: linalg.content(v) == 1))
def test_kernel_is_saturated(c):
    ker = linalg.integer_kernel([c])
    assert len(ker) == 3
    # index of the kernel lattice in its saturation is 1 iff its Gram det equals |c|^2
    assert linalg.gram_det(ker) == sum(x * x for x in c)


@settings(max_examples=50)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=5),
       st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=5))
def test_lattice_intersection_membership(g1, g2):
    b1, b2 = linalg.lattice_basis(g1), linalg.lattice_basis(g2)
    if len(b1) < 3 or len(b2) < 3:
        return
    inter = linalg.lattice_intersection(b1, b2)
    assert len(inter) == 3
    for v in inter:
        assert linalg.in_lattice(b1, v) and linalg.in_lattice(b2, v)
    # index of the intersection divides the product of the indices
    d1, d2, d = (abs(linalg.det_bareiss(b)) for b in (b1, b2, inter))
    assert d % d1 == 0 and d % d2 == 0 and (d1 * d2) % d == 0


def test_solve_coordinates_outside_span():
    assert linalg.solve_coordinates([[1, 0, 0], [0, 1, 0]], [0, 0, 1]) is None
    assert linalg.solve_coordinates([[2, 0, 0]], [1, 0, 0]) == [Fraction(1, 2)]
    assert not linalg.in_lattice([[2, 0, 0]], [1, 0, 0])


def test_canonical_sign_and_primitive_part():
    assert linalg.canonical_sign((0, -2, 3)) == (0, 2, -3)
    assert linalg.primitive_part((4, -6, 0)) == (2, -3, 0)
    assert linalg.canonical_sign((0, 0)) == (0, 0)

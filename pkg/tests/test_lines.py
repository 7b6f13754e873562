import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadcount import linalg
from quadcount.forms import diagonal_form
from quadcount.lines import (RationalLine, line_point_count, line_scan_radius, lines_up_to_height,
                             plucker, plucker_relation)

SPLIT = diagonal_form(1, 1, -1, -1)
L0 = RationalLine.from_vectors((1, 0, 1, 0), (0, 1, 0, 1))


def oracle_lines(Q, H, radius):
    """Lines on Q = 0 spanned by two zeros of sup norm <= radius, with d(L) <= H."""
    g = np.array(Q.gram2, dtype=np.int64)
    r = np.arange(-radius, radius + 1)
    xs = np.array(list(itertools.product(r, repeat=4)), dtype=np.int64)
    z = xs[np.einsum("ij,jk,ik->i", xs, g, xs) == 0]
    z = z[np.any(z != 0, axis=1)]
    cross = z @ g @ z.T
    out = set()
    for i, j in zip(*np.nonzero(cross == 0)):
        if i >= j:
            continue
        p = plucker(z[i].tolist(), z[j].tolist())
        if not any(p):
            continue
        line = RationalLine.from_vectors(z[i].tolist(), z[j].tolist())
        if line.det_sq <= H * H:
            out.add(line.plucker)
    return out


def test_example_line():
    assert L0.det_sq == 4 and L0.vanishes_on(SPLIT)
    assert L0.plucker in {l.plucker for l in lines_up_to_height(SPLIT, 2)}


def test_nonsquare_discriminant_has_no_lines():
    assert lines_up_to_height(diagonal_form(1, 1, 1, -1), 20) == []
    assert lines_up_to_height(diagonal_form(1, 1, -1, -3), 20) == []


@pytest.mark.parametrize("Q", [SPLIT, diagonal_form(1, -1, 2, -2), diagonal_form(1, -4, 1, -1)])
def test_lines_against_pair_oracle(Q):
    H = 4
    got = {l.plucker for l in lines_up_to_height(Q, H)}
    # a reduced basis of a line with d <= 4 has sup norm <= 2d/sqrt(3) < 5
    assert got and got == oracle_lines(Q, H, 5)


def test_line_identities():
    ls = lines_up_to_height(SPLIT, 30)
    assert ls == sorted(ls, key=lambda l: (l.det_sq, l.plucker))
    assert len({l.plucker for l in ls}) == len(ls)
    for l in ls:
        assert plucker_relation(l.plucker) == 0
        assert l.det_sq == sum(p * p for p in l.plucker)
        assert l.vanishes_on(SPLIT)
        assert linalg.content(l.plucker) == 1


def test_line_point_counts():
    assert line_point_count(L0, 1) == 8
    assert line_point_count(L0, 0) == 0
    # primitive (a, b, a, b) with |a|, |b| <= 10
    expected = sum(1 for a in range(-10, 11) for b in range(-10, 11) if math.gcd(a, b) == 1)
    assert line_point_count(L0, 10) == expected == 256


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 12), st.integers(0, 10))
def test_line_point_count_grid_oracle(B, idx):
    ls = lines_up_to_height(SPLIT, 6)
    l = ls[idx % len(ls)]
    ann = np.array(linalg.integer_kernel([list(v) for v in l.basis]), dtype=np.int64)
    r = np.arange(-B, B + 1)
    xs = np.stack([a.ravel() for a in np.meshgrid(r, r, r, r, indexing="ij")], axis=1)
    on = xs[np.all(xs @ ann.T == 0, axis=1)]
    n = sum(1 for x in on.tolist() if any(x) and math.gcd(*x) == 1)
    assert line_point_count(l, B) == n


def test_scan_radius_grows_like_sqrt():
    assert line_scan_radius(1) >= 2
    assert all(line_scan_radius(h) ** 2 >= 2 * h / math.sqrt(3) for h in range(1, 200))

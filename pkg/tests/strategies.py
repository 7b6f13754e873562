"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from quadcount import linalg
from quadcount.errors import SingularForm
from quadcount.forms import build_form


@st.composite
def classical_quaternary(draw, bound=6):
    coeffs = {(i, i): draw(st.integers(-bound, bound)) for i in range(4)}
    for i in range(4):
        for j in range(i + 1, 4):
            coeffs[(i, j)] = 2 * draw(st.integers(-(bound // 2), bound // 2))
    try:
        return build_form(4, coeffs)
    except SingularForm:
        from hypothesis import assume
        assume(False)


@st.composite
def integral_quaternary(draw, bound=6):
    coeffs = {(i, j): draw(st.integers(-bound, bound)) for i in range(4) for j in range(i, 4)}
    try:
        return build_form(4, coeffs)
    except SingularForm:
        from hypothesis import assume
        assume(False)


primitive4 = st.lists(st.integers(-12, 12), min_size=4, max_size=4).filter(
    lambda v: linalg.content(v) == 1)


def primitive_vectors(bound=12, n=4):
    return st.lists(st.integers(-bound, bound), min_size=n, max_size=n).filter(
        lambda v: linalg.content(v) == 1)

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxcluster.exact_arith import (
    DimensionMismatch,
    Matrix,
    SingularMatrixError,
    bilinear,
    mat_det,
    mat_inverse,
    mat_rank,
    vec_add,
    vec_scale,
    vec_sub,
)


def gauss_rank(rows) -> int:
    """Textbook elimination over Fraction, used as the oracle."""
    a = [[Fraction(x) for x in r] for r in rows]
    n, m = len(a), len(a[0]) if a else 0
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def gauss_det(rows) -> Fraction:
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


rationals = st.fractions(min_value=-6, max_value=6, max_denominator=5)


def square(size, elems=rationals):
    return st.lists(st.lists(elems, min_size=size, max_size=size), min_size=size, max_size=size)


matrices = st.integers(1, 5).flatmap(square)
int_matrices = st.integers(1, 6).flatmap(lambda k: square(k, st.integers(-3, 3)))


def test_a2_coxeter_inverse():
    # gamma = R(a1) R(a2) in A2 acting on simple-root coordinates
    r1 = Matrix([[-1, 1], [0, 1]])
    r2 = Matrix([[1, 0], [1, -1]])
    gamma = r1 @ r2
    assert gamma == Matrix([[0, -1], [1, -1]])
    inv = mat_inverse(Matrix.identity(2) - gamma)
    assert inv == Matrix([[Fraction(2, 3), Fraction(-1, 3)], [Fraction(1, 3), Fraction(1, 3)]])
    mu = inv.scale(2)
    assert mu @ (1, 0) == (Fraction(4, 3), Fraction(2, 3))


def test_rank_examples():
    assert mat_rank(Matrix.zero(3)) == 0
    assert mat_rank(Matrix.identity(4)) == 4
    assert mat_rank(Matrix([[1, 2], [2, 4]])) == 1
    assert mat_rank(Matrix([[Fraction(1, 2), 1], [1, 2]])) == 1


def test_singular_inverse_raises():
    with pytest.raises(SingularMatrixError):
        mat_inverse(Matrix([[1, 2], [2, 4]]))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        Matrix([[1, 2], [3]])
    with pytest.raises(DimensionMismatch):
        Matrix.identity(2) @ (1, 2, 3)
    with pytest.raises(DimensionMismatch):
        Matrix.identity(2) + Matrix.identity(3)


def test_det_and_entries_stay_exact():
    m = Matrix([[Fraction(1, 3), 2], [5, Fraction(-7, 2)]])
    assert mat_det(m) == Fraction(1, 3) * Fraction(-7, 2) - 10
    assert all(not isinstance(x, float) for x in m.inverse().flat())


def test_vector_helpers():
    g = Matrix([[2, -1], [-1, 2]])
    assert bilinear(g, (1, 0), (1, 1)) == 1
    assert vec_add((1, 2), (3, 4)) == (4, 6)
    assert vec_sub((1, 2), (3, 4)) == (-2, -2)
    assert vec_scale(Fraction(1, 2), (2, 4)) == (1, 2)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_matches_oracle(rows):
    assert mat_rank(Matrix(rows)) == gauss_rank(rows)


@settings(max_examples=150, deadline=None)
@given(int_matrices)
def test_integer_rank_matches_oracle(rows):
    assert mat_rank(Matrix(rows)) == gauss_rank(rows)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_det_matches_oracle(rows):
    assert mat_det(Matrix(rows)) == gauss_det(rows)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_inverse_roundtrip(rows):
    m = Matrix(rows)
    if gauss_det(rows) == 0:
        with pytest.raises(SingularMatrixError):
            mat_inverse(m)
        return
    inv = mat_inverse(m)
    ident = Matrix.identity(m.n)
    assert m @ inv == ident
    assert inv @ m == ident


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_rank_of_transpose(rows):
    m = Matrix(rows)
    assert mat_rank(m.transpose()) == mat_rank(m)

"""Exact rational scalars, vectors and dense square matrices.

Scalars are :class:`fractions.Fraction` (plain ``int`` is accepted wherever a
scalar is expected).  A vector is a tuple of scalars.  Nothing here ever
touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from . import kernels

Rational = Fraction
Vector = tuple


class SingularMatrixError(ArithmeticError):
    """Raised when inverting a matrix with zero determinant."""


class DimensionMismatch(ValueError):
    pass


def _as_scalar(x):
    if isinstance(x, int):
        return x
    q = Fraction(x)
    return q.numerator if q.denominator == 1 else q


class Matrix:
    """Immutable square matrix with exact entries."""

    __slots__ = ("rows", "n", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(_as_scalar(x) for x in row) for row in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise DimensionMismatch("matrix must be square")
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int) -> "Matrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_flat(cls, flat: Sequence, n: int) -> "Matrix":
        return cls([flat[i * n:(i + 1) * n] for i in range(n)])

    def flat(self) -> tuple:
        return tuple(x for row in self.rows for x in row)

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for row in self.rows for x in row)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"

    def __add__(self, other: "Matrix") -> "Matrix":
        _check_dims(self, other)
        return Matrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        _check_dims(self, other)
        return Matrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self.rows])

    def scale(self, c) -> "Matrix":
        return Matrix([[c * a for a in r] for r in self.rows])

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            _check_dims(self, other)
            cols = list(zip(*other.rows))
            return Matrix(
                [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows]
            )
        v = tuple(other)
        if len(v) != self.n:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.n}x{self.n} matrix")
        return tuple(_as_scalar(sum(a * b for a, b in zip(r, v))) for r in self.rows)

    def rank(self) -> int:
        return mat_rank(self)

    def inverse(self) -> "Matrix":
        return mat_inverse(self)

    def det(self) -> Fraction:
        return mat_det(self)


def _check_dims(a: Matrix, b: Matrix) -> None:
    if a.n != b.n:
        raise DimensionMismatch(f"{a.n}x{a.n} vs {b.n}x{b.n}")


def _integer_rows(m: Matrix) -> tuple[list[list[int]], list[int]]:
    """Scale each row by the lcm of its denominators.

    Returns the integer rows and the per-row scale factors.
    """
    out, scales = [], []
    for row in m.rows:
        d = 1
        for x in row:
            if not isinstance(x, int):
                d = lcm(d, x.denominator)
        out.append([int(x * d) for x in row])
        scales.append(d)
    return out, scales


def mat_rank(m: Matrix) -> int:
    """Exact rank over the rationals, by fraction-free elimination."""
    rows, _ = _integer_rows(m)
    return kernels.rank(tuple(x for r in rows for x in r), m.n)


def mat_det(m: Matrix) -> Fraction:
    rows, scales = _integer_rows(m)
    n = m.n
    a = [r[:] for r in rows]
    sign, prev = 1, 1
    for k in range(n):
        p = k
        while p < n and a[p][k] == 0:
            p += 1
        if p == n:
            return Fraction(0)
        if p != k:
            a[p], a[k] = a[k], a[p]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    d = Fraction(sign * (a[n - 1][n - 1] if n else 1))
    for s in scales:
        d /= s
    return d


def mat_inverse(m: Matrix) -> Matrix:
    """Exact inverse via fraction-free Gauss-Jordan elimination.

    Raises :class:`SingularMatrixError` if ``m`` is singular.
    """
    n = m.n
    rows, scales = _integer_rows(m)
    a = [rows[i] + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    prev = 1
    for k in range(n):
        p = k
        while p < n and a[p][k] == 0:
            p += 1
        if p == n:
            raise SingularMatrixError("matrix is singular")
        if p != k:
            a[p], a[k] = a[k], a[p]
        piv = a[k][k]
        rk = a[k]
        for i in range(n):
            if i == k:
                continue
            ri = a[i]
            f = ri[k]
            for j in range(2 * n):
                if j != k:
                    ri[j] = (piv * ri[j] - f * rk[j]) // prev
            ri[k] = 0
        prev = piv
    # left block is now prev * I (up to the row scaling), right block prev * A_int^-1
    d = prev
    inv_int = [[Fraction(a[i][n + j], d) for j in range(n)] for i in range(n)]
    # A = S^-1 A_int with S = diag(scales), so A^-1 = A_int^-1 S
    return Matrix([[inv_int[i][j] * scales[j] for j in range(n)] for i in range(n)])


def bilinear(form: Matrix, u: Sequence, v: Sequence):
    """Return ``u^T form v`` exactly."""
    n = form.n
    if len(u) != n or len(v) != n:
        raise DimensionMismatch(f"vectors of length {len(u)}, {len(v)} for rank {n} form")
    s = 0
    for i in range(n):
        ui = u[i]
        if ui:
            row = form.rows[i]
            for j in range(n):
                if v[j]:
                    s += ui * row[j] * v[j]
    return _as_scalar(s)


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u: Sequence) -> tuple:
    return tuple(_as_scalar(c * a) for a in u)


def vec_neg(u: Sequence) -> tuple:
    return tuple(-a for a in u)


def is_zero(u: Sequence) -> bool:
    return not any(u)

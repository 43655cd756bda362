from __future__ import annotations

import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxcluster import _pykernels, kernels

try:
    from coxcluster import _kernels
except ImportError:  # extension not built
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled kernels not built")


def flat_square(lo, hi):
    return st.integers(1, 6).flatmap(
        lambda n: st.tuples(st.just(n), st.lists(st.integers(lo, hi), min_size=n * n, max_size=n * n))
    )


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    if _kernels is not None and os.environ.get("COXCLUSTER_PURE_PYTHON") != "1":
        assert kernels.BACKEND == "cython"


def test_python_reference_values():
    assert _pykernels.rank((1, 2, 2, 4), 2) == 1
    assert _pykernels.rank_diff((1, 0, 0, 1), (0, -1, 1, -1), 2) == 2
    assert _pykernels.matmul((-1, 1, 0, 1), (1, 0, 1, -1), 2) == (0, -1, 1, -1)
    assert _pykernels.matvec((0, -1, 1, -1), (1, 0), 2) == (0, 1)


@needs_ext
@settings(max_examples=200, deadline=None)
@given(flat_square(-4, 4))
def test_rank_parity(case):
    n, a = case
    a = tuple(a)
    assert _kernels.rank(a, n) == _pykernels.rank(a, n)


@needs_ext
@settings(max_examples=200, deadline=None)
@given(flat_square(-3, 3), st.data())
def test_product_parity(case, data):
    n, a = case
    a = tuple(a)
    b = tuple(data.draw(st.lists(st.integers(-3, 3), min_size=n * n, max_size=n * n)))
    v = tuple(data.draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n)))
    assert _kernels.matmul(a, b, n) == _pykernels.matmul(a, b, n)
    assert _kernels.matvec(a, v, n) == _pykernels.matvec(a, v, n)
    assert _kernels.rank_diff(a, b, n) == _pykernels.rank_diff(a, b, n)


@needs_ext
def test_overflow_falls_back_to_big_integers():
    big = 2 ** 62
    a = (big, big, 1, 1)
    assert _kernels.matmul(a, a, 2) == _pykernels.matmul(a, a, 2)
    huge = (10 ** 30, 1, 1, 1)
    assert _kernels.rank(huge, 2) == 2
    assert _kernels.matvec(huge, (10 ** 30, -1), 2) == (10 ** 60 - 1, 10 ** 30 - 1)
    # entries that fit in 64 bits but whose elimination intermediates do not
    m = (2 ** 40, 3, 5, 2 ** 40 + 1, 7, 11, 13, 17, 2 ** 41)
    assert _kernels.rank(m, 3) == _pykernels.rank(m, 3)
    # difference overflows even though both inputs fit
    x = (2 ** 63 - 1, 0, 0, 1)
    y = (-(2 ** 63), 0, 0, 1)
    assert _kernels.rank_diff(x, y, 2) == 1


@needs_ext
def test_large_dimension_uses_python_path():
    n = 14
    ident = tuple(1 if i == j else 0 for i in range(n) for j in range(n))
    assert _kernels.rank(ident, n) == n
    assert _kernels.matmul(ident, ident, n) == ident


def test_pure_python_switch():
    code = "import coxcluster.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, COXCLUSTER_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"

"""Pure-Python integer kernels.

Matrices are flat row-major tuples of Python ints.  These are the reference
versions of the routines in ``_kernels.pyx``; they are used directly when the
compiled extension is unavailable and as the overflow fallback when it is.
"""
from __future__ import annotations


def matmul(a, b, n):
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for j in range(n):
            s = 0
            for k in range(n):
                x = row[k]
                if x:
                    s += x * b[k * n + j]
            out.append(s)
    return tuple(out)


def matvec(a, v, n):
    return tuple(
        sum(a[i * n + k] * v[k] for k in range(n)) for i in range(n)
    )


def _bareiss_rank(m, rows, cols):
    # m: list of lists, destroyed
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r
        while p < rows and m[p][c] == 0:
            p += 1
        if p == rows:
            continue
        if p != r:
            m[p], m[r] = m[r], m[p]
        piv = m[r][c]
        prow = m[r]
        for i in range(r + 1, rows):
            row = m[i]
            f = row[c]
            for j in range(c + 1, cols):
                row[j] = (piv * row[j] - f * prow[j]) // prev
            row[c] = 0
        prev = piv
        r += 1
    return r


def rank(a, n):
    """Rank of the n x n integer matrix ``a`` (fraction-free elimination)."""
    m = [list(a[i * n:(i + 1) * n]) for i in range(n)]
    return _bareiss_rank(m, n, n)


def rank_diff(a, b, n):
    """Rank of ``b - a``."""
    m = [[b[i * n + j] - a[i * n + j] for j in range(n)] for i in range(n)]
    return _bareiss_rank(m, n, n)

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels.

Same contracts as ``_pykernels``.  Entries are carried in 64-bit integers with
128-bit intermediates; anything that would not fit falls back to the
arbitrary-precision Python path, so results are always exact.
"""

from . import _pykernels

cdef extern from *:
    """
    #include <limits.h>
    static int cx_bareiss(long long piv, long long x, long long f, long long y,
                          long long prev, long long *out) {
        __int128 t = (__int128)piv * x - (__int128)f * y;
        t /= prev;
        if (t > LLONG_MAX || t < LLONG_MIN) return 1;
        *out = (long long)t;
        return 0;
    }
    static int cx_sub(long long b, long long a, long long *out) {
        return __builtin_sub_overflow(b, a, out);
    }
    static int cx_dot(const long long *row, const long long *col, int n, int stride,
                      long long *out) {
        __int128 s = 0;
        for (int k = 0; k < n; k++) s += (__int128)row[k] * col[k * stride];
        if (s > LLONG_MAX || s < LLONG_MIN) return 1;
        *out = (long long)s;
        return 0;
    }
    """
    int cx_bareiss(long long piv, long long x, long long f, long long y,
                   long long prev, long long *out) nogil
    int cx_sub(long long b, long long a, long long *out) nogil
    int cx_dot(const long long *row, const long long *col, int n, int stride,
               long long *out) nogil

DEF MAXN = 12


cdef int _rank_buf(long long *m, int n) nogil:
    # returns -1 on overflow
    cdef long long prev = 1, piv, f, tmp
    cdef int r = 0, c, p, i, j
    for c in range(n):
        if r == n:
            break
        p = r
        while p < n and m[p * n + c] == 0:
            p += 1
        if p == n:
            continue
        if p != r:
            for j in range(n):
                tmp = m[p * n + j]
                m[p * n + j] = m[r * n + j]
                m[r * n + j] = tmp
        piv = m[r * n + c]
        for i in range(r + 1, n):
            f = m[i * n + c]
            for j in range(c + 1, n):
                if cx_bareiss(piv, m[i * n + j], f, m[r * n + j], prev, &m[i * n + j]):
                    return -1
            m[i * n + c] = 0
        prev = piv
        r += 1
    return r


def rank(tuple a, int n):
    cdef long long m[MAXN * MAXN]
    cdef int i, r
    if n > MAXN:
        return _pykernels.rank(a, n)
    try:
        for i in range(n * n):
            m[i] = a[i]
    except OverflowError:
        return _pykernels.rank(a, n)
    r = _rank_buf(m, n)
    if r < 0:
        return _pykernels.rank(a, n)
    return r


def rank_diff(tuple a, tuple b, int n):
    cdef long long m[MAXN * MAXN]
    cdef int i, r
    cdef long long x, y
    if n > MAXN:
        return _pykernels.rank_diff(a, b, n)
    try:
        for i in range(n * n):
            x = a[i]
            y = b[i]
            if cx_sub(y, x, &m[i]):
                return _pykernels.rank_diff(a, b, n)
    except OverflowError:
        return _pykernels.rank_diff(a, b, n)
    r = _rank_buf(m, n)
    if r < 0:
        return _pykernels.rank_diff(a, b, n)
    return r


def matmul(tuple a, tuple b, int n):
    cdef long long x[MAXN * MAXN]
    cdef long long y[MAXN * MAXN]
    cdef long long z[MAXN * MAXN]
    cdef int i, j
    if n > MAXN:
        return _pykernels.matmul(a, b, n)
    try:
        for i in range(n * n):
            x[i] = a[i]
            y[i] = b[i]
    except (OverflowError, TypeError):  # big or non-integer entries
        return _pykernels.matmul(a, b, n)
    for i in range(n):
        for j in range(n):
            if cx_dot(&x[i * n], &y[j], n, n, &z[i * n + j]):
                return _pykernels.matmul(a, b, n)
    return tuple([z[i] for i in range(n * n)])


def matvec(tuple a, tuple v, int n):
    cdef long long x[MAXN * MAXN]
    cdef long long y[MAXN]
    cdef long long z[MAXN]
    cdef int i
    if n > MAXN:
        return _pykernels.matvec(a, v, n)
    try:
        for i in range(n * n):
            x[i] = a[i]
        for i in range(n):
            y[i] = v[i]
    except (OverflowError, TypeError):  # big or non-integer entries
        return _pykernels.matvec(a, v, n)
    for i in range(n):
        if cx_dot(&x[i * n], y, n, 1, &z[i]):
            return _pykernels.matvec(a, v, n)
    return tuple([z[i] for i in range(n)])

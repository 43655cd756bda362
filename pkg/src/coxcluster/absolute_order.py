"""Reflection length, absolute order and the bipartite Coxeter element.

Group elements are integer matrices acting on simple-root coordinates (column
vectors).  Reflection length is the rank of ``w - I``, and ``a <= b`` in
absolute order iff ``l(a) + l(a^-1 b) = l(b)``; since ``a (a^-1 b - I) = b - a``
the second term is just ``rank(b - a)``, so no inverses are needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .exact_arith import Matrix, mat_inverse
from .root_system import RootSystem, is_positive, reflection_flat


class InternalInvariantViolation(AssertionError):
    """A structural identity that must hold failed: this is a bug."""


class NotAlmostPositive(ValueError):
    pass


class ParallelRoots(ValueError):
    pass


class NotBelowGamma(ValueError):
    pass


_IDENTITIES: dict[int, tuple] = {}


def _identity_flat(n: int) -> tuple:
    ident = _IDENTITIES.get(n)
    if ident is None:
        ident = tuple(1 if i == j else 0 for i in range(n) for j in range(n))
        _IDENTITIES[n] = ident
    return ident


class GroupElement:
    """An element of W stored as its (integer) matrix, row-major."""

    __slots__ = ("mat", "n", "_length", "_hash")

    def __init__(self, mat, n: int, length: int | None = None):
        self.mat = tuple(mat)
        self.n = n
        self._length = length
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(_identity_flat(n), n, 0)

    @classmethod
    def from_matrix(cls, m: Matrix) -> "GroupElement":
        if not m.is_integral():
            raise ValueError("group elements act by integer matrices on the root lattice")
        return cls(m.flat(), m.n)

    @property
    def matrix(self) -> Matrix:
        return Matrix.from_flat(self.mat, self.n)

    @property
    def length(self) -> int:
        if self._length is None:
            self._length = kernels.rank_diff(_identity_flat(self.n), self.mat, self.n)
        return self._length

    def is_identity(self) -> bool:
        return self.mat == _identity_flat(self.n)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(kernels.matmul(self.mat, other.mat, self.n), self.n)

    def __call__(self, v) -> tuple:
        return kernels.matvec(self.mat, tuple(v), self.n)

    def inverse(self) -> "GroupElement":
        inv = mat_inverse(self.matrix)
        return GroupElement(inv.flat(), self.n, self._length)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.mat == other.mat

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.mat)
        return self._hash

    def __repr__(self):
        return f"GroupElement({self.matrix!r})"


def product(elements, n: int) -> GroupElement:
    """Left-to-right product of group elements (identity if empty)."""
    acc = _identity_flat(n)
    for g in elements:
        acc = kernels.matmul(acc, g.mat, n)
    return GroupElement(acc, n)


def absolute_length(w: GroupElement) -> int:
    return w.length


def length_between(a: GroupElement, b: GroupElement) -> int:
    """``l(a^-1 b)``, computed as ``rank(b - a)``."""
    return kernels.rank_diff(a.mat, b.mat, a.n)


def leq_abs(a: GroupElement, b: GroupElement) -> bool:
    return a.length + kernels.rank_diff(a.mat, b.mat, a.n) == b.length


@dataclass(eq=False)
class CoxeterContext:
    """Bipartite Coxeter element and everything derived from it.

    ``rho`` holds the almost positive roots in the total order; signed
    index ``i`` (from ``lo`` to ``hi``) lives at ``rho[i - lo]``.
    """

    rs: RootSystem
    gamma: GroupElement
    mu_matrix: Matrix
    rho: tuple
    lo: int
    hi: int
    omega: tuple
    _index: dict = field(repr=False)
    _refl: dict = field(repr=False)
    _mu_cov: dict = field(repr=False)
    _edge: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.rs.rank

    @property
    def N(self) -> int:
        return len(self.rs.positive_roots)

    @property
    def s(self) -> int:
        return self.rs.s

    def ordered_simple(self, i: int) -> tuple:
        """The simple root alpha_i of the bipartite order (1-based)."""
        return self.rs.simple_roots[self.rs.bipartite_order[i - 1]]

    def root(self, i: int) -> tuple:
        """rho_i for lo <= i <= hi."""
        if not self.lo <= i <= self.hi:
            raise IndexError(f"rho index {i} outside [{self.lo}, {self.hi}]")
        return self.rho[i - self.lo]

    def index(self, root) -> int:
        """Signed rho-index of an almost positive root."""
        try:
            return self._index[tuple(root)]
        except KeyError:
            raise NotAlmostPositive(f"{tuple(root)} is not an almost positive root") from None

    def indices(self):
        return range(self.lo, self.hi + 1)

    def positive_indices(self):
        return range(1, self.N + 1)

    def reflection(self, root) -> GroupElement:
        root = tuple(root)
        g = self._refl.get(root)
        if g is None:
            g = self._refl.get(tuple(-x for x in root))
        if g is None:
            g = GroupElement(reflection_flat(self.rs, root), self.n, 1)
            self._refl[root] = g
        return g

    def refl_at(self, i: int) -> GroupElement:
        return self.reflection(self.root(i))

    def mu(self, x) -> tuple:
        return mu_apply(self, x)

    def mu_dot(self, sigma, tau) -> Fraction:
        """``B(mu(sigma), tau)``."""
        sigma = tuple(sigma)
        cov = self._mu_cov.get(sigma)
        if cov is None:
            mu_s = self.mu_matrix @ sigma
            g = self.rs.gram
            cov = tuple(sum(mu_s[k] * g[k, j] for k in range(self.n)) for j in range(self.n))
            self._mu_cov[sigma] = cov
        return sum(c * t for c, t in zip(cov, tau))

    def is_omega(self, root) -> bool:
        return tuple(root) in self.omega


def build_context(rs: RootSystem) -> CoxeterContext:
    n = rs.rank
    N = len(rs.positive_roots)
    s = rs.s
    refl = {}
    simple_refl = []
    for i in range(n):
        a = rs.simple_roots[rs.bipartite_order[i]]
        g = GroupElement(reflection_flat(rs, a), n, 1)
        refl[a] = g
        simple_refl.append(g)
    gamma = product(simple_refl, n)
    ident = Matrix.identity(n)
    mu_matrix = mat_inverse(ident - gamma.matrix).scale(2)

    # rho_i = R(a_1)...R(a_{i-1})(a_i), simple roots indexed cyclically
    seq = [None]
    prefix = GroupElement.identity(n)
    for i in range(1, 2 * N + 1):
        k = (i - 1) % n
        seq.append(prefix(rs.simple_roots[rs.bipartite_order[k]]))
        prefix = prefix * simple_refl[k]

    def fail(msg):
        raise InternalInvariantViolation(f"{rs.cartan_type}: {msg}")

    positive = seq[1:N + 1]
    if set(positive) != set(rs.positive_roots) or len(set(positive)) != N:
        fail("rho_1..rho_N do not enumerate the positive roots")
    pi1 = [rs.simple_roots[j] for j in rs.pi1]
    pi2 = [rs.simple_roots[j] for j in rs.pi2]
    if {seq[N + i] for i in range(1, s + 1)} != {tuple(-x for x in a) for a in pi1}:
        fail("rho_{N+1..N+s} != -Pi_1")
    # only set equalities hold in general; termwise rho_{N+i} = -rho_i needs -1 in W
    if {seq[i] for i in range(1, s + 1)} != set(pi1):
        fail("rho_1..rho_s != Pi_1")
    if {seq[N - i] for i in range(n - s)} != set(pi2):
        fail("rho_{N-n+s+1..N} != Pi_2")
    if {seq[2 * N - i] for i in range(n - s)} != {tuple(-x for x in a) for a in pi2}:
        fail("rho_{-(n-s-1)..0} != -Pi_2")
    for i in range(1, N + 1):
        if gamma(seq[i]) != seq[i + n]:
            fail(f"gamma(rho_{i}) != rho_{i + n}")

    lo = -(n - s - 1)
    hi = N + s
    rho = tuple(seq[2 * N - i] for i in range(n - s - 1, -1, -1)) + tuple(seq[1:N + s + 1])
    index = {r: lo + k for k, r in enumerate(rho)}
    if len(index) != len(rho):
        fail("almost positive roots repeat in the rho-order")
    omega = tuple(seq[N - n + 1:N + 1])
    for r in omega:
        if is_positive(gamma(r)):
            fail("gamma maps a root of Omega to a positive root")
    return CoxeterContext(
        rs=rs,
        gamma=gamma,
        mu_matrix=mu_matrix,
        rho=rho,
        lo=lo,
        hi=hi,
        omega=omega,
        _index=index,
        _refl=refl,
        _mu_cov={},
    )


def mu_apply(ctx: CoxeterContext, x) -> tuple:
    return ctx.mu_matrix @ tuple(x)


def rho_index(ctx: CoxeterContext, root) -> int:
    return ctx.index(root)


def rho_compare(ctx: CoxeterContext, a, b) -> int:
    """-1, 0 or 1 as ``a`` precedes, equals or follows ``b``."""
    i, j = ctx.index(a), ctx.index(b)
    return (i > j) - (i < j)


def mu_orthogonal(ctx: CoxeterContext, sigma, tau) -> bool:
    """``B(mu(sigma), tau) == 0``; for nonparallel roots this says R(sigma)R(tau) <= gamma."""
    return ctx.mu_dot(sigma, tau) == 0


def is_edge(ctx: CoxeterContext, sigma, tau) -> bool:
    i, j = ctx.index(sigma), ctx.index(tau)
    return edge_by_index(ctx, i, j)


def edge_by_index(ctx: CoxeterContext, i: int, j: int) -> bool:
    key = (i, j) if i < j else (j, i)
    hit = ctx._edge.get(key)
    if hit is not None:
        return hit
    a, b = key
    ra, rb = ctx.root(a), ctx.root(b)
    if a == b or ra == tuple(-x for x in rb):
        raise ParallelRoots(f"rho_{a} and rho_{b} are parallel")
    hit = ctx.mu_dot(rb, ra) == 0
    ctx._edge[key] = hit
    return hit


def positive_roots_below(ctx: CoxeterContext, w: GroupElement) -> list[tuple]:
    """Positive roots tau with R(tau) <= w, in the total order."""
    out = []
    lw = w.length
    for i in ctx.positive_indices():
        r = ctx.refl_at(i)
        if 1 + kernels.rank_diff(r.mat, w.mat, w.n) == lw:
            out.append(ctx.root(i))
    return out


def peripheral_test(ctx: CoxeterContext, w: GroupElement) -> bool:
    """True iff some root of Omega lies in M(w^-1 gamma)."""
    g = ctx.gamma
    if not leq_abs(w, g):
        raise NotBelowGamma("peripheral_test needs w <= gamma")
    corank = kernels.rank_diff(w.mat, g.mat, w.n)  # l(w^-1 gamma)
    for r in ctx.omega:
        wr = w * ctx.reflection(r)
        # R(r) <= w^-1 gamma  iff  1 + rank(gamma - w R(r)) = l(w^-1 gamma)
        if 1 + kernels.rank_diff(wr.mat, g.mat, w.n) == corank:
            return True
    return False

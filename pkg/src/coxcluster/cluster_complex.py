"""The complexes Delta(gamma) and X(w), the map phi and the shelling.

A face is the strictly increasing tuple of the rho-indices of its vertices, so
tuple comparison is the lexicographic order on faces.  Use :func:`face_of` and
:func:`face_roots` to convert to and from root coordinates.

Wherever a ``w`` argument is optional, ``None`` means the whole complex
Delta(gamma) and a group element ``w <= gamma`` means the positive subcomplex
X(w).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from . import kernels
from .absolute_order import (
    CoxeterContext,
    GroupElement,
    NotAlmostPositive,
    NotBelowGamma,
    edge_by_index,
    leq_abs,
    positive_roots_below,
)
from .ncp_lattice import minimal_parabolic_coxeter
from .root_system import is_positive

LEFT, RIGHT = "Left", "Right"


class NotSorted(ValueError):
    pass


class SimpleSystemMismatch(AssertionError):
    """Ordered product of Pi(w) is not w."""


class ConstructionFailed(AssertionError):
    pass


class ShellingViolation(AssertionError):
    pass


class DegenerateInput(ValueError):
    pass


# ---------------------------------------------------------------- faces

def face_of(ctx: CoxeterContext, roots) -> tuple:
    """Sorted rho-index tuple of a collection of almost positive roots."""
    return tuple(sorted(ctx.index(r) for r in roots))


def face_roots(ctx: CoxeterContext, face) -> tuple:
    return tuple(ctx.root(i) for i in face)


def face_product(ctx: CoxeterContext, face) -> GroupElement:
    """``R(tau_k) ... R(tau_1)`` for the face ``tau_1 < ... < tau_k``."""
    n = ctx.n
    acc = GroupElement.identity(n).mat
    for i in face:
        acc = kernels.matmul(ctx.refl_at(i).mat, acc, n)
    return GroupElement(acc, n)


def _check_face_input(ctx: CoxeterContext, face) -> None:
    for i in face:
        if not isinstance(i, int) or not ctx.lo <= i <= ctx.hi:
            raise NotAlmostPositive(f"{i!r} is not a rho-index in [{ctx.lo}, {ctx.hi}]")
    for a, b in zip(face, face[1:]):
        if a >= b:
            raise NotSorted(f"face {tuple(face)} is not strictly increasing")


def is_face(ctx: CoxeterContext, face) -> bool:
    """Definitional test: the ordered reflection product is in [I, gamma] with rank k."""
    face = tuple(face)
    _check_face_input(ctx, face)
    p = face_product(ctx, face)
    return p.length == len(face) and leq_abs(p, ctx.gamma)


def is_face_pairwise(ctx: CoxeterContext, face) -> bool:
    """Flag test: every pair of vertices is an edge."""
    face = tuple(face)
    _check_face_input(ctx, face)
    for a in range(len(face)):
        for b in range(a + 1, len(face)):
            # a root and its negative never share a face
            if _is_parallel(ctx, face[a], face[b]) or not edge_by_index(ctx, face[a], face[b]):
                return False
    return True


def vertex_pool(ctx: CoxeterContext, w: GroupElement | None = None) -> list:
    if w is None:
        return list(ctx.indices())
    if not leq_abs(w, ctx.gamma):
        raise NotBelowGamma("X(w) needs w <= gamma")
    return [ctx.index(r) for r in positive_roots_below(ctx, w)]


def _is_parallel(ctx, i, j) -> bool:
    return ctx.root(i) == tuple(-x for x in ctx.root(j))


def enumerate_faces(ctx: CoxeterContext, w: GroupElement | None = None) -> list:
    """All faces (including the empty one) in lexicographic order.

    Depth-first over vertices in increasing order; a vertex is appended only
    if it is an edge with every chosen vertex and the definitional face test
    still passes.
    """
    pool = vertex_pool(ctx, w)
    n = ctx.n
    g = ctx.gamma.mat
    out = [()]

    def extend(face, prod, start):
        k = len(face)
        for pos in range(start, len(pool)):
            c = pool[pos]
            ok = True
            for a in face:
                if _is_parallel(ctx, a, c) or not edge_by_index(ctx, a, c):
                    ok = False
                    break
            if not ok:
                continue
            p = kernels.matmul(ctx.refl_at(c).mat, prod, n)
            lp = kernels.rank_diff(GroupElement.identity(n).mat, p, n)
            if lp != k + 1 or lp + kernels.rank_diff(p, g, n) != n:
                continue
            nf = face + (c,)
            out.append(nf)
            extend(nf, p, pos + 1)

    extend((), GroupElement.identity(n).mat, 0)
    return out


def facet_dimension(ctx: CoxeterContext, w: GroupElement | None = None) -> int:
    """Number of vertices of a facet."""
    return ctx.n if w is None else w.length


def enumerate_facets(ctx: CoxeterContext, w: GroupElement | None = None) -> list:
    d = facet_dimension(ctx, w)
    return [f for f in enumerate_faces(ctx, w) if len(f) == d]


def f_vector(ctx: CoxeterContext, w: GroupElement | None = None) -> list:
    """``[f_-1, f_0, ..., f_{d-1}]``."""
    d = facet_dimension(ctx, w)
    f = [0] * (d + 1)
    for face in enumerate_faces(ctx, w):
        f[len(face)] += 1
    return f


def h_from_f(f) -> list:
    """h-vector of a (d-1)-dimensional complex from ``[f_-1, ..., f_{d-1}]``.

    ``sum_i f_{i-1} (x-1)^{d-i} = sum_i h_i x^{d-i}``.
    """
    d = len(f) - 1
    return [
        sum((-1) ** (k - i) * comb(d - i, k - i) * f[i] for i in range(k + 1))
        for k in range(d + 1)
    ]


def reduced_euler_characteristic(f) -> int:
    """``sum_{i >= -1} (-1)^i f_i`` for ``f = [f_-1, f_0, ...]``."""
    return sum((-1) ** (k + 1) * x for k, x in enumerate(f))


# ---------------------------------------------------------------- X(w)

@dataclass(frozen=True)
class SubcomplexHandle:
    w: GroupElement
    vertex_set: tuple  # rho-indices of Phi+(w)
    simple_system: tuple  # rho-indices of Pi(w), increasing


def sub_simple_system(ctx: CoxeterContext, w: GroupElement) -> SubcomplexHandle:
    vertices = vertex_pool(ctx, w)
    roots = [ctx.root(i) for i in vertices]
    rootset = set(roots)
    sums = set()
    for a in range(len(roots)):
        for b in range(a + 1, len(roots)):
            s = tuple(x + y for x, y in zip(roots[a], roots[b]))
            if s in rootset:
                sums.add(s)
    simple = tuple(i for i, r in zip(vertices, roots) if r not in sums)
    prod = GroupElement.identity(ctx.n)
    for i in simple:
        prod = prod * ctx.refl_at(i)
    if prod != w:
        raise SimpleSystemMismatch(
            f"R(delta_1)...R(delta_k) != w for Pi(w) = {face_roots(ctx, simple)}"
        )
    return SubcomplexHandle(w=w, vertex_set=tuple(vertices), simple_system=simple)


def _require_nontrivial(w: GroupElement) -> None:
    if w.is_identity():
        raise DegenerateInput("X(I) has only the empty face; first/last facet undefined")


def epsilon_roots(ctx: CoxeterContext, w: GroupElement, handle: SubcomplexHandle | None = None) -> list:
    """``eps_i = R(delta_1)...R(delta_{i-1}) delta_i`` in delta order."""
    handle = handle or sub_simple_system(ctx, w)
    out = []
    prefix = GroupElement.identity(ctx.n)
    for i in handle.simple_system:
        out.append(prefix(ctx.root(i)))
        prefix = prefix * ctx.refl_at(i)
    return out


def zeta_roots(ctx: CoxeterContext, w: GroupElement, handle: SubcomplexHandle | None = None) -> list:
    """``zeta_i = R(delta_k)...R(delta_{i+1}) delta_i`` in delta order."""
    handle = handle or sub_simple_system(ctx, w)
    out = []
    suffix = GroupElement.identity(ctx.n)
    for i in reversed(handle.simple_system):
        out.append(suffix(ctx.root(i)))
        suffix = suffix * ctx.refl_at(i)
    out.reverse()
    return out


def _verified_facet(ctx, w, roots, what) -> tuple:
    face = face_of(ctx, roots)
    pool = set(vertex_pool(ctx, w))
    if len(face) != w.length or not set(face) <= pool or not is_face(ctx, face):
        raise ConstructionFailed(f"{what} {face} is not a facet of X(w)")
    return face


def first_facet(ctx: CoxeterContext, w: GroupElement) -> tuple:
    """Lexicographically first facet of X(w)."""
    _require_nontrivial(w)
    return _verified_facet(ctx, w, epsilon_roots(ctx, w), "first facet")


def last_facet(ctx: CoxeterContext, w: GroupElement) -> tuple:
    """Lexicographically last facet of X(w)."""
    _require_nontrivial(w)
    handle = sub_simple_system(ctx, w)
    eps = epsilon_roots(ctx, w, handle)
    zeta = zeta_roots(ctx, w, handle)
    winv = w.inverse()
    for e, z in zip(eps, zeta):
        if z != tuple(-x for x in winv(e)):
            raise ConstructionFailed(f"zeta {z} != -w^-1(eps) for eps = {e}")
    return _verified_facet(ctx, w, zeta, "last facet")


# ---------------------------------------------------------------- vertex types and phi

@dataclass
class FacetRecord:
    face: tuple
    vertex_types: tuple
    eta: tuple
    theta: tuple
    phi_image: GroupElement | None = None

    @property
    def right(self) -> tuple:
        return tuple(i for i, t in zip(self.face, self.vertex_types) if t == RIGHT)

    @property
    def left(self) -> tuple:
        return tuple(i for i, t in zip(self.face, self.vertex_types) if t == LEFT)

    @property
    def n_right(self) -> int:
        return sum(1 for t in self.vertex_types if t == RIGHT)


def vertex_types(ctx: CoxeterContext, face) -> FacetRecord:
    """Left/right type of every vertex with the roots eta_i and theta_i.

    ``eta_i = R(tau_k)...R(tau_i) tau_i`` decides the type (left iff positive);
    ``theta_i = R(tau_1)...R(tau_i) tau_i``.
    """
    face = tuple(face)
    n = ctx.n
    k = len(face)
    refl = [ctx.refl_at(i) for i in face]
    roots = [ctx.root(i) for i in face]
    eta = [None] * k
    suffix = GroupElement.identity(n)
    for i in range(k - 1, -1, -1):
        suffix = suffix * refl[i]
        eta[i] = suffix(roots[i])
    theta = []
    prefix = GroupElement.identity(n)
    for i in range(k):
        prefix = prefix * refl[i]
        theta.append(prefix(roots[i]))
    types = tuple(LEFT if is_positive(e) else RIGHT for e in eta)
    return FacetRecord(face=face, vertex_types=types, eta=tuple(eta), theta=tuple(theta))


def phi(ctx: CoxeterContext, face) -> GroupElement:
    """Product of the reflections in the right vertices, largest vertex leftmost."""
    rec = vertex_types(ctx, face)
    return _phi_from_record(ctx, rec)


def _phi_from_record(ctx, rec: FacetRecord) -> GroupElement:
    n = ctx.n
    acc = GroupElement.identity(n).mat
    for i in rec.right:
        acc = kernels.matmul(ctx.refl_at(i).mat, acc, n)
    return GroupElement(acc, n)


def facet_record(ctx: CoxeterContext, face) -> FacetRecord:
    rec = vertex_types(ctx, face)
    rec.phi_image = _phi_from_record(ctx, rec)
    return rec


def flip_vertex(ctx: CoxeterContext, w: GroupElement | None, face, i: int):
    """Replace the vertex at position ``i`` (0-based).

    Returns ``(new_vertex, new_facet)`` for the unique other facet of X(w)
    (or Delta(gamma) when ``w`` is None) containing the opposite wall, or
    ``None`` if that wall is on the boundary.
    """
    face = tuple(face)
    old = face[i]
    rest = face[:i] + face[i + 1:]
    found = []
    for c in vertex_pool(ctx, w):
        if c in face:
            continue
        cand = tuple(sorted(rest + (c,)))
        if is_face(ctx, cand):
            found.append((c, cand))
    if len(found) > 1:
        raise ConstructionFailed(f"wall opposite rho_{old} lies in {len(found) + 1} facets")
    return found[0] if found else None


def phi_preimage(ctx: CoxeterContext, w: GroupElement) -> tuple:
    """The unique facet F of Delta(gamma) with phi(F) = w.

    Right vertices form the last facet of X(w) and left positive vertices the
    first facet of X(w^-1 gamma') where gamma' is the minimal standard
    parabolic Coxeter element above w; the negative simple roots outside the
    support of gamma' complete the facet.
    """
    gp, labels = minimal_parabolic_coxeter(ctx, w)
    roots = []
    if not w.is_identity():
        roots += face_roots(ctx, last_facet(ctx, w))
    v = w.inverse() * gp
    if not v.is_identity():
        roots += face_roots(ctx, first_facet(ctx, v))
    for j in range(ctx.n):
        if j not in labels:
            roots.append(tuple(-x for x in ctx.rs.simple_roots[j]))
    if len(set(roots)) != ctx.n:
        raise ConstructionFailed(f"candidate preimage has {len(set(roots))} distinct vertices")
    face = face_of(ctx, roots)
    if not is_face(ctx, face):
        raise ConstructionFailed(f"candidate preimage {face} is not a face")
    if phi(ctx, face) != w:
        raise ConstructionFailed(f"phi of candidate preimage {face} is not w")
    return face


# ---------------------------------------------------------------- shelling

@dataclass
class ShellingRecord:
    ordered_facets: list
    restriction_sets: list
    predicted_restriction_sets: list
    h_from_shelling: list
    f_vector: list
    h_from_f: list
    records: list = field(default_factory=list, repr=False)


def _delta_key(ctx: CoxeterContext, face: tuple):
    pos = tuple(i for i in face if 1 <= i <= ctx.N)
    # more positive vertices first; among equal counts the lex-later positive part first
    return (-len(pos), tuple(-i for i in pos), face)


def shelling_sequence(ctx: CoxeterContext, facets, w: GroupElement | None = None) -> list:
    if w is None:
        return sorted(facets, key=lambda f: _delta_key(ctx, f))
    return sorted(facets, reverse=True)


def restriction_sets(facets) -> list:
    """Restriction sets straight from the definition.

    A vertex x of F_j is restricted iff F_j minus x lies in an earlier facet.
    """
    ridges = set()
    out = []
    for face in facets:
        r = []
        for pos, x in enumerate(face):
            ridge = face[:pos] + face[pos + 1:]
            if ridge in ridges:
                r.append(x)
        out.append(tuple(r))
        for pos in range(len(face)):
            ridges.add(face[:pos] + face[pos + 1:])
    return out


def shelling_violations(facets, rsets) -> list:
    """Pairs (i, j), i < j, with R(F_j) inside the vertex set of F_i."""
    bits = {}
    def mask(vs):
        m = 0
        for v in vs:
            b = bits.get(v)
            if b is None:
                b = bits[v] = 1 << len(bits)
            m |= b
        return m
    vmasks = [mask(f) for f in facets]
    rmasks = [mask(r) for r in rsets]
    bad = []
    for j in range(len(facets)):
        rj = rmasks[j]
        for i in range(j):
            if rj & ~vmasks[i] == 0:
                bad.append((i, j))
                break
    return bad


def h_from_shelling(rec: ShellingRecord) -> list:
    d = len(rec.ordered_facets[0]) if rec.ordered_facets else 0
    h = [0] * (d + 1)
    for r in rec.restriction_sets:
        h[len(r)] += 1
    return h


def shelling_order(ctx: CoxeterContext, w: GroupElement | None = None) -> ShellingRecord:
    """Shelling of Delta(gamma) (w=None) or reverse-lex shelling of X(w)."""
    faces = enumerate_faces(ctx, w)
    d = facet_dimension(ctx, w)
    fv = [0] * (d + 1)
    for face in faces:
        fv[len(face)] += 1
    facets = shelling_sequence(ctx, [f for f in faces if len(f) == d], w)
    rsets = restriction_sets(facets)
    bad = shelling_violations(facets, rsets)
    if bad:
        i, j = bad[0]
        raise ShellingViolation(
            f"R(F_{j + 1}) = {rsets[j]} lies in F_{i + 1} = {facets[i]}"
        )
    records = [facet_record(ctx, f) for f in facets]
    predicted = [rec.left for rec in records]
    for f, a, b in zip(facets, rsets, predicted):
        if a != b:
            raise ShellingViolation(f"restriction set {a} of {f} != left vertices {b}")
    rec = ShellingRecord(
        ordered_facets=facets,
        restriction_sets=rsets,
        predicted_restriction_sets=predicted,
        h_from_shelling=[],
        f_vector=fv,
        h_from_f=h_from_f(fv),
        records=records,
    )
    rec.h_from_shelling = h_from_shelling(rec)
    return rec

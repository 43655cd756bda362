"""The noncrossing partition lattice [I, gamma] in absolute order."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .absolute_order import (
    CoxeterContext,
    GroupElement,
    NotBelowGamma,
    leq_abs,
    peripheral_test,
    positive_roots_below,
    product,
)
from .root_system import CartanType, support


class NonIntegerResult(ArithmeticError):
    pass


class VerificationFailed(AssertionError):
    pass


class ElementCapExceeded(RuntimeError):
    pass


@dataclass(eq=False)
class NcpLattice:
    elements: list
    rank_counts: list
    peripheral_flags: list
    reflection_list: list
    _position: dict = field(repr=False)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, w):
        return w in self._position

    def position(self, w: GroupElement) -> int:
        return self._position[w]

    def of_rank(self, k: int) -> list:
        return [w for w in self.elements if w.length == k]


def enumerate_ncp(ctx: CoxeterContext, cap: int = 10**6) -> NcpLattice:
    """Breadth-first closure of {I} under right multiplication by reflections."""
    n = ctx.n
    g = ctx.gamma
    refls = [ctx.refl_at(i) for i in ctx.positive_indices()]
    ident = GroupElement.identity(n)
    levels = [[ident]]
    seen = {ident}
    for k in range(n):
        nxt = []
        for w in levels[-1]:
            for r in refls:
                u = w * r
                if u in seen:
                    continue
                lu = u.length
                if lu != k + 1:
                    continue
                if lu + kernels.rank_diff(u.mat, g.mat, n) != n:
                    continue
                seen.add(u)
                nxt.append(u)
                if len(seen) > cap:
                    raise ElementCapExceeded(f"more than {cap} lattice elements")
        levels.append(nxt)
    if levels[n] != [g]:
        raise VerificationFailed("top rank of [I, gamma] is not {gamma}")
    elements = [w for level in levels for w in level]
    flags = [peripheral_test(ctx, w) for w in elements]
    reflections = [w for w in levels[1]] if n >= 1 else []
    return NcpLattice(
        elements=elements,
        rank_counts=[len(level) for level in levels],
        peripheral_flags=flags,
        reflection_list=reflections,
        _position={w: i for i, w in enumerate(elements)},
    )


def catalan_number(t: CartanType) -> int:
    h = t.coxeter_number
    q = Fraction(1)
    for e in t.exponents:
        q *= Fraction(e + h + 1, e + 1)
    if q.denominator != 1:
        raise NonIntegerResult(f"Catalan number of {t} came out as {q}")
    return q.numerator


def count_nonperipheral_by_rank(lat: NcpLattice) -> list:
    counts = [0] * len(lat.rank_counts)
    for w, flag in zip(lat.elements, lat.peripheral_flags):
        if not flag:
            counts[w.length] += 1
    return counts


def count_peripheral_by_rank(lat: NcpLattice) -> list:
    counts = [0] * len(lat.rank_counts)
    for w, flag in zip(lat.elements, lat.peripheral_flags):
        if flag:
            counts[w.length] += 1
    return counts


def root_support(ctx: CoxeterContext, w: GroupElement) -> frozenset:
    """Union of supports of the positive roots in M(w), as 0-based labels."""
    out = set()
    for r in positive_roots_below(ctx, w):
        out |= support(r)
    return frozenset(out)


def peripheral_by_support(ctx: CoxeterContext, w: GroupElement) -> bool:
    """Membership in a proper standard parabolic subgroup (support criterion)."""
    return len(root_support(ctx, w)) < ctx.n


def parabolic_coxeter(ctx: CoxeterContext, labels) -> GroupElement:
    """Product of the simple reflections with the given labels, in bipartite order."""
    labels = set(labels)
    order = [j for j in ctx.rs.bipartite_order if j in labels]
    return product([ctx.reflection(ctx.rs.simple_roots[j]) for j in order], ctx.n)


def minimal_parabolic_coxeter(ctx: CoxeterContext, w: GroupElement) -> tuple[GroupElement, frozenset]:
    """Smallest standard parabolic Coxeter element above ``w``.

    Returns ``(gamma', S)`` with ``S`` the 0-based simple-root labels used.
    """
    if not leq_abs(w, ctx.gamma):
        raise NotBelowGamma("minimal_parabolic_coxeter needs w <= gamma")
    labels = root_support(ctx, w)
    gp = parabolic_coxeter(ctx, labels)
    if not leq_abs(w, gp):
        raise VerificationFailed(f"w is not below the parabolic Coxeter element on {sorted(labels)}")
    for j in labels:
        smaller = parabolic_coxeter(ctx, labels - {j})
        if leq_abs(w, smaller):
            raise VerificationFailed(f"label {j} can be dropped from {sorted(labels)}")
    return gp, labels


def full_support_reflection_count(ctx: CoxeterContext) -> int:
    return sum(1 for r in ctx.rs.positive_roots if all(r))


def kreweras_complement(ctx: CoxeterContext, w: GroupElement) -> GroupElement:
    """``w^-1 gamma``."""
    return w.inverse() * ctx.gamma

"""Crystallographic root systems in simple-root coordinates.

Coordinates always refer to the simple roots in standard (Bourbaki) label
order, so every root is a tuple of integers.  The bipartite ordering of the
simple roots used to build the Coxeter element is recorded separately in
:attr:`RootSystem.bipartite_order`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exact_arith import Matrix, bilinear, vec_neg

_DEFAULT_RANGES = {
    "A": range(1, 9),
    "B": range(2, 6),
    "C": range(2, 6),
    "D": range(4, 7),
    "E": (6, 7),
    "F": (4,),
    "G": (2,),
}
# types parsed only with allow_large
_LARGE = {("E", 7), ("E", 8)}


class UnsupportedType(ValueError):
    """Cartan type that is unknown, noncrystallographic or out of range."""


class NotARoot(ValueError):
    pass


@dataclass(frozen=True)
class CartanType:
    family: str
    rank: int
    exponents: tuple
    coxeter_number: int

    def __str__(self):
        return f"{self.family}{self.rank}"

    @property
    def name(self) -> str:
        return str(self)


def _exponents(family: str, n: int) -> tuple[tuple, int]:
    if family == "A":
        return tuple(range(1, n + 1)), n + 1
    if family in "BC":
        return tuple(range(1, 2 * n, 2)), 2 * n
    if family == "D":
        return tuple(sorted(list(range(1, 2 * n - 2, 2)) + [n - 1])), 2 * n - 2
    table = {
        ("E", 6): ((1, 4, 5, 7, 8, 11), 12),
        ("E", 7): ((1, 5, 7, 9, 11, 13, 17), 18),
        ("E", 8): ((1, 7, 11, 13, 17, 19, 23, 29), 30),
        ("F", 4): ((1, 5, 7, 11), 12),
        ("G", 2): ((1, 5), 6),
    }
    return table[(family, n)]


def _valid(family: str, n: int) -> bool:
    return (
        (family == "A" and n >= 1)
        or (family in "BC" and n >= 2)
        or (family == "D" and n >= 4)
        or (family == "E" and n in (6, 7, 8))
        or (family == "F" and n == 4)
        or (family == "G" and n == 2)
    )


def cartan_type(family: str, n: int) -> CartanType:
    family = family.upper()
    if not _valid(family, n):
        raise UnsupportedType(f"{family}{n} is not an irreducible crystallographic type")
    exps, h = _exponents(family, n)
    if len(exps) != n or exps[0] + exps[-1] != h:
        raise AssertionError(f"exponent table for {family}{n} is inconsistent")
    return CartanType(family, n, exps, h)


_I2 = {3: ("A", 2), 4: ("B", 2), 6: ("G", 2)}


def parse_cartan_type(text: str, allow_large: bool = False) -> CartanType:
    """Parse strings like ``"A3"``, ``"E6"`` or ``"I2(4)"``.

    Types outside the default desk-scale list (E7, E8, larger ranks) need
    ``allow_large``.
    """
    s = text.strip().upper().replace("_", "")
    m = re.fullmatch(r"I2\((\d+)\)", s)
    if m:
        k = int(m.group(1))
        if k not in _I2:
            raise UnsupportedType(f"I2({k}) is not crystallographic")
        family, n = _I2[k]
        return cartan_type(family, n)
    m = re.fullmatch(r"([A-Z])(\d+)", s)
    if not m:
        raise UnsupportedType(f"cannot parse Cartan type {text!r}")
    family, n = m.group(1), int(m.group(2))
    if family == "H":
        raise UnsupportedType(f"{s} is not crystallographic")
    if family not in _DEFAULT_RANGES or not _valid(family, n):
        raise UnsupportedType(f"unknown Cartan type {text!r}")
    if not allow_large and ((family, n) in _LARGE or n not in _DEFAULT_RANGES[family]):
        raise UnsupportedType(f"{s} is outside the default range; pass allow_large")
    return cartan_type(family, n)


def _dynkin(family: str, n: int) -> tuple[list[tuple[int, int]], list[Fraction]]:
    """Edges (0-based labels) and squared lengths of the simple roots."""
    if family == "A":
        return [(i, i + 1) for i in range(n - 1)], [2] * n
    if family == "B":
        return [(i, i + 1) for i in range(n - 1)], [2] * (n - 1) + [1]
    if family == "C":
        return [(i, i + 1) for i in range(n - 1)], [2] * (n - 1) + [4]
    if family == "D":
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
        return edges, [2] * n
    if family == "E":
        edges = [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, n - 1)]
        return edges, [2] * n
    if family == "F":
        return [(0, 1), (1, 2), (2, 3)], [2, 2, 1, 1]
    if family == "G":
        return [(0, 1)], [2, 6]
    raise UnsupportedType(family)


def gram_matrix(t: CartanType) -> Matrix:
    """Gram form of the simple roots with the standard squared lengths."""
    edges, sq = _dynkin(t.family, t.rank)
    n = t.rank
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = Fraction(sq[i])
    for i, j in edges:
        # Cartan integer on the long side is -1, so B = -|long|^2 / 2
        g[i][j] = g[j][i] = -Fraction(max(sq[i], sq[j]), 2)
    return Matrix(g)


@dataclass(frozen=True, eq=False)
class RootSystem:
    cartan_type: CartanType
    gram: Matrix
    simple_roots: tuple
    positive_roots: tuple
    s: int
    bipartite_order: tuple
    # coroot pairing <alpha_j, alpha_i^vee> as integers: cartan[i][j]
    cartan: tuple = field(repr=False)
    _root_set: frozenset = field(repr=False)

    @property
    def rank(self) -> int:
        return self.cartan_type.rank

    @property
    def roots(self) -> tuple:
        return self.positive_roots + tuple(vec_neg(r) for r in self.positive_roots)

    def is_root(self, v) -> bool:
        return tuple(v) in self._root_set

    def inner(self, u, v):
        return bilinear(self.gram, u, v)

    @property
    def pi1(self) -> tuple:
        return self.bipartite_order[: self.s]

    @property
    def pi2(self) -> tuple:
        return self.bipartite_order[self.s:]


def _reflect_simple(v: tuple, i: int, cartan) -> tuple:
    # R(alpha_i)(v) = v - <v, alpha_i^vee> alpha_i
    c = sum(v[j] * cartan[i][j] for j in range(len(v)))
    if not c:
        return v
    out = list(v)
    out[i] -= c
    return tuple(out)


def bipartition(t: CartanType) -> tuple[tuple, tuple, int]:
    """Two-colour the Coxeter graph.

    Returns ``(pi1, pi2, s)`` as 0-based standard labels; ``pi1`` is the
    colour class of label 0 and both classes keep label order.
    """
    edges, _ = _dynkin(t.family, t.rank)
    n = t.rank
    adj = {i: set() for i in range(n)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    colour = {0: 0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in adj[i]:
            if j not in colour:
                colour[j] = 1 - colour[i]
                stack.append(j)
            elif colour[j] == colour[i]:
                raise AssertionError("Coxeter graph is not bipartite")
    pi1 = tuple(i for i in range(n) if colour[i] == 0)
    pi2 = tuple(i for i in range(n) if colour[i] == 1)
    return pi1, pi2, len(pi1)


def build_root_system(t: CartanType) -> RootSystem:
    n = t.rank
    gram = gram_matrix(t)
    pairing = [[Fraction(2 * gram[i, j], gram[i, i]) for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in pairing for x in row):
        raise AssertionError("non-integral Cartan entry")
    cartan = tuple(tuple(int(x) for x in row) for row in pairing)
    simple = tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n))
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(n):
                u = _reflect_simple(v, i, cartan)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    positive = []
    for v in seen:
        if all(x >= 0 for x in v):
            positive.append(v)
        elif not all(x <= 0 for x in v):
            raise AssertionError(f"root {v} has mixed signs")
    positive.sort(key=lambda v: (sum(v), tuple(-x for x in v)))
    N = len(positive)
    if N * 2 != len(seen) or 2 * N != n * t.coxeter_number:
        raise AssertionError(f"{t}: found {N} positive roots, expected {n * t.coxeter_number // 2}")
    pi1, pi2, s = bipartition(t)
    for block in (pi1, pi2):
        for a in block:
            for b in block:
                if a != b and gram[a, b] != 0:
                    raise AssertionError("bipartite block is not orthogonal")
    return RootSystem(
        cartan_type=t,
        gram=gram,
        simple_roots=simple,
        positive_roots=tuple(positive),
        s=s,
        bipartite_order=pi1 + pi2,
        cartan=cartan,
        _root_set=frozenset(seen),
    )


def reflection_flat(rs: RootSystem, root) -> tuple:
    """Matrix of R(root) as a flat row-major integer tuple.

    Column j is the image of the j-th simple root:
    ``R(a)(alpha_j) = alpha_j - (2 B(alpha_j, a) / B(a, a)) a``.
    """
    root = tuple(root)
    if not rs.is_root(root):
        raise NotARoot(f"{root} is not a root of {rs.cartan_type}")
    n = rs.rank
    g = rs.gram
    aa = bilinear(g, root, root)
    coeffs = []
    for j in range(n):
        c = Fraction(2 * sum(g[j, k] * root[k] for k in range(n)), aa)
        if c.denominator != 1:
            raise AssertionError("non-integral reflection coefficient")
        coeffs.append(int(c))
    return tuple(
        (1 if i == j else 0) - coeffs[j] * root[i] for i in range(n) for j in range(n)
    )


def reflection_matrix(rs: RootSystem, root) -> Matrix:
    return Matrix.from_flat(reflection_flat(rs, root), rs.rank)


POSITIVE, NEGATIVE = "Positive", "Negative"


def root_sign(rs: RootSystem, v) -> str:
    v = tuple(v)
    if not rs.is_root(v):
        raise NotARoot(f"{v} is not a root of {rs.cartan_type}")
    return POSITIVE if all(x >= 0 for x in v) else NEGATIVE


def is_positive(v) -> bool:
    """Sign of a vector already known to be a root."""
    for x in v:
        if x:
            return x > 0
    raise NotARoot("zero vector")


def support(v) -> frozenset:
    return frozenset(i for i, x in enumerate(v) if x)

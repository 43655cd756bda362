from __future__ import annotations

from fractions import Fraction

import pytest

from coxcluster.absolute_order import (
    GroupElement,
    NotAlmostPositive,
    NotBelowGamma,
    ParallelRoots,
    absolute_length,
    is_edge,
    leq_abs,
    mu_apply,
    peripheral_test,
    product,
    rho_compare,
)
from coxcluster.exact_arith import Matrix
from conftest import ctx_for, lattice_for

A1, A2 = (1, 0), (0, 1)


def neg(v):
    return tuple(-x for x in v)


def test_a2_rho_order(a2):
    assert [a2.root(i) for i in a2.indices()] == [(0, -1), (1, 0), (1, 1), (0, 1), (-1, 0)]
    assert (a2.lo, a2.hi) == (0, 4)
    assert a2.omega == ((1, 1), (0, 1))


def test_a1_rho_order():
    c = ctx_for("A1")
    assert [c.root(i) for i in c.indices()] == [(1,), (-1,)]
    assert (c.lo, c.hi) == (1, 2)


def test_b3_index_range(b3):
    assert (b3.lo, b3.hi) == (0, 11)
    # -1 is in W(B3), so the negatives line up termwise
    assert b3.root(0) == neg(b3.root(9))
    assert b3.root(10) == neg(b3.root(1))
    assert b3.root(11) == neg(b3.root(2))


def test_lengths(a2):
    ident = GroupElement.identity(2)
    assert absolute_length(ident) == 0
    assert all(a2.reflection(r).length == 1 for r in a2.rs.positive_roots)
    assert absolute_length(a2.gamma) == 2


def test_leq_abs_examples(a2):
    g = a2.gamma
    ident = GroupElement.identity(2)
    assert all(leq_abs(ident, w) for w in lattice_for("A2").elements)
    assert leq_abs(a2.reflection(A1), g)
    assert not leq_abs(g.inverse(), g)
    assert g * g == g.inverse()


def test_mu_examples(a2):
    assert mu_apply(a2, A1) == (Fraction(4, 3), Fraction(2, 3))
    assert mu_apply(a2, (0, 0)) == (0, 0)
    assert a2.mu_dot(A1, A1) == 2 == a2.rs.inner(A1, A1)
    assert a2.mu_matrix == (Matrix.identity(2) - a2.gamma.matrix).inverse().scale(2)


def test_rho_compare(a2):
    assert rho_compare(a2, (0, -1), A1) == -1
    assert rho_compare(a2, A2, (-1, 0)) == -1
    assert rho_compare(a2, (1, 1), (1, 1)) == 0
    assert rho_compare(a2, (-1, 0), (1, 1)) == 1
    with pytest.raises(NotAlmostPositive):
        rho_compare(a2, (-1, -1), A1)


def test_edges(a2):
    assert is_edge(a2, A1, (1, 1))
    assert not is_edge(a2, A1, A2)
    assert is_edge(a2, (-1, 0), (0, -1))
    with pytest.raises(ParallelRoots):
        is_edge(a2, A1, (-1, 0))


@pytest.mark.parametrize("name", ["A2", "A3", "B3", "G2", "D4"])
def test_edge_test_agrees_with_absolute_order(name):
    c = ctx_for(name)
    for i in c.indices():
        for j in c.indices():
            if i >= j or c.root(i) == neg(c.root(j)):
                continue
            later, earlier = c.refl_at(j), c.refl_at(i)
            assert is_edge(c, c.root(i), c.root(j)) == leq_abs(later * earlier, c.gamma)


@pytest.mark.parametrize("name", ["A1", "A3", "B3", "C3", "D4", "F4", "E6"])
def test_gamma_shifts_rho(name):
    c = ctx_for(name)
    for i in range(1, c.N + 1):
        if i + c.n <= c.hi:
            assert c.gamma(c.root(i)) == c.root(i + c.n)
    assert set(c.root(i) for i in c.positive_indices()) == set(c.rs.positive_roots)


@pytest.mark.parametrize("name", ["A2", "A3", "B3", "G2"])
def test_order_axioms_on_lattice(name):
    els = lattice_for(name).elements
    for a in els:
        assert leq_abs(a, a)
        for b in els:
            if a != b and leq_abs(a, b):
                assert not leq_abs(b, a)
                for c in els:
                    if leq_abs(b, c):
                        assert leq_abs(a, c)


@pytest.mark.parametrize("name", ["A2", "B3", "D4"])
def test_group_elements_preserve_form(name):
    c = ctx_for(name)
    g = c.rs.gram
    for w in lattice_for(name).elements:
        m = w.matrix
        assert m.transpose() @ g @ m == g


def test_peripheral_examples(a2):
    assert not peripheral_test(a2, a2.gamma)
    assert peripheral_test(a2, GroupElement.identity(2))
    assert not peripheral_test(a2, a2.reflection((1, 1)))
    assert peripheral_test(a2, a2.reflection(A1))
    with pytest.raises(NotBelowGamma):
        peripheral_test(a2, a2.gamma.inverse())


def test_product_order(a2):
    r1, r2 = a2.reflection(A1), a2.reflection(A2)
    assert product([r1, r2], 2) == a2.gamma
    assert product([], 2).is_identity()

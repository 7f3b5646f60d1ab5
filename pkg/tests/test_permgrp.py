import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quandle16p.permgrp import (
    PermGroup,
    Permutation,
    abelian_invariants,
    bfs_closure,
    compose,
    inverse_perm,
    perm_order,
)


def cycle(n, *cycles):
    return Permutation.from_cycles(n, cycles).image


perms = st.integers(2, 7).flatmap(lambda n: st.permutations(list(range(n))).map(np.array))


@st.composite
def small_groups(draw):
    n = draw(st.integers(2, 7))
    k = draw(st.integers(1, 3))
    gens = [np.array(draw(st.permutations(list(range(n))))) for _ in range(k)]
    return PermGroup.closure(gens, degree=n), gens


def test_permutation_product_convention():
    a = Permutation.from_cycles(3, [(0, 1)])
    b = Permutation.from_cycles(3, [(1, 2)])
    # (a * b)(x) = a(b(x))
    assert (a * b)(1) == a(b(1)) == 2
    assert (a * b).order() == 3
    assert (a * a).is_identity()


@given(perms)
def test_inverse_and_order(p):
    ident = np.arange(p.size)
    assert np.array_equal(compose(p, inverse_perm(p)), ident)
    k = perm_order(p)
    q = ident
    for _ in range(k):
        q = compose(p, q)
    assert np.array_equal(q, ident)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_symmetric_and_alternating_orders(n):
    Sn = PermGroup.closure([cycle(n, tuple(range(n))), cycle(n, (0, 1))])
    assert Sn.order == math.factorial(n)
    An = Sn.derived_subgroup()
    assert An.order == math.factorial(n) // 2
    assert Sn.is_solvable() == (n <= 4)


def test_psl27_on_projective_line():
    # points 0..6 of GF(7) plus infinity = 7
    inf = 7

    def mobius(f):
        return np.array([f(x) for x in range(8)])

    shift = mobius(lambda x: inf if x == inf else (x + 1) % 7)
    scale = mobius(lambda x: inf if x == inf else 2 * x % 7)
    invert = mobius(lambda x: 0 if x == inf else inf if x == 0 else (-pow(x, 5, 7)) % 7)
    g = PermGroup.closure([shift, scale, invert])
    assert g.order == 168
    assert g.derived_subgroup().order == 168
    assert not g.is_solvable()
    assert g.is_transitive()
    assert g.stabilizer(inf).order == 21


@given(small_groups())
def test_order_matches_breadth_first_enumeration(data):
    G, gens = data
    assert G.order == bfs_closure(gens, G.degree).shape[0]


@given(small_groups())
def test_membership_of_elements(data):
    G, _ = data
    elems = G.elements
    assert elems.shape[0] == G.order
    assert G.contains_many(elems).all()
    assert np.unique(G.element_index(elems)).size == G.order


@given(small_groups())
def test_orbit_stabilizer(data):
    G, _ = data
    for orb in G.orbits():
        assert G.order == len(orb) * G.stabilizer(orb[0]).order


@given(small_groups())
def test_center_and_derived_are_normal(data):
    G, _ = data
    Z = G.center()
    D = G.derived_subgroup()
    assert Z.is_normal_in(G)
    assert D.is_normal_in(G)
    assert Z.is_abelian()
    elems = G.elements
    for z in Z.elements:
        assert all(np.array_equal(compose(z, g), compose(g, z)) for g in elems)


@given(small_groups())
def test_quotient_by_derived_is_abelian(data):
    G, _ = data
    D = G.derived_subgroup()
    Q = G.coset_action(D)
    assert Q.order == G.order // D.order
    assert Q.is_abelian()


def test_nilpotency_of_dihedral_groups():
    def dihedral(m):
        return PermGroup.closure([cycle(m, tuple(range(m))), Permutation(np.array([(-i) % m for i in range(m)])).image])

    assert dihedral(8).is_nilpotent()
    assert not dihedral(6).is_nilpotent()
    assert dihedral(6).is_solvable()


def test_abelian_invariants():
    # Z2 x Z4 acting on 2 + 4 points, Z3 x Z3 on 3 + 3
    g = PermGroup.closure([cycle(6, (0, 1)), cycle(6, (2, 3, 4, 5))])
    assert abelian_invariants(g) == (2, 4)
    h = PermGroup.closure([cycle(6, (0, 1, 2)), cycle(6, (3, 4, 5))])
    assert abelian_invariants(h) == (3, 3)
    with pytest.raises(ValueError):
        abelian_invariants(PermGroup.closure([cycle(3, (0, 1, 2)), cycle(3, (0, 1))]))


def test_intersection_and_join():
    n = 4
    a = PermGroup.closure([cycle(n, (0, 1))])
    b = PermGroup.closure([cycle(n, (2, 3))])
    assert a.join(b).order == 4
    assert a.intersection(b).order == 1
    S4 = PermGroup.closure([cycle(n, (0, 1, 2, 3)), cycle(n, (0, 1))])
    A4 = S4.derived_subgroup()
    assert A4.intersection(S4).equals(A4)
    assert a.is_subgroup_of(S4) and not a.is_subgroup_of(A4)


def test_block_action_kernel():
    # D4 on the square's corners keeps the diagonals {0,2}, {1,3} as blocks
    G = PermGroup.closure([cycle(4, (0, 1, 2, 3)), cycle(4, (1, 3))])
    K = G.block_action_kernel([0, 1, 0, 1])
    assert K.order == 4
    assert K.is_normal_in(G)

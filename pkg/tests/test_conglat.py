import itertools

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qstrategies import latin_quandles, quandles, scalar_affine
from quandle16p.conglat import (
    Congruence,
    all_congruences,
    all_congruences_exhaustive,
    dis_alpha,
    dis_sup_alpha,
    gamma,
    generated_congruence,
    is_abelian_cong,
    is_central_cong,
    is_congruence,
    is_directly_decomposable,
    is_subdirectly_irreducible,
    kernel_cong,
    lattice_shape,
    lattice_to_dot,
    orbit_cong,
    principal_congruence,
    zeta,
)
from quandle16p.quandle import affine, direct_product, is_compatible


def set_partitions(n):
    """Every set partition of range(n) as a label list (restricted growth strings)."""

    def grow(prefix, top):
        if len(prefix) == n:
            yield list(prefix)
            return
        for b in range(top + 2):
            yield from grow(prefix + [b], max(top, b))

    yield from grow([0], 0)


def brute_lattice(q):
    return {tuple(lab) for lab in set_partitions(q.n) if is_compatible(q, lab)}


def as_set(L):
    return {tuple(c.labels.tolist()) for c in L}


small = st.one_of(
    scalar_affine(primes=(3, 5, 7)),
    st.sampled_from([affine(-1, modulus=m) for m in (4, 6, 8, 9)] + [affine(2, modulus=9), affine(3, modulus=8)]),
)


@given(small)
def test_lattice_matches_all_partitions(q):
    assert as_set(all_congruences(q)) == brute_lattice(q)


@given(quandles())
def test_lattice_matches_exhaustive_join_closure(q):
    assert as_set(all_congruences(q)) == as_set(all_congruences_exhaustive(q))


@given(quandles(), st.data())
def test_principal_congruence_is_least(q, data):
    x = data.draw(st.integers(0, q.n - 1))
    y = data.draw(st.integers(0, q.n - 1))
    c = principal_congruence(q, x, y)
    assert is_congruence(q, c) and c.related(x, y)
    for d in all_congruences(q):
        if d.related(x, y):
            assert c <= d


@given(quandles())
def test_lattice_closed_under_meet_and_join(q):
    # trivial quandles reach every set partition (Bell(8) = 4140); the
    # pairwise sweep is quadratic in that, so keep it to modest lattices
    assume(q.n <= 6 or q.connected)
    L = all_congruences(q)
    elems = set(L)
    for a, b in itertools.combinations(L.elements, 2):
        assert a.meet(b) in elems
        assert a.join(b) in elems
        assert a.meet(b) <= a <= a.join(b)
    assert L.bottom.is_bottom and L.top.is_top


def test_meet_and_join_by_hand():
    a = Congruence(np.array([0, 0, 1, 1, 2, 2]))
    b = Congruence(np.array([0, 1, 1, 2, 2, 0]))
    assert a.meet(b).is_bottom
    assert a.join(b).is_top
    assert a.composition_is_total(Congruence(np.array([0, 1, 0, 1, 0, 1])))


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_prime_affine_quandles_are_simple(p):
    L = all_congruences(affine(2, modulus=p))
    assert len(L) == 2
    assert is_subdirectly_irreducible(L)
    assert lattice_shape(L).tag == "chain-2"


def test_product_of_two_simple_quandles_is_a_square():
    q = direct_product(affine(2, modulus=3), affine(2, modulus=5))
    L = all_congruences(q)
    assert len(L) == 4
    assert not is_subdirectly_irreducible(L)
    assert is_directly_decomposable(q, L)
    assert lattice_shape(L).tag == "other"


def test_cyclic_prime_power_gives_a_chain():
    q = affine(2, modulus=9)
    L = all_congruences(q)
    assert lattice_shape(L).tag == "chain-3"
    assert is_subdirectly_irreducible(L)
    assert not is_directly_decomposable(q, L)


@given(latin_quandles())
def test_galois_connections(q):
    L = all_congruences(q)
    dis = q.dis
    for a in L:
        lo, hi = dis_alpha(q, a), dis_sup_alpha(q, a)
        assert lo.is_subgroup_of(hi) and hi.is_subgroup_of(dis)
        assert lo.is_normal_in(q.lmlt)
        assert orbit_cong(q, lo) <= a <= kernel_cong(q, hi)
        # the orbit operator is a closure in one direction, the kernel operator in the other
        assert dis_alpha(q, orbit_cong(q, lo)).equals(lo)


@given(latin_quandles())
def test_affine_latin_quandles_are_abelian(q):
    top = Congruence.top(q.n)
    assert q.dis.is_abelian()
    assert is_abelian_cong(q, top)
    assert gamma(q).is_bottom


@given(scalar_affine())
def test_prime_affine_center_is_everything(q):
    assert zeta(q).is_top
    assert is_central_cong(q, Congruence.top(q.n))


def test_generated_congruence_of_several_pairs():
    q = direct_product(affine(2, modulus=3), affine(2, modulus=5))
    c = generated_congruence(q, [(0, 3)])  # same first coordinate, so only the Z_5 factor collapses
    assert c.num_blocks == 3


def test_dot_output():
    L = all_congruences(affine(2, modulus=9))
    dot = lattice_to_dot(L)
    assert dot.startswith("digraph congruences {")
    assert dot.count("->") == len(L.hasse) == 2
    assert "|Q/α| = 3, blocks = 3" in dot

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qstrategies import latin_quandles, matrix_affine, scalar_affine
from quandle16p.constructions import quaternion_group
from quandle16p.grpmodel import elementary_abelian, extend_map
from quandle16p.linfq import FqMatrix, det
from quandle16p.quandle import affine, direct_product
from quandle16p.quiso import (
    are_isomorphic,
    classify_corpus,
    conjugacy_orbit,
    dedupe,
    fingerprint,
    generating_set,
    is_isomorphic,
    iso_via_conjugacy,
    term_profile,
)


def brute_isomorphic(a, b):
    if a.n != b.n:
        return False
    for perm in itertools.permutations(range(a.n)):
        perm = np.array(perm)
        if np.array_equal(perm[a.star], b.star[np.ix_(perm, perm)]):
            return True
    return False


def is_homomorphism(phi, a, b):
    return np.array_equal(phi[a.star], b.star[np.ix_(phi, phi)])


connected_small = st.one_of(scalar_affine(primes=(3, 5, 7)), matrix_affine(latin=True))


@given(connected_small, connected_small)
def test_against_brute_force(a, b):
    if a.n > 7:
        return
    assert is_isomorphic(a, b) == brute_isomorphic(a, b)


@given(latin_quandles(), st.data())
def test_relabelled_copy_is_found(q, data):
    perm = np.array(data.draw(st.permutations(list(range(q.n)))))
    r = q.relabel(perm)
    phi = are_isomorphic(q, r)
    assert phi is not None
    assert np.unique(phi).size == q.n
    assert is_homomorphism(phi, q, r)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_scalar_affine_quandles_are_pairwise_distinct(p):
    qs = [affine(c, modulus=p) for c in range(2, p)]
    for a, b in itertools.combinations(qs, 2):
        assert are_isomorphic(a, b) is None


def test_different_sizes_are_not_isomorphic():
    assert are_isomorphic(affine(2, modulus=3), affine(2, modulus=5)) is None


def test_product_order_does_not_matter():
    a, b = affine(2, modulus=3), affine(3, modulus=5)
    assert is_isomorphic(direct_product(a, b), direct_product(b, a))


@given(latin_quandles())
def test_generating_set_generates(q):
    gens = generating_set(q)
    assert q.subquandle(gens).size == q.n
    assert len(gens) <= 1 + int(np.log2(q.n)) + 1


@given(latin_quandles(), st.data())
def test_fingerprint_is_invariant(q, data):
    perm = np.array(data.draw(st.permutations(list(range(q.n)))))
    assert fingerprint(q).key == fingerprint(q.relabel(perm)).key


@given(latin_quandles())
def test_term_profile_does_not_depend_on_the_base_point(q):
    # the profile uses x0 = 0; moving 0 around by a relabelling changes nothing
    perm = np.roll(np.arange(q.n), 1)
    assert term_profile(q) == term_profile(q.relabel(perm))


def test_dedupe_and_classify():
    base = [affine(c, modulus=5) for c in (2, 3, 4)]
    copies = [q.relabel(np.roll(np.arange(5), k)) for k, q in enumerate(base)]
    reps = dedupe(base + copies)
    assert len(reps) == 3
    buckets = classify_corpus(base + copies)
    assert sorted(b.members for b in buckets) == [2, 2, 2]


def _gl2_maps(G, mats):
    """Automorphisms of Z_3^2 (as an elementary abelian group) given by matrices."""
    basis = G.generators[-2:]
    out = []
    for m in mats:
        images = [G.embed_vector(np.asarray(m)[:, i]) for i in range(2)]
        out.append(extend_map(G, basis, images, require_bijective=True))
    return out


def test_conjugacy_criterion_matches_backtracking():
    p = 3
    G = elementary_abelian(2, p)
    gl_gens = _gl2_maps(G, [[[1, 1], [0, 1]], [[0, 1], [1, 0]], [[2, 0], [0, 1]]])
    twists = []
    for flat in itertools.product(range(p), repeat=4):
        m = FqMatrix(p, np.array(flat).reshape(2, 2))
        if det(m) and det(FqMatrix.identity(2, p) - m):
            twists.append((m, _gl2_maps(G, [m.entries])[0]))
    rng = np.random.default_rng(1)
    for i, j in rng.choice(len(twists), size=(25, 2)):
        (m1, f1), (m2, f2) = twists[i], twists[j]
        by_conjugacy = iso_via_conjugacy(G, f1, f2, gl_gens)
        by_tables = is_isomorphic(affine(m1), affine(m2))
        assert by_conjugacy == by_tables


def test_conjugacy_orbit_of_a_scalar_is_a_point():
    G = elementary_abelian(2, 3)
    gl_gens = _gl2_maps(G, [[[1, 1], [0, 1]], [[0, 1], [1, 0]]])
    (minus_one,) = _gl2_maps(G, [[[2, 0], [0, 2]]])
    orbit, found = conjugacy_orbit(minus_one, gl_gens, target=minus_one)
    assert found and len(orbit) == 1


def test_quaternion_automorphism_orbit():
    Q8 = quaternion_group()
    gens = Q8.generators
    i, j = gens[0], gens[1]
    cyc = extend_map(Q8, (i, j), (j, Q8.mul(i, j)), require_bijective=True)
    assert cyc.order() == 3
    back = cyc.inverse()
    assert cyc.compose(back).order() == 1

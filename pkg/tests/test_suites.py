import numpy as np
import pytest
from hypothesis import given

from qstrategies import TRANSPOSITIONS_S4, latin_quandles
from quandle16p import suites
from quandle16p.constructions import k50_no_centerless_rep
from quandle16p.permgrp import PermGroup
from quandle16p.quandle import affine, direct_product


def gl_order(n, p):
    out = 1
    for i in range(n):
        out *= p**n - p**i
    return out


def involution_count(n, p):
    """Elements of order 2 in GL_n(p), p odd: choose the -1 eigenspace and a complement."""
    return sum(gl_order(n, p) // (gl_order(k, p) * gl_order(n - k, p)) for k in range(1, n + 1))


@pytest.mark.parametrize("n,p", [(1, 3), (2, 3), (2, 5), (2, 7), (3, 3)])
def test_involution_counts_match_formula(n, p):
    invs = suites.involutions(n, p)
    assert len(invs) == involution_count(n, p)
    # classes are labelled by the dimension of the -1 eigenspace
    assert np.unique(suites.conjugacy_classes(invs, p)).size == n


@pytest.mark.parametrize("n,p", [(1, 5), (2, 3), (2, 5), (3, 3)])
def test_max_elementary_rank_is_dimension(n, p):
    assert suites.max_elementary_2_rank(suites.involutions(n, p), p) == n


def test_involutions_are_read_only():
    with pytest.raises(ValueError):
        suites.involutions(2, 3)[0, 0, 0] = 5


def test_gl_generators_generate():
    # GL_2(3) has 48 elements; closing the generators under products must reach all of them
    gens = suites.gl_generators(2, 3)
    seen = {tuple(np.eye(2, dtype=int).ravel())}
    frontier = [np.eye(2, dtype=int)]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a @ g % 3
                key = tuple(b.ravel())
                if key not in seen:
                    seen.add(key)
                    nxt.append(b)
        frontier = nxt
    assert len(seen) == gl_order(2, 3)


@pytest.mark.parametrize("kind", ["Q8", "D8"])
def test_class_two_reps_have_minus_one_center(kind):
    reps = suites.class_two_reps(kind, 2, 3)
    assert reps
    for x, y in reps:
        assert np.array_equal(x @ x % 3, 2 * np.eye(2, dtype=int) % 3)


def test_k50_has_no_centerless_rep_at_seven():
    assert k50_no_centerless_rep(7)


def test_sylow_parts_of_cyclic_group():
    # Z_6 acting regularly
    G = PermGroup.closure([np.roll(np.arange(6), 1)])
    parts = suites.sylow_parts(G)
    assert sorted((r, P.order) for r, P in parts.items()) == [(2, 2), (3, 3)]


@given(latin_quandles())
def test_galois_identities_hold_on_random_latin_quandles(q):
    res = suites.galois_checks(q)
    failed = [k for k, v in res.items() if not v]
    assert not failed


def test_galois_identities_on_a_non_latin_quandle():
    res = suites.galois_checks(TRANSPOSITIONS_S4)
    assert all(res.values())
    assert not any(k.startswith("latin") for k in res)


def test_galois_identities_on_a_product():
    res = suites.galois_checks(direct_product(affine(2, modulus=3), affine(2, modulus=9)))
    assert all(res.values())


def test_corpus_size_and_variety():
    corpus = suites.build_corpus()
    assert len(corpus) >= 30
    names = [name for name, _ in corpus]
    assert len(set(names)) == len(names)
    assert {q.n for _, q in corpus} >= {3, 16, 28, 48, 80, 112}


@pytest.mark.slow
@pytest.mark.parametrize("name", ["galois", "appendix", "counting"])
def test_named_suites_pass(name):
    rep = suites.SUITES[name](7)
    assert rep.ok, rep.failed()


@pytest.mark.slow
@pytest.mark.parametrize("p", [7, 13])
def test_family_suites(p):
    for fn in (suites.sr_structure, suites.lss_family, suites.decomposition):
        rep = fn(p)
        assert rep.ok, (fn.__name__, rep.failed())


def test_lss_family_empty_at_eleven():
    rep = suites.lss_family(11)
    assert rep.ok and rep.checks["family empty for p != 1 mod 3"]

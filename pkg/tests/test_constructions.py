import itertools

import numpy as np
import pytest

from quandle16p.conglat import all_congruences, lattice_shape
from quandle16p.constructions import (
    build_fj,
    build_G3_G5,
    build_Gk,
    build_K50,
    build_Q4,
    build_Qpj,
    build_SR,
    central_product_q8_d8,
    cube_roots,
    gl_f2_conjugacy_classes,
    latin16_family,
    latin16_specs,
    latin_p_family,
    published_si,
    quaternion_group,
    quaternion_twist,
    twist_matrix,
)
from quandle16p.grpmodel import fix_subgroup
from quandle16p.quiso import are_isomorphic


def test_cube_roots():
    assert cube_roots(7) == [2, 4]
    assert cube_roots(13) == [3, 9]
    assert cube_roots(11) == []


def test_quaternion_twist_has_order_three():
    f = quaternion_twist()
    assert f.is_automorphism and f.order() == 3
    assert len(fix_subgroup(f)) == 2  # only the center is fixed


@pytest.mark.parametrize("p", [7, 13])
def test_gk_group(p):
    G = build_Gk(p)
    assert G.order == 8 * p * p
    # rho_z = -I leaves only the trivial vector central
    assert len(G.center()) == 1
    for k in cube_roots(p):
        F = twist_matrix(p, k, 1)
        assert round(np.linalg.det(F)) % p != 0


def test_gk_rejects_bad_primes():
    with pytest.raises(ValueError):
        build_Gk(11)
    with pytest.raises(ValueError):
        build_Gk(7, k=3)


@pytest.mark.parametrize("p,j", [(7, 1), (7, 2), (13, 1)])
def test_lss_quandle(p, j):
    q = build_Qpj(p, j)
    assert q.n == 4 * p
    assert q.is_quandle() and q.latin
    assert lattice_shape(all_congruences(q)).tag == "chain-3"
    f = build_fj(p, j)
    assert f.is_automorphism and f.order() == 3


def test_lss_quandles_are_distinct():
    assert are_isomorphic(build_Qpj(7, 1), build_Qpj(7, 2)) is None


def test_q4():
    q = build_Q4()
    assert q.n == 4 and q.latin
    assert len(all_congruences(q)) == 2


@pytest.mark.slow
def test_sr_quandle_basic():
    q = build_SR(7, 1)
    assert q.n == 112 and q.latin and q.is_quandle()


def test_latin16_family():
    fam = latin16_family()
    assert len(fam) == 9
    assert all(q.n == 16 and q.latin and q.is_quandle() for q in fam)
    moduli = sorted(spec.modulus for spec in latin16_specs())
    assert moduli == [2] * 5 + [4] * 4
    for a, b in itertools.combinations(fam, 2):
        assert are_isomorphic(a, b) is None


def test_gl42_classes_brute_partition():
    words, labels = gl_f2_conjugacy_classes(4)
    assert words.shape[0] == 20160
    assert np.unique(labels).size == 14


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_latin_p_family(p):
    fam = latin_p_family(p)
    assert len(fam) == p - 2
    assert all(q.n == p and q.latin for q in fam)


@pytest.mark.parametrize("p,size", [(3, 48), (5, 80)])
def test_published_chain_quandles(p, size):
    r = published_si(p)[0]
    assert r.automorphism.is_automorphism
    q = r.quandle()
    assert q.n == size and q.latin
    assert lattice_shape(all_congruences(q)).tag == "chain-3"


def test_g3_g5_realizations_agree():
    reps = published_si(3, limit=3)
    qs = [r.quandle() for r in reps]
    assert all(are_isomorphic(qs[0], q) is not None for q in qs[1:])
    (g3, f3), (g5, f5) = build_G3_G5()
    assert g3.order // len(fix_subgroup(f3)) == 48
    assert g5.order // len(fix_subgroup(f5)) == 80


def test_k50_is_extraspecial():
    K = build_K50()
    assert K.order == 32
    assert len(K.center()) == 2
    assert len(K.derived_series()[1]) == 2
    assert central_product_q8_d8().order == 32


def test_quaternion_group_relations():
    Q8 = quaternion_group()
    x, y = Q8.generators[:2]
    z = Q8.mul(x, x)
    assert Q8.mul(y, y) == z
    assert Q8.mul(z, z) == Q8.identity

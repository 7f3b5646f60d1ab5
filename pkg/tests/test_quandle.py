import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qstrategies import TRANSPOSITIONS_S4, THREE_CYCLES_S4, latin_quandles, matrix_affine, quandles, scalar_affine
from quandle16p.constructions import dihedral_group
from quandle16p.grpmodel import cyclic_group, extend_map, identity_map
from quandle16p.quandle import (
    CosetError,
    QuandleError,
    QuandleTable,
    TableFormatError,
    affine,
    coset_quandle,
    deserialize,
    direct_product,
    is_compatible,
    quotient,
    read_table,
    serialize,
    trivial_quandle,
    write_table,
)


def brute_axioms(q):
    n = q.n
    for x in range(n):
        if q.mul(x, x) != x:
            return False
        for y in range(n):
            for z in range(n):
                if q.mul(x, q.mul(y, z)) != q.mul(q.mul(x, y), q.mul(x, z)):
                    return False
    return True


def brute_orbits(q):
    """Number of orbits of the left translations, by repeated union."""
    parent = list(range(q.n))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for x in range(q.n):
        for y in range(q.n):
            parent[find(q.mul(x, y))] = find(y)
    return len({find(a) for a in range(q.n)})


@given(quandles())
def test_quandle_axioms(q):
    assert q.is_quandle() == brute_axioms(q) == True  # noqa: E712


@given(quandles())
def test_left_division(q):
    x, y = np.meshgrid(np.arange(q.n), np.arange(q.n), indexing="ij")
    assert np.array_equal(q.mul(x, q.div(x, y)), y)
    assert np.array_equal(q.div(x, q.mul(x, y)), y)


@given(quandles())
def test_connected_matches_orbit_count(q):
    assert q.connected == (brute_orbits(q) == 1)
    assert q.orbit_labels().max() + 1 == brute_orbits(q)


@given(quandles())
def test_latin_means_every_column_is_a_permutation(q):
    cols = all(sorted(q.star[:, y]) == list(range(q.n)) for y in range(q.n))
    assert q.latin == cols
    if q.latin:
        assert q.connected


@given(quandles())
def test_faithful_matches_distinct_rows(q):
    rows = {tuple(r) for r in q.star.tolist()}
    assert q.faithful == (len(rows) == q.n)


@given(quandles())
def test_lmlt_contains_dis_with_cyclic_quotient(q):
    L, D = q.lmlt, q.dis
    assert D.is_subgroup_of(L)
    assert D.is_normal_in(L)
    assert L.coset_action(D).is_abelian()


def test_affine_scalar_is_latin_iff_one_minus_c_is_a_unit():
    assert affine(2, modulus=5).latin
    assert not affine(-1, modulus=6).latin
    assert affine(-1, modulus=7).latin


@given(scalar_affine())
def test_affine_formula(q):
    p = q.n
    c = int(q.mul(0, 1))  # 0 * 1 = c
    for x in range(p):
        for y in range(p):
            assert q.mul(x, y) == ((1 - c) * x + c * y) % p


@given(scalar_affine(primes=(3, 5)), scalar_affine(primes=(3, 5, 7)))
def test_direct_product_coordinates(a, b):
    q = direct_product(a, b)
    assert q.n == a.n * b.n
    assert q.latin
    for x in range(q.n):
        y = (3 * x + 1) % q.n
        z = q.mul(x, y)
        assert z % a.n == a.mul(x % a.n, y % a.n)
        assert z // a.n == b.mul(x // a.n, y // a.n)


@given(quandles(), st.data())
def test_relabel_preserves_predicates(q, data):
    perm = np.array(data.draw(st.permutations(list(range(q.n)))))
    r = q.relabel(perm)
    assert r.is_quandle()
    assert (r.latin, r.connected, r.faithful) == (q.latin, q.connected, q.faithful)
    assert r.mul(perm[1 % q.n], perm[0]) == perm[q.mul(1 % q.n, 0)]


def test_coset_quandle_of_abelian_group_is_affine():
    # Z_5 with f = multiplication by 2, H = 1
    G = cyclic_group(5)
    f = extend_map(G, (1,), (2,))
    q = coset_quandle(G, [0], f)
    assert q == affine(2, modulus=5)


def test_coset_quandle_requires_fixed_subgroup():
    G = dihedral_group(3)
    r = next(x for x in range(6) if G.element_orders[x] == 3)
    s = next(x for x in range(6) if G.element_orders[x] == 2)
    conj_by_r = extend_map(G, (r, s), (r, G.mul(G.mul(r, s), G.inv(r))))
    with pytest.raises(CosetError):
        coset_quandle(G, [G.identity, s], conj_by_r)
    # the identity map fixes everything; every coset quandle of it is trivial
    q = coset_quandle(G, [G.identity, s], identity_map(G))
    assert q == trivial_quandle(3)


def test_quotient_of_product_onto_factor():
    a, b = affine(2, modulus=3), affine(3, modulus=5)
    q = direct_product(a, b)
    labels = np.arange(q.n) % 3
    assert is_compatible(q, labels)
    assert quotient(q, labels) == a
    assert not is_compatible(q, (np.arange(q.n) < 2).astype(int))


def test_conjugation_quandles():
    assert TRANSPOSITIONS_S4.connected and not TRANSPOSITIONS_S4.latin
    assert TRANSPOSITIONS_S4.faithful
    assert THREE_CYCLES_S4.n == 8 and not THREE_CYCLES_S4.connected


# -- table files ---------------------------------------------------------------


@given(quandles())
def test_serialize_round_trip(q):
    assert deserialize(serialize(q)) == q


def test_file_round_trip(tmp_path):
    q = affine(3, modulus=7)
    path = tmp_path / "q.tbl"
    write_table(q, path)
    assert read_table(path) == q
    assert path.read_text().startswith("quandle 7\n")


def test_comments_before_header_are_skipped():
    q = deserialize("# a comment\n\nquandle 2\n0 1\n1 0\n")
    assert q.n == 2 and not q.is_quandle()


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("quandl 2\n0 1\n0 1\n", 1),
        ("quandle 2\n0 1\n", 1),
        ("quandle 2\n0 1\n1\n", 3),
        ("quandle 2\n0 x\n1 0\n", 2),
        ("quandle 2\n0 0\n1 0\n", 2),
        ("quandle 2\n0 1\n# late\n", 3),
    ],
)
def test_malformed_tables_report_line(text, line):
    with pytest.raises(TableFormatError) as err:
        deserialize(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


def test_constructor_rejects_bad_rows():
    with pytest.raises(QuandleError):
        QuandleTable([[0, 0], [0, 1]])
    with pytest.raises(QuandleError):
        QuandleTable([[0, 1, 2], [0, 1, 2]])
    with pytest.raises(QuandleError):
        QuandleTable([[0, 1], [1, 0]]).require_quandle()


@given(matrix_affine(latin=False))
def test_non_latin_matrix_affine_is_not_connected(q):
    assert q.is_quandle()
    assert not q.latin and not q.connected


@given(latin_quandles())
def test_latin_quandles_are_faithful(q):
    assert q.faithful

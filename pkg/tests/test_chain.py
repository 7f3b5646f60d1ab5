import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quandle16p import chain
from quandle16p.conglat import all_congruences, lattice_shape
from quandle16p.constructions import published_si
from quandle16p.linfq import FqMatrix, batch_rank_f2, mat_inv, multiplicative_order, nullspace, pack_rows
from quandle16p.quiso import are_isomorphic


def cyclotomic_cosets(p):
    """Orbits of x -> 2x on the nonzero residues mod p."""
    seen, out = set(), []
    for a in range(1, p):
        if a in seen:
            continue
        orb = set()
        x = a
        while x not in orb:
            orb.add(x)
            x = 2 * x % p
        seen |= orb
        out.append(frozenset(orb))
    return out


def brute_module_class_count(p, n):
    """Multiplicity vectors over the cosets, counted up to multiplication by units."""
    cosets = cyclotomic_cosets(p)
    d = len(cosets[0])
    if n % d:
        return 0
    total = n // d
    orbits = set()
    for vec in itertools.product(range(total + 1), repeat=len(cosets)):
        if sum(vec) != total:
            continue
        images = []
        for s in range(1, p):
            moved = {frozenset(s * a % p for a in c): m for c, m in zip(cosets, vec)}
            images.append(tuple(moved[c] for c in cosets))
        orbits.add(min(images))
    return len(orbits)


@pytest.mark.parametrize("p,n", [(p, n) for p, ns in chain.ADMISSIBLE.items() for n in ns] + [(7, 9), (31, 10), (17, 16)])
def test_module_classes_match_coset_count(p, n):
    classes = chain.module_classes(p, n)
    assert len(classes) == brute_module_class_count(p, n)
    assert all(c.n == n for c in classes)


def test_p7_degree_six_collapses_to_two_classes():
    classes = chain.module_classes(7, 6)
    assert sorted(c.multiplicities for c in classes) == [(0, 2), (1, 1)]


@pytest.mark.parametrize("p", sorted(chain.ADMISSIBLE))
def test_factor_degree_is_order_of_two(p):
    assert chain.expected_factor_degree(p) == multiplicative_order(2, p)
    assert all(f.degree == multiplicative_order(2, p) for f in chain.nontrivial_factors(p))


@pytest.mark.parametrize("p", [7, 31])
def test_factor_twist_is_a_permutation_action(p):
    perms = {s: chain.factor_twist(p, s) for s in range(1, p)}
    assert perms[1] == list(range(len(perms[1])))
    for s, t in [(2, 3), (3, 5), (5, 6)]:
        st_ = s * t % p
        # R -> R^(st) is R -> R^s followed by R -> R^t
        composed = [perms[t][perms[s][i]] for i in range(len(perms[s]))]
        assert composed == perms[st_]


def test_solution_space_against_brute_force():
    R = chain.ModuleClass(5, tuple(chain.nontrivial_factors(5)), (1,)).action().entries
    for s in range(1, 5):
        Rs = np.linalg.matrix_power(R, s) % 2
        basis = chain._solution_space(R, Rs)
        count = 0
        for bits in range(1 << 16):
            A = np.array([(bits >> i) & 1 for i in range(16)]).reshape(4, 4)
            if np.array_equal(A @ R % 2, Rs @ A % 2):
                count += 1
        assert count == 1 << basis.shape[0]


@given(st.integers(0, 2**32 - 1))
def test_automorphism_tables_are_automorphisms(seed):
    cand = chain.build_chain_group(chain.module_classes(3, 4)[0])
    G = cand.group
    rng = np.random.default_rng(seed)
    R = cand.action
    s = int(rng.choice(list(chain._valid_twists(3, R))))
    sols = chain._span_invertible(chain._solution_space(R, np.linalg.matrix_power(R, s) % 2))
    A = np.array([[(int(w) >> j) & 1 for j in range(4)] for w in sols[rng.integers(len(sols))]])
    w = rng.integers(0, 2, size=4)
    table = chain.automorphism_table(cand, A, w, s)
    assert np.unique(table).size == G.order
    a, b = rng.integers(G.order, size=2)
    assert table[G.mul(a, b)] == G.mul(table[a], table[b])


def test_transversal_size():
    M = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    reps = chain._transversal(chain._column_space(M), 3)
    assert len(reps) == 2


def test_admissible_pairs():
    assert chain.admissible_pairs(3, 1) == [4]
    assert chain.admissible_pairs(3, 2) == [4, 6]
    assert chain.admissible_pairs(3, 3) == [4, 6, 8]
    assert chain.admissible_pairs(127, 2) == []
    with pytest.raises(ValueError):
        chain.admissible_pairs(11, 2)
    with pytest.raises(ValueError):
        chain.admissible_pairs(3, 4)


@pytest.mark.parametrize("p,size", [(3, 48), (5, 80)])
def test_tier_one_finds_the_published_quandle(p, size):
    res = chain.chain_search(p, 1)
    assert [q.n for q in res.quandles] == [size]
    assert res.exhaustive and res.coverage == "exhaustive"
    q = res.quandles[0]
    assert q.latin and q.is_quandle()
    assert lattice_shape(all_congruences(q)).tag == "chain-3"
    assert are_isomorphic(q, published_si(p)[0].quandle()) is not None


def test_p7_finds_nothing():
    res = chain.chain_search(7, 2)
    assert res.quandles == []
    assert [r.n for r in res.pairs] == [6]
    assert res.pairs[0].modules == 2


# -- the F_4 structure for (3, 8) ---------------------------------------------


def test_f4_embedding_is_a_ring_map():
    for a, b in itertools.product(range(4), repeat=2):
        prod = chain.f4_block(a) @ chain.f4_block(b) % 2
        assert np.array_equal(prod, chain.f4_block(int(chain.F4_MUL[a, b])))
        add = (chain.f4_block(a) + chain.f4_block(b)) % 2
        assert np.array_equal(add, chain.f4_block(a ^ b))
    Ms = np.random.default_rng(0).integers(0, 4, size=(5, 3, 3))
    for M, E in zip(Ms, chain.f4_embed_many(Ms)):
        assert np.array_equal(chain.f4_embed(M), E)


@pytest.mark.parametrize("m", [1, 2])
def test_rational_forms_cover_every_class(m):
    # every invertible F_4 matrix is similar to exactly one listed form
    n = 2 * m
    I = np.eye(n, dtype=np.int64)
    allmats = chain.f4_embed_many(np.array(list(itertools.product(range(4), repeat=m * m))).reshape(-1, m, m))
    gl = allmats[batch_rank_f2(pack_rows(allmats), n) == n]
    forms = [(k, chain.f4_embed(F)) for k in range(m + 1) for F in chain.rational_canonical_forms_f4(m, k)]
    for A in gl:
        PA = np.einsum("bij,jk->bik", gl, A) % 2
        hits = [k for k, F in forms if (PA == np.einsum("ij,bjk->bik", F, gl) % 2).all(axis=(1, 2)).any()]
        assert len(hits) == 1
        fixed = n - int(batch_rank_f2(pack_rows(((A + I) % 2)[None]), n)[0])
        assert 2 * hits[0] == fixed


def _descent_conjugator(A, m):
    """F_4-linear B with B e_i = v_i, for an F_2-basis v_1..v_m of the fixed vectors of A."""
    fixed = [np.asarray(v) for v in _fixed_vectors(A)]
    omega = np.kron(np.eye(m, dtype=np.int64), chain._OMEGA)
    cols = []
    for v in fixed[:m]:
        cols += [v, omega @ v % 2]
    return np.array(cols).T % 2


def _fixed_vectors(A):
    n = A.shape[0]
    return nullspace(FqMatrix(2, (A + np.eye(n, dtype=np.int64)) % 2))


@pytest.mark.parametrize("m,samples", [(2, None), (4, 200)])
def test_semilinear_maps_with_full_fixed_space_are_plain_frobenius(m, samples):
    n = 2 * m
    frob = np.kron(np.eye(m, dtype=np.int64), chain._FROB)
    if samples is None:
        Ms = np.array(list(itertools.product(range(4), repeat=m * m))).reshape(-1, m, m)
    else:
        Ms = np.random.default_rng(3).integers(0, 4, size=(20000, m, m))
    As = frob @ chain.f4_embed_many(Ms) % 2
    words = pack_rows(As)
    keep = (batch_rank_f2(words, n) == n) & (chain._kernel_dim_plus_identity(words, n) == m)
    chosen = As[keep] if samples is None else As[keep][:samples]
    assert len(chosen) > 0
    for A in chosen:
        B = _descent_conjugator(A, m)
        Binv = mat_inv(FqMatrix(2, B)).entries
        assert np.array_equal(B @ frob @ Binv % 2, A)
        # B commutes with multiplication by w, so it is F_4-linear
        omega = np.kron(np.eye(m, dtype=np.int64), chain._OMEGA)
        assert np.array_equal(B @ omega % 2, omega @ B % 2)


@pytest.mark.slow
def test_tier_three_reports_coverage():
    res = chain.chain_search(3, 3, random_samples=200)
    assert [q.n for q in res.quandles] == [48]
    assert not res.exhaustive
    assert res.coverage == "canonical+randomized"
    r8 = [r for r in res.pairs if r.n == 8][0]
    assert r8.coverage == "canonical+randomized" and r8.sampled > 0


def _twisted_conjugate(R1, R2, p):
    """Is some power R2^s (s a unit) conjugate to R1 in GL_n(2)?"""
    for s in range(1, p):
        basis = chain._solution_space(R1, np.linalg.matrix_power(R2, s) % 2)
        if basis.size and chain._span_invertible(basis).size:
            return True
    return False


def test_module_classes_agree_with_explicit_conjugators():
    # p = 7, n = 6: vectors (2,0), (1,1), (0,2); the twist swaps the two cubic factors
    facs = tuple(chain.nontrivial_factors(7))
    R = {v: chain.ModuleClass(7, facs, v).action().entries for v in [(2, 0), (1, 1), (0, 2)]}
    assert _twisted_conjugate(R[(2, 0)], R[(0, 2)], 7)
    assert not _twisted_conjugate(R[(2, 0)], R[(1, 1)], 7)
    assert not _twisted_conjugate(R[(0, 2)], R[(1, 1)], 7)

import itertools

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from quandle16p.linfq import (
    F2Poly,
    FqMatrix,
    SingularMatrixError,
    batch_matmul_f2,
    batch_rank_f2,
    block_diag,
    companion,
    det,
    factor_x_pow_p_minus_1,
    fix_space,
    irreducibles_up_to,
    is_diagonalizable_involution,
    is_prime,
    mat_inv,
    mat_order,
    mat_pow,
    multiplicative_order,
    nullspace,
    pack_rows,
    poly_eval_f2,
    poly_product,
    rank,
    unpack_rows,
)

PRIMES = [2, 3, 5, 7]


@st.composite
def square_matrices(draw, max_n=4, primes=PRIMES):
    p = draw(st.sampled_from(primes))
    n = draw(st.integers(1, max_n))
    flat = draw(st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n))
    return FqMatrix(p, np.array(flat).reshape(n, n))


def brute_rank(m: FqMatrix) -> int:
    """Largest r with a nonzero r x r minor, via determinants mod p."""
    n = m.n_rows
    for r in range(min(m.n_rows, m.n_cols), 0, -1):
        for rows in itertools.combinations(range(n), r):
            for cols in itertools.combinations(range(m.n_cols), r):
                sub = FqMatrix(m.p, m.entries[np.ix_(rows, cols)])
                if det(sub):
                    return r
    return 0


def test_is_prime_small():
    assert [k for k in range(30) if is_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_multiplicative_order_of_two():
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(2, 127) == 7
    assert multiplicative_order(2, 31) == 5
    assert multiplicative_order(2, 17) == 8


def test_entries_are_reduced_and_frozen():
    m = FqMatrix(5, [[7, -1], [10, 3]])
    assert m.tolist() == [[2, 4], [0, 3]]
    with pytest.raises(ValueError):
        m.entries[0, 0] = 1


def test_non_prime_modulus_rejected():
    with pytest.raises(ValueError):
        FqMatrix(4, [[1]])


@given(square_matrices())
def test_rank_matches_minors(m):
    assert rank(m) == brute_rank(m)


@given(square_matrices())
def test_nullspace_vectors_are_killed(m):
    basis = nullspace(m)
    assert len(basis) == m.n_cols - rank(m)
    for v in basis:
        assert not (m.entries @ np.asarray(v) % m.p).any()


@given(square_matrices())
def test_inverse_round_trip(m):
    assume(det(m) != 0)
    inv = mat_inv(m)
    eye = FqMatrix.identity(m.n_rows, m.p)
    assert inv @ m == eye
    assert m @ inv == eye


@given(square_matrices())
def test_singular_inverse_raises(m):
    assume(det(m) == 0)
    with pytest.raises(SingularMatrixError):
        mat_inv(m)


@given(st.data())
def test_det_multiplicative(data):
    a = data.draw(square_matrices(max_n=3))
    b = FqMatrix(a.p, np.array(data.draw(st.lists(st.integers(0, a.p - 1), min_size=a.n_rows**2, max_size=a.n_rows**2))).reshape(a.n_rows, -1))
    assert det(a @ b) == det(a) * det(b) % a.p


@given(square_matrices(max_n=3))
def test_order_is_minimal_period(m):
    assume(det(m) != 0)
    k = mat_order(m)
    eye = FqMatrix.identity(m.n_rows, m.p)
    assert mat_pow(m, k) == eye
    assert all(mat_pow(m, j) != eye for j in range(1, k))


@given(square_matrices(max_n=3))
def test_fix_space_dimension(m):
    eye = FqMatrix.identity(m.n_rows, m.p)
    assert len(fix_space(m)) == m.n_rows - rank(m - eye)


def test_block_diag_layout():
    a = FqMatrix(3, [[1, 2], [0, 1]])
    b = FqMatrix(3, [[2]])
    assert block_diag([a, b]).tolist() == [[1, 2, 0], [0, 1, 0], [0, 0, 2]]


def test_involution_diagonalizable_in_odd_characteristic():
    swap = FqMatrix(3, [[0, 1], [1, 0]])
    assert is_diagonalizable_involution(swap)
    # over GF(2) a transvection has order 2 but is not diagonalizable
    assert not is_diagonalizable_involution(FqMatrix(2, [[1, 1], [0, 1]]))


# -- polynomials over GF(2) --------------------------------------------------


def brute_irreducible(f: F2Poly) -> bool:
    d = f.degree
    for a in range(2, 1 << d):
        for b in range(2, 1 << d):
            if F2Poly(a) * F2Poly(b) == f:
                return False
    return d >= 1


def test_irreducibles_counts():
    # necklace counts of binary irreducible polynomials of degree 1..6
    by_degree = {}
    for f in irreducibles_up_to(6):
        by_degree[f.degree] = by_degree.get(f.degree, 0) + 1
    assert by_degree == {1: 2, 2: 1, 3: 2, 4: 3, 5: 6, 6: 9}


@given(st.integers(2, 1 << 7))
def test_irreducibility_against_brute(bits):
    f = F2Poly(bits)
    assert f.is_irreducible() == brute_irreducible(f)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 31])
def test_factorization_of_x_p_minus_1(p):
    facs = factor_x_pow_p_minus_1(p)
    assert poly_product(facs) == F2Poly.x_pow_minus_one(p)
    assert all(f.is_irreducible() for f in facs)
    d = multiplicative_order(2, p)
    assert sorted(f.degree for f in facs) == [1] + [d] * ((p - 1) // d)


@pytest.mark.parametrize("bits", [0b111, 0b1011, 0b10011, 0b1111])
def test_companion_annihilated_by_its_polynomial(bits):
    f = F2Poly(bits)
    C = companion(f)
    assert C.n_rows == f.degree
    assert not poly_eval_f2(f, C).entries.any()


# -- packed GF(2) kernels ----------------------------------------------------


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_packed_matmul_and_rank(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, size=(5, n, n))
    b = rng.integers(0, 2, size=(5, n, n))
    wa, wb = pack_rows(a), pack_rows(b)
    assert np.array_equal(unpack_rows(wa, n), a)
    prod = unpack_rows(batch_matmul_f2(wa, wb), n)
    assert np.array_equal(prod, np.einsum("bij,bjk->bik", a, b) % 2)
    ranks = batch_rank_f2(wa, n)
    assert ranks.tolist() == [rank(FqMatrix(2, m)) for m in a]

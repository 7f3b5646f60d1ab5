"""Exact linear algebra over prime fields and polynomial arithmetic over GF(2).

Matrices over GF(p) are stored as small integer arrays. Over GF(2) every row
is additionally packed into a Python integer (bit ``j`` of row ``i`` is the
entry ``(i, j)``), and products go through XOR of packed rows.

Batch helpers at the bottom of the module operate on many GF(2) matrices at
once, each encoded as an array of packed row words. The chain search uses
them to scan solution spaces with hundreds of thousands of matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import gcd

import numpy as np


class SingularMatrixError(ValueError):
    """Raised when an inverse is requested for a singular matrix."""

    def __init__(self, rank: int, size: int):
        super().__init__(f"matrix is not invertible: rank {rank} < {size}")
        self.rank = rank
        self.size = size


class CapacityError(RuntimeError):
    """A computation would exceed a documented size cap."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def multiplicative_order(a: int, m: int) -> int:
    """Least k >= 1 with a**k == 1 mod m (requires gcd(a, m) == 1)."""
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit modulo {m}")
    k, x = 1, a % m
    while x != 1 % m:
        x = (x * a) % m
        k += 1
    return k


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FqMatrix:
    """Immutable matrix over GF(p).

    ``entries`` is a read-only int64 array of shape ``(n_rows, n_cols)`` with
    values in ``[0, p)``.
    """

    p: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        arr = np.array(self.entries, dtype=np.int64, copy=True)
        if arr.ndim != 2:
            raise ValueError("matrix entries must be two dimensional")
        arr %= self.p
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    # construction ---------------------------------------------------------
    @classmethod
    def from_rows(cls, rows, p: int) -> "FqMatrix":
        return cls(p, np.asarray(rows, dtype=np.int64))

    @classmethod
    def identity(cls, n: int, p: int) -> "FqMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int, p: int) -> "FqMatrix":
        return cls(p, np.zeros((n_rows, n_cols), dtype=np.int64))

    @classmethod
    def from_words(cls, words, n_cols: int) -> "FqMatrix":
        """Build a GF(2) matrix from packed row words."""
        rows = [[(w >> j) & 1 for j in range(n_cols)] for w in words]
        return cls(2, np.array(rows, dtype=np.int64).reshape(len(rows), n_cols))

    # shape ------------------------------------------------------------------
    @property
    def n_rows(self) -> int:
        return self.entries.shape[0]

    @property
    def n_cols(self) -> int:
        return self.entries.shape[1]

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    @cached_property
    def words(self) -> tuple[int, ...]:
        """Packed rows; only meaningful for p = 2."""
        return tuple(sum(int(b) << j for j, b in enumerate(row)) for row in self.entries)

    # value semantics ------------------------------------------------------
    def _key(self):
        return (self.p, self.entries.shape, self.entries.tobytes())

    def __eq__(self, other):
        if not isinstance(other, FqMatrix):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FqMatrix(p={self.p}, {self.entries.tolist()})"

    def tolist(self):
        return self.entries.tolist()

    # arithmetic sugar -------------------------------------------------------
    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        _check_same_field(self, other)
        return FqMatrix(self.p, self.entries + other.entries)

    def __sub__(self, other: "FqMatrix") -> "FqMatrix":
        _check_same_field(self, other)
        return FqMatrix(self.p, self.entries - other.entries)

    def __neg__(self) -> "FqMatrix":
        return FqMatrix(self.p, -self.entries)

    def scale(self, c: int) -> "FqMatrix":
        return FqMatrix(self.p, self.entries * int(c))

    def transpose(self) -> "FqMatrix":
        return FqMatrix(self.p, self.entries.T)

    def apply(self, v) -> np.ndarray:
        """Matrix times column vector(s); ``v`` may be shape (n,) or (n, m)."""
        return (self.entries @ np.asarray(v, dtype=np.int64)) % self.p

    def __pow__(self, k: int) -> "FqMatrix":
        return mat_pow(self, k)


def _check_same_field(a: FqMatrix, b: FqMatrix) -> None:
    if a.p != b.p:
        raise ValueError(f"field mismatch: GF({a.p}) vs GF({b.p})")
    if a.entries.shape != b.entries.shape:
        raise ValueError(f"shape mismatch: {a.entries.shape} vs {b.entries.shape}")


def mat_mul(a: FqMatrix, b: FqMatrix) -> FqMatrix:
    if a.p != b.p:
        raise ValueError(f"field mismatch: GF({a.p}) vs GF({b.p})")
    if a.n_cols != b.n_rows:
        raise ValueError(f"cannot multiply {a.entries.shape} by {b.entries.shape}")
    if a.p == 2:
        brows = b.words
        out = []
        for w in a.words:
            acc = 0
            j = 0
            while w:
                if w & 1:
                    acc ^= brows[j]
                w >>= 1
                j += 1
            out.append(acc)
        return FqMatrix.from_words(out, b.n_cols)
    return FqMatrix(a.p, a.entries @ b.entries)


def mat_pow(a: FqMatrix, k: int) -> FqMatrix:
    if not a.is_square:
        raise ValueError("power of a non-square matrix")
    if k < 0:
        return mat_pow(mat_inv(a), -k)
    result = FqMatrix.identity(a.n_rows, a.p)
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def rref(a: FqMatrix) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    p = a.p
    m = a.entries.copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: FqMatrix) -> int:
    return len(rref(a)[1])


def nullspace(a: FqMatrix) -> list[np.ndarray]:
    """Basis of {v : a v = 0}, each vector an int64 array of length n_cols."""
    p = a.p
    m, pivots = rref(a)
    free = [c for c in range(a.n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(a.n_cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-m[i, f]) % p
        basis.append(v)
    return basis


def fix_space(a: FqMatrix) -> list[np.ndarray]:
    """Basis of the eigenspace of ``a`` for eigenvalue 1."""
    if not a.is_square:
        raise ValueError("fix_space needs a square matrix")
    return nullspace(a - FqMatrix.identity(a.n_rows, a.p))


def mat_inv(a: FqMatrix) -> FqMatrix:
    if not a.is_square:
        raise ValueError("inverse of a non-square matrix")
    n = a.n_rows
    aug = FqMatrix(a.p, np.hstack([a.entries, np.eye(n, dtype=np.int64)]))
    m, pivots = rref(aug)
    r = sum(1 for c in pivots if c < n)
    if r < n:
        raise SingularMatrixError(r, n)
    return FqMatrix(a.p, m[:, n:])


def det(a: FqMatrix) -> int:
    if not a.is_square:
        raise ValueError("determinant of a non-square matrix")
    p = a.p
    m = a.entries.copy()
    n = m.shape[0]
    d = 1
    for c in range(n):
        nz = np.nonzero(m[c:, c])[0]
        if nz.size == 0:
            return 0
        piv = c + nz[0]
        if piv != c:
            m[[c, piv]] = m[[piv, c]]
            d = -d
        d = (d * int(m[c, c])) % p
        inv = pow(int(m[c, c]), -1, p)
        for r in range(c + 1, n):
            if m[r, c]:
                m[r] = (m[r] - m[r, c] * inv * m[c]) % p
    return d % p


def mat_order(a: FqMatrix) -> int:
    """Least m >= 1 with a**m == I. Singular input raises SingularMatrixError."""
    if not a.is_square:
        raise ValueError("order of a non-square matrix")
    n = a.n_rows
    r = rank(a)
    if r < n:
        raise SingularMatrixError(r, n)
    ident = FqMatrix.identity(n, a.p)
    x = a
    bound = a.p ** n  # element orders in GL_n(p) are below p**n
    for k in range(1, bound + 1):
        if x == ident:
            return k
        x = mat_mul(x, a)
    raise AssertionError("order bound exceeded")  # pragma: no cover


def block_diag(blocks) -> FqMatrix:
    blocks = list(blocks)
    if not blocks:
        raise ValueError("block_diag of an empty list")
    p = blocks[0].p
    if any(b.p != p for b in blocks):
        raise ValueError("blocks over different fields")
    n = sum(b.n_rows for b in blocks)
    m = sum(b.n_cols for b in blocks)
    out = np.zeros((n, m), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r : r + b.n_rows, c : c + b.n_cols] = b.entries
        r += b.n_rows
        c += b.n_cols
    return FqMatrix(p, out)


def is_diagonalizable_involution(a: FqMatrix) -> bool:
    """For a**2 == I: do the +1 and -1 eigenspaces span the space?

    In characteristic 2 the two eigenvalues coincide, so only the identity
    qualifies.
    """
    n = a.n_rows
    plus = len(fix_space(a))
    if a.p == 2:
        return plus == n
    minus = len(nullspace(a + FqMatrix.identity(n, a.p)))
    return plus + minus == n


# ---------------------------------------------------------------------------
# polynomials over GF(2)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class F2Poly:
    """Polynomial over GF(2); bit i of ``mask`` is the coefficient of x**i."""

    mask: int

    def __post_init__(self):
        if self.mask < 0:
            raise ValueError("negative coefficient mask")

    @classmethod
    def from_coeffs(cls, coeffs) -> "F2Poly":
        """Coefficients listed from the constant term upwards."""
        return cls(sum((int(c) & 1) << i for i, c in enumerate(coeffs)))

    @classmethod
    def x_pow_minus_one(cls, n: int) -> "F2Poly":
        return cls((1 << n) | 1)

    @property
    def degree(self) -> int:
        return self.mask.bit_length() - 1

    def coeffs(self) -> list[int]:
        return [(self.mask >> i) & 1 for i in range(self.degree + 1)]

    def __add__(self, other: "F2Poly") -> "F2Poly":
        return F2Poly(self.mask ^ other.mask)

    def __mul__(self, other: "F2Poly") -> "F2Poly":
        a, b, acc = self.mask, other.mask, 0
        while b:
            if b & 1:
                acc ^= a
            a <<= 1
            b >>= 1
        return F2Poly(acc)

    def __divmod__(self, other: "F2Poly"):
        if other.mask == 0:
            raise ZeroDivisionError("polynomial division by zero")
        q, r = 0, self.mask
        db = other.degree
        while r and r.bit_length() - 1 >= db:
            shift = r.bit_length() - 1 - db
            q ^= 1 << shift
            r ^= other.mask << shift
        return F2Poly(q), F2Poly(r)

    def __mod__(self, other: "F2Poly") -> "F2Poly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "F2Poly") -> "F2Poly":
        return divmod(self, other)[0]

    def __str__(self):
        if self.mask == 0:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            if (self.mask >> i) & 1:
                terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
        return "+".join(terms)

    def is_irreducible(self) -> bool:
        d = self.degree
        if d < 1:
            return False
        if d > 2 * _SIEVE_DEGREE:
            raise CapacityError(f"irreducibility of degree {d} exceeds the trial-division sieve")
        for g in irreducibles_up_to(d // 2):
            if (self % g).mask == 0:
                return False
        return True


_SIEVE_DEGREE = 8


def irreducibles_up_to(d: int) -> list[F2Poly]:
    """All irreducible polynomials over GF(2) of degree 1..d, by sieving."""
    return [g for g in _sieve(min(d, _SIEVE_DEGREE)) if g.degree <= d]


_SIEVE_CACHE: dict[int, list[F2Poly]] = {}


def _sieve(d: int) -> list[F2Poly]:
    if d in _SIEVE_CACHE:
        return _SIEVE_CACHE[d]
    found: list[F2Poly] = []
    for mask in range(2, 1 << (d + 1)):
        f = F2Poly(mask)
        half = f.degree // 2
        if all((f % g).mask != 0 for g in found if g.degree <= half):
            found.append(f)
    _SIEVE_CACHE[d] = found
    return found


def factor_x_pow_p_minus_1(p: int) -> list[F2Poly]:
    """Irreducible factors of x**p - 1 over GF(2), sorted, with multiplicity."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p = {p} must be an odd prime")
    rest = F2Poly.x_pow_minus_one(p)
    factors: list[F2Poly] = []
    for g in irreducibles_up_to(_SIEVE_DEGREE):
        while rest.degree >= g.degree:
            q, r = divmod(rest, g)
            if r.mask:
                break
            factors.append(g)
            rest = q
    if rest.degree > 0:
        if rest.degree > 2 * _SIEVE_DEGREE + 1:
            raise CapacityError(f"cofactor of degree {rest.degree} cannot be certified irreducible")
        factors.append(rest)
    return sorted(factors)


def poly_product(polys) -> F2Poly:
    return reduce(lambda a, b: a * b, polys, F2Poly(1))


def companion(f: F2Poly) -> FqMatrix:
    """Companion matrix over GF(2): ones below the diagonal, coefficients in the last column."""
    d = f.degree
    if d < 1:
        raise ValueError("companion matrix needs degree >= 1")
    if not (f.mask >> d) & 1:  # pragma: no cover - degree is defined by the top bit
        raise ValueError("polynomial is not monic")
    m = np.zeros((d, d), dtype=np.int64)
    for i in range(1, d):
        m[i, i - 1] = 1
    for i in range(d):
        m[i, d - 1] = (f.mask >> i) & 1
    return FqMatrix(2, m)


def poly_eval_f2(f: F2Poly, a: FqMatrix) -> FqMatrix:
    """Evaluate f at a square GF(2) matrix (Horner)."""
    if a.p != 2 or not a.is_square:
        raise ValueError("poly_eval_f2 expects a square GF(2) matrix")
    n = a.n_rows
    acc = FqMatrix.zeros(n, n, 2)
    ident = FqMatrix.identity(n, 2)
    for c in reversed(f.coeffs()):
        acc = mat_mul(acc, a)
        if c:
            acc = acc + ident
    return acc


# ---------------------------------------------------------------------------
# batch kernels over GF(2)
# ---------------------------------------------------------------------------


def pack_rows(mats: np.ndarray) -> np.ndarray:
    """(m, n, n) 0/1 array -> (m, n) uint64 packed row words."""
    mats = np.asarray(mats, dtype=np.uint64)
    n_cols = mats.shape[-1]
    weights = (np.uint64(1) << np.arange(n_cols, dtype=np.uint64))
    return (mats * weights).sum(axis=-1).astype(np.uint64)


def unpack_rows(words: np.ndarray, n_cols: int) -> np.ndarray:
    words = np.asarray(words, dtype=np.uint64)
    bits = (words[..., None] >> np.arange(n_cols, dtype=np.uint64)) & np.uint64(1)
    return bits.astype(np.int64)


def batch_matmul_f2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Products of packed GF(2) matrices, broadcasting over leading axes.

    ``a`` and ``b`` have shape (..., n) with row words; result row i is the XOR
    of the rows of ``b`` selected by the bits of row i of ``a``.
    """
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    n = b.shape[-1]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.uint64)
    one = np.uint64(1)
    for j in range(n):
        sel = ((a >> np.uint64(j)) & one).astype(bool)
        out ^= np.where(sel, b[..., j : j + 1], np.uint64(0))
    return out


def batch_rank_f2(words: np.ndarray, n_cols: int) -> np.ndarray:
    """Ranks of many packed GF(2) matrices, shape (m, n_rows) -> (m,)."""
    words = np.array(words, dtype=np.uint64, copy=True)
    m, n_rows = words.shape
    basis = np.zeros((m, n_cols), dtype=np.uint64)
    one = np.uint64(1)
    for r in range(n_rows):
        v = words[:, r].copy()
        for bit in range(n_cols - 1, -1, -1):
            has = ((v >> np.uint64(bit)) & one).astype(bool)
            b = basis[:, bit]
            empty = b == 0
            take = has & empty
            basis[take, bit] = v[take]
            v[take] = 0
            red = has & ~empty
            v[red] ^= b[red]
    return (basis != 0).sum(axis=1)


def identity_words(n: int) -> np.ndarray:
    return (np.uint64(1) << np.arange(n, dtype=np.uint64)).astype(np.uint64)

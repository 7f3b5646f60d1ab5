"""Named groups, automorphisms and quandles used by the classification.

Conventions
-----------
* ``Q8`` is the quaternion group with generators ``x = i`` and ``y = j``;
  ``z = -1 = x^2 = y^2 = [x, y]``.
* ``Gk = Z_p^2 x| Q8`` with ``rho_x = [[0,-1],[1,0]]``,
  ``rho_y = [[k^2, k],[k, -k^2]]`` and ``rho_z = -I``, where ``k`` is a
  nontrivial cube root of unity mod ``p`` (so ``p = 1 mod 3``).
* ``twist(j)`` acts on ``Gk`` by ``(v, q) -> (F_j v, phi(q))`` with
  ``phi: x -> y, y -> xy`` and ``F_j = -(1 + k^j) [[k, 1],[0, k^2]]``.
* On ``Gk x Z_2^2`` the twist is extended by ``(v, q, w) -> (F_j v, phi(q), psi(q) + M w)``
  with ``psi(x) = a``, ``psi(y) = 0`` and ``M = [[0,1],[1,1]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grpmodel import (
    DirectProduct,
    FiniteGroup,
    GroupMap,
    GroupOps,
    HomomorphismError,
    SemidirectProduct,
    TableGroup,
    cyclic_group,
    elementary_abelian,
    extend_map,
    extend_maps_batch,
    cayley_tree,
    fix_subgroup,
    parse_word,
    realize_presentation,
    rho_from_generators,
)
from .linfq import F2Poly, FqMatrix, batch_matmul_f2, batch_rank_f2, block_diag, companion, is_prime
from .quandle import QuandleTable, affine, coset_quandle, direct_product

IDX = np.int64

# ---------------------------------------------------------------------------
# quaternion group
# ---------------------------------------------------------------------------

_UNIT_MUL = {  # (sign, unit) for products of the units 1, i, j, k
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (2, 0): (1, 2), (3, 0): (1, 3),
    (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
    (1, 2): (1, 3), (2, 1): (-1, 3),
    (2, 3): (1, 1), (3, 2): (-1, 1),
    (3, 1): (1, 2), (1, 3): (-1, 2),
}  # fmt: skip


@lru_cache(maxsize=None)
def quaternion_group() -> TableGroup:
    """Q8 with element code ``4*s + u``: sign s (0 plus, 1 minus) and unit u in (1, i, j, k)."""
    table = np.zeros((8, 8), dtype=IDX)
    for a in range(8):
        for b in range(8):
            sign, unit = _UNIT_MUL[(a % 4, b % 4)]
            neg = (a // 4) ^ (b // 4) ^ (sign < 0)
            table[a, b] = 4 * neg + unit
    return TableGroup(table, generators=(1, 2), name="Q8")


Q8_X, Q8_Y, Q8_Z = 1, 2, 4

QUATERNION_RELATORS = ("x^2 z^-1", "y^2 z^-1", "[x,y] z^-1", "z^2", "[z,x]", "[z,y]")


def dihedral_group(m: int) -> TableGroup:
    """D_2m acting on an m-gon; code ``r^i`` is ``i`` and ``r^i s`` is ``m + i``."""
    n = 2 * m
    table = np.zeros((n, n), dtype=IDX)
    for a in range(n):
        for b in range(n):
            ia, fa = a % m, a // m
            ib, fb = b % m, b // m
            # (r^ia s^fa)(r^ib s^fb) = r^(ia + (-1)^fa ib) s^(fa+fb)
            i = (ia + (ib if fa == 0 else -ib)) % m
            table[a, b] = i + m * ((fa + fb) % 2)
    return TableGroup(table, generators=(1, m), name=f"D{n}")


# ---------------------------------------------------------------------------
# the group Gk and its twists
# ---------------------------------------------------------------------------


def cube_roots(p: int) -> list[int]:
    """Nontrivial cube roots of unity mod p."""
    return [k for k in range(2, p) if pow(k, 3, p) == 1]


def _check_prime_1mod3(p: int) -> None:
    if not is_prime(p) or p % 3 != 1:
        raise ValueError(f"p = {p} must be a prime congruent to 1 mod 3")


def _default_root(p: int, k: int | None) -> int:
    _check_prime_1mod3(p)
    roots = cube_roots(p)
    if k is None:
        return roots[0]
    if k not in roots:
        raise ValueError(f"{k} is not a nontrivial cube root of 1 mod {p}")
    return k


def gk_action(p: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    rx = np.array([[0, -1], [1, 0]], dtype=IDX) % p
    ry = np.array([[k * k, k], [k, -k * k]], dtype=IDX) % p
    return rx, ry


def build_Gk(p: int, k: int | None = None) -> SemidirectProduct:
    return _build_Gk(p, _default_root(p, k))


@lru_cache(maxsize=None)
def _build_Gk(p: int, k: int) -> SemidirectProduct:
    Q8 = quaternion_group()
    rx, ry = gk_action(p, k)
    rho = rho_from_generators(Q8, [rx, ry], p)
    G = SemidirectProduct(2, p, Q8, rho, name=f"G{k}(p={p})")
    G.cube_root = k  # type: ignore[attr-defined]
    return G


def build_Gk_klein(p: int, k: int | None = None) -> DirectProduct:
    return _build_Gk_klein(p, _default_root(p, k))


@lru_cache(maxsize=None)
def _build_Gk_klein(p: int, k: int) -> DirectProduct:
    G = build_Gk(p, k)
    return DirectProduct(G, elementary_abelian(2, 2), name=f"{G.name}xZ2^2")


def twist_matrix(p: int, k: int, j: int) -> np.ndarray:
    c = -(1 + pow(k, j, p))
    return (c * np.array([[k, 1], [0, k * k]], dtype=IDX)) % p


KLEIN_M = np.array([[0, 1], [1, 1]], dtype=IDX)


@lru_cache(maxsize=None)
def quaternion_twist() -> GroupMap:
    """x -> y, y -> xy on Q8."""
    Q8 = quaternion_group()
    return extend_map(Q8, [Q8_X, Q8_Y], [Q8_Y, int(Q8.mul(Q8_X, Q8_Y))], require_bijective=True)


class CompatibilityError(ValueError):
    """F rho_q != rho_phi(q) F for some q."""


def build_fj(p: int, j: int, k: int | None = None) -> GroupMap:
    """The order-3 automorphism of Gk used for the size-4p quandles."""
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    G = build_Gk(p, k)
    k = G.cube_root  # type: ignore[attr-defined]
    F = twist_matrix(p, k, j)
    phi = quaternion_twist()
    for q in range(8):
        lhs = (F @ G.rho[q]) % p
        rhs = (G.rho[phi.table[q]] @ F) % p
        if not np.array_equal(lhs, rhs):
            raise CompatibilityError(f"twist matrix is not compatible with rho at quaternion element {q}")
    v, q = G.decode(G.elements)
    table = G.encode((v @ F.T) % p, phi.table[q])
    f = GroupMap(G, G, G.generators, table[list(G.generators)], table)
    # independent route: rewrite Cayley words in the generator images
    g = extend_map(G, G.generators, table[list(G.generators)], require_bijective=True)
    if not np.array_equal(g.table, table):  # pragma: no cover - guards transcription
        raise HomomorphismError("closed form and word rewriting disagree")
    return f


def klein_coords(w) -> np.ndarray:
    """Z_2^2 element codes to coordinate rows."""
    w = np.asarray(w, dtype=IDX)
    return np.stack([w % 2, w // 2], axis=-1)


def klein_code(c) -> np.ndarray:
    c = np.asarray(c, dtype=IDX) % 2
    return c[..., 0] + 2 * c[..., 1]


def quaternion_abelianization(q) -> np.ndarray:
    """Exponents (e_x, e_y) mod 2 of q in Q8 / {+-1}."""
    q = np.asarray(q, dtype=IDX) % 4  # drop the sign
    ex = np.isin(q, (1, 3)).astype(IDX)
    ey = np.isin(q, (2, 3)).astype(IDX)
    return np.stack([ex, ey], axis=-1)


def build_f_sr(p: int, j: int, a=(1, 0), k: int | None = None) -> GroupMap:
    """The twist of Gk x Z_2^2 with x -> y a, y -> xy, centre acted on by M."""
    fj = build_fj(p, j, k)
    G = build_Gk_klein(p, k)
    Gk = G.A
    g, w = G.decode(G.elements)
    _, q = Gk.decode(g)
    psi = (quaternion_abelianization(q) @ np.array([[a[0], a[1]], [0, 0]], dtype=IDX)) % 2
    new_w = (psi + klein_coords(w) @ KLEIN_M.T) % 2
    table = G.encode(fj.table[g], klein_code(new_w))
    images = table[list(G.generators)]
    f = extend_map(G, G.generators, images, require_bijective=True)
    if not np.array_equal(f.table, table):  # pragma: no cover - guards transcription
        raise HomomorphismError("closed form and word rewriting disagree")
    return f


@dataclass(frozen=True)
class SrFamilySpec:
    p: int
    j: int
    a: tuple[int, int] = (1, 0)
    k: int | None = None

    def __post_init__(self):
        k = _default_root(self.p, self.k)
        object.__setattr__(self, "k", k)
        if self.j not in (1, 2):
            raise ValueError("j must be 1 or 2")
        if tuple(self.a) not in ((0, 0), (1, 0)):
            raise ValueError("a must be (0,0) or (1,0)")

    def group(self) -> DirectProduct:
        return build_Gk_klein(self.p, self.k)

    def automorphism(self) -> GroupMap:
        return build_f_sr(self.p, self.j, self.a, self.k)

    def quandle(self) -> QuandleTable:
        f = self.automorphism()
        return coset_quandle(f.domain, fix_subgroup(f), f)


def build_Qpj(p: int, j: int, k: int | None = None) -> QuandleTable:
    """Non-affine latin quandle of size 4p."""
    f = build_fj(p, j, k)
    return coset_quandle(f.domain, fix_subgroup(f), f)


def build_SR(p: int, j: int, a=(1, 0), k: int | None = None) -> QuandleTable:
    """Size-16p quandle over Gk x Z_2^2; ``a = (0,0)`` gives the decomposable variant."""
    return SrFamilySpec(p, j, tuple(a), k).quandle()


# ---------------------------------------------------------------------------
# small latin quandles
# ---------------------------------------------------------------------------

TRINOMIAL = F2Poly.from_coeffs([1, 1, 1])


def build_Q4() -> QuandleTable:
    return affine(companion(TRINOMIAL))


def latin_p_family(p: int) -> list[QuandleTable]:
    """Aff(Z_p, c) for c = 2..p-1."""
    if not is_prime(p) or p == 2:
        raise ValueError("p must be an odd prime")
    return [affine(c, modulus=p) for c in range(2, p)]


def _gl_f2_codes(n: int) -> np.ndarray:
    """All invertible n x n matrices over GF(2), as packed row words (shape m x n)."""
    total = 1 << (n * n)
    codes = np.arange(total, dtype=np.uint64)
    words = np.stack([(codes >> np.uint64(n * r)) & np.uint64((1 << n) - 1) for r in range(n)], axis=1)
    ranks = batch_rank_f2(words, n)
    return words[ranks == n]


def _words_to_code(words: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(words.shape[0], dtype=np.int64)
    for r in range(n):
        out |= words[:, r].astype(np.int64) << (n * r)
    return out


def gl_f2_conjugacy_classes(n: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Brute conjugacy partition of GL_n(2): (matrices as row words, class labels)."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    G = _gl_f2_codes(n)
    m = G.shape[0]
    code = _words_to_code(G, n)
    lookup = np.full(1 << (n * n), -1, dtype=np.int64)
    lookup[code] = np.arange(m)
    # elementary transvections generate GL_n(2)
    src, dst = [], []
    for r in range(n):
        for c in range(n):
            if r == c:
                continue
            T = np.eye(n, dtype=np.uint64)
            T[r, c] = 1
            Tw = np.array([int("".join(str(int(b)) for b in row[::-1]), 2) for row in T], dtype=np.uint64)
            # transvections are involutions, so T^-1 = T
            conj = batch_matmul_f2(batch_matmul_f2(np.broadcast_to(Tw, G.shape), G), np.broadcast_to(Tw, G.shape))
            src.append(np.arange(m))
            dst.append(lookup[_words_to_code(conj, n)])
    s, d = np.concatenate(src), np.concatenate(dst)
    graph = coo_matrix((np.ones(s.size, dtype=np.int8), (s, d)), shape=(m, m))
    return G, connected_components(graph, directed=False)[1]


def _unpack(words: np.ndarray, n: int) -> np.ndarray:
    return ((words[:, :, None] >> np.arange(n, dtype=np.uint64)) & np.uint64(1)).astype(IDX)


@dataclass(frozen=True)
class AffineSpec:
    """Affine quandle on Z_m^t given by an integer matrix."""

    modulus: int
    matrix: tuple[tuple[int, ...], ...]

    def build(self) -> QuandleTable:
        return affine(np.array(self.matrix, dtype=IDX), modulus=self.modulus)

    def __str__(self):
        rows = ";".join(",".join(str(v) for v in r) for r in self.matrix)
        return f"Aff(Z{self.modulus}^{len(self.matrix)},[{rows}])"


def _gl2_z4_fpf_classes() -> list[np.ndarray]:
    """Conjugacy-class representatives of f in GL_2(Z_4) with I - f invertible."""
    import itertools

    mats = [np.array(e, dtype=IDX).reshape(2, 2) for e in itertools.product(range(4), repeat=4)]
    det = lambda A: int(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]) % 4  # noqa: E731
    gl = [A for A in mats if det(A) % 2 == 1]
    key = {A.tobytes(): i for i, A in enumerate(gl)}
    inv = {}
    for i, A in enumerate(gl):
        for B in gl:
            if np.array_equal((A @ B) % 4, np.eye(2, dtype=IDX)):
                inv[i] = B
                break
    label = list(range(len(gl)))
    I = np.eye(2, dtype=IDX)
    reps = []
    for i, A in enumerate(gl):
        if label[i] != i or det((I - A) % 4) % 2 == 0:
            continue
        reps.append(A)
        for h, B in enumerate(gl):
            label[key[((B @ A @ inv[h]) % 4).tobytes()]] = i
    return reps


def latin16_specs() -> list[AffineSpec]:
    """Affine data for the latin quandles of size 16 (elementary abelian and Z_4^2 carriers)."""
    words, labels = gl_f2_conjugacy_classes(4)
    mats = _unpack(words, 4)
    # I + f invertible over GF(2), vectorized through the packed-rank routine
    plus = words ^ np.array([1 << r for r in range(4)], dtype=np.uint64)
    good = batch_rank_f2(plus, 4) == 4
    specs = []
    seen = set()
    for idx in np.nonzero(good)[0]:
        c = int(labels[idx])
        if c in seen:
            continue
        seen.add(c)
        specs.append(AffineSpec(2, tuple(tuple(int(v) for v in row) for row in mats[idx])))
    for A in _gl2_z4_fpf_classes():
        specs.append(AffineSpec(4, tuple(tuple(int(v) for v in row) for row in A)))
    return specs


def latin16_family() -> list[QuandleTable]:
    return [s.build() for s in latin16_specs()]


# ---------------------------------------------------------------------------
# G3, G5 and their twists
# ---------------------------------------------------------------------------

G3_RELATORS = ("a^3", "c^2", "b^2", "(cb)^2", "(ba)^3", "(ca)^3", "(a^-1 c a b)^2", "(c a^-1 b a)^2")
G5_RELATORS = ("a^5", "b^2", "(b a^-1 b a)^2", "(b a^-1)^5", "(b a^-2 b a^2)^2")
F3_WORDS = {"a": "a^2 b a^-1 b a", "b": "b a^-1 c a", "c": "b c"}
F5_WORDS = {"a": "a^2 (a^2 b)^2 a^-3 b a", "b": "b a^2 b a^-2"}


def centerless_f2_module_group(p: int, factors: list[F2Poly]) -> SemidirectProduct:
    """Z_2^n x| Z_p with the generator of Z_p acting by block companions."""
    R = block_diag([companion(f) for f in factors])
    n = R.n_rows
    Zp = cyclic_group(p)
    powers = [(R**i).entries for i in range(p)]
    G = SemidirectProduct(n, 2, Zp, powers, name=f"Z2^{n}xZ{p}")
    return G


def _chain_group_16(p: int) -> SemidirectProduct:
    if p == 3:
        return centerless_f2_module_group(3, [TRINOMIAL, TRINOMIAL])
    if p == 5:
        return centerless_f2_module_group(5, [F2Poly.from_coeffs([1, 1, 1, 1, 1])])
    raise ValueError("only p = 3, 5 carry the published groups")


@dataclass
class PublishedSI:
    """A realized presentation with its twist and coset quandle."""

    p: int
    group: FiniteGroup
    generators: tuple[int, ...]
    automorphism: GroupMap

    def quandle(self) -> QuandleTable:
        f = self.automorphism
        return coset_quandle(self.group, fix_subgroup(f), f)


def published_si(p: int, limit: int = 1) -> list[PublishedSI]:
    """Realize the printed presentation for p = 3 or 5 and extend the printed twist.

    Returns up to ``limit`` realizations whose twist words extend to an
    automorphism.
    """
    G = _chain_group_16(p)
    symbols, relators, words = ("abc", G3_RELATORS, F3_WORDS) if p == 3 else ("ab", G5_RELATORS, F5_WORDS)
    tuples = realize_presentation(G, symbols, relators, limit=max(limit * 50, 200))
    if not tuples:
        raise RuntimeError(f"presentation for p = {p} has no realization in {G.name}")
    ops = GroupOps(G)
    parsed = {s: parse_word(words[s]) for s in symbols}
    out = []
    for tup in tuples:
        assign = {s: np.asarray(v, dtype=IDX) for s, v in zip(symbols, tup)}
        images = [int(parsed[s].evaluate(ops, assign)) for s in symbols]
        try:
            f = extend_map(G, list(tup), images, require_bijective=True)
        except HomomorphismError:
            continue
        out.append(PublishedSI(p, G, tuple(tup), f))
        if len(out) >= limit:
            break
    if not out:
        raise RuntimeError(f"printed twist does not extend for any realization (p = {p})")
    return out


def build_G3_G5() -> tuple[tuple[FiniteGroup, GroupMap], tuple[FiniteGroup, GroupMap]]:
    r3 = published_si(3)[0]
    r5 = published_si(5)[0]
    return (r3.group, r3.automorphism), (r5.group, r5.automorphism)


# ---------------------------------------------------------------------------
# K50
# ---------------------------------------------------------------------------

K50_RELATORS = ("a^2", "b^4", "c^4 d^2", "c b c b^-1", "d b^-1 d b", "c^-1 a c a", "d c^-1 d c", "d a d b^2 a")


@lru_cache(maxsize=None)
def central_product_q8_d8() -> TableGroup:
    """Q8 o D8: Q8 x D8 with the two central involutions identified."""
    P = DirectProduct(quaternion_group(), dihedral_group(4))
    central = np.array([P.identity, int(P.encode(Q8_Z, 2))], dtype=IDX)
    Q, _ = P.quotient(central)
    return Q


@lru_cache(maxsize=None)
def build_K50() -> TableGroup:
    """K50 realized from its relators inside Q8 o D8, re-indexed by its generators."""
    H = central_product_q8_d8()
    tup = realize_presentation(H, "abcd", K50_RELATORS)
    if tup is None:  # pragma: no cover - would contradict the published description
        raise RuntimeError("K50 relators have no generating realization in Q8 o D8")
    K = TableGroup(H.table, generators=tup, name="K50")
    K.relator_images = dict(zip("abcd", tup))  # type: ignore[attr-defined]
    return K


def gl_matrices(n: int, p: int) -> np.ndarray:
    """All invertible n x n matrices mod p (n <= 3, p small)."""
    import itertools

    if p ** (n * n) > 5 * 10**7:
        raise ValueError("GL enumeration too large")
    flat = np.array(list(itertools.product(range(p), repeat=n * n)), dtype=IDX).reshape(-1, n, n)
    det = np.rint(np.linalg.det(flat.astype(float))).astype(IDX) % p
    return flat[det != 0]


@dataclass
class K50SearchReport:
    p: int
    counts: dict
    faithful_found: int

    @property
    def empty(self) -> bool:
        return self.faithful_found == 0


def k50_no_centerless_rep(p: int, report: bool = False):
    """True iff no faithful rho: K50 -> GL_2(p) has rho(b^2) = -I.

    Staged search over (b, a, c, d) with relator pruning at each stage.
    """
    from .grpmodel import MatrixOps

    if not is_prime(p) or p == 2 or p > 11:
        raise ValueError("search supports odd primes up to 11")
    ops = MatrixOps(2, p)
    GL = gl_matrices(2, p)
    I = np.eye(2, dtype=IDX)
    minus = (-I) % p
    rel = {r: parse_word(r) for r in K50_RELATORS}
    counts = {}
    sq = np.einsum("mij,mjk->mik", GL, GL) % p
    b_c = GL[(sq == minus).all(axis=(1, 2))]
    a_c = GL[(sq == I).all(axis=(1, 2))]
    counts["b"] = len(b_c)
    partial = {"b": b_c}

    def extend(partial, sym, cands, words):
        m = len(next(iter(partial.values())))
        k = len(cands)
        out = {s: [] for s in list(partial) + [sym]}
        step = max(1, 400000 // max(k, 1))
        for start in range(0, m, step):
            sl = slice(start, start + step)
            block = {s: np.repeat(v[sl], k, axis=0) for s, v in partial.items()}
            block[sym] = np.tile(cands, (min(step, m - start), 1, 1))
            keep = np.ones(len(block[sym]), dtype=bool)
            for w in words:
                val = rel[w].evaluate(ops, block)
                keep &= (val == I).all(axis=(1, 2))
            for s in out:
                out[s].append(block[s][keep])
        return {s: np.concatenate(v) if v else np.zeros((0, 2, 2), dtype=IDX) for s, v in out.items()}

    partial = extend(partial, "a", a_c, [])
    counts["ab"] = len(partial["a"])
    partial = extend(partial, "c", GL, ["c b c b^-1", "c^-1 a c a"])
    counts["abc"] = len(partial["c"])
    partial = extend(partial, "d", GL, ["c^4 d^2", "d b^-1 d b", "d c^-1 d c", "d a d b^2 a"])
    counts["abcd"] = len(partial["d"])
    faithful = 0
    K = build_K50()
    gens = [K.relator_images[s] for s in "abcd"]  # type: ignore[attr-defined]
    tree = cayley_tree(K, gens)
    for t in range(counts["abcd"]):
        mats = [partial[s][t] for s in "abcd"]
        if _matrix_rep_is_faithful(K, gens, mats, p, tree):
            faithful += 1
    rep = K50SearchReport(p, counts, faithful)
    return rep if report else rep.empty


def _matrix_rep_is_faithful(K: FiniteGroup, gens, mats, p: int, tree) -> bool:
    """Evaluate the generator matrices along the Cayley tree and test injectivity."""
    images = {K.identity: np.eye(2, dtype=IDX)}
    for c, par, slot in zip(*tree):
        for ci, pi, si in zip(c, par, slot):
            images[int(ci)] = (images[int(pi)] @ mats[int(si)]) % p
    # homomorphism along every edge
    for g in K.elements:
        for j, s in enumerate(gens):
            if not np.array_equal(images[int(K.mul(g, s))], (images[int(g)] @ mats[j]) % p):
                return False
    keys = {images[g].tobytes() for g in images}
    return len(keys) == K.order


# ---------------------------------------------------------------------------
# automorphisms of Gk and the parametric family on Gk x Z_2^2
# ---------------------------------------------------------------------------


@dataclass
class GkAutomorphisms:
    group: SemidirectProduct
    tables: np.ndarray  # (m, |G|) image arrays
    generator_images: np.ndarray  # images of (X, Y, E)

    @property
    def order(self) -> int:
        return self.tables.shape[0]

    def index_of(self, table: np.ndarray) -> int:
        return self._lookup[table.tobytes()]

    def __post_init__(self):
        self._lookup = {t.tobytes(): i for i, t in enumerate(self.tables)}

    def compose_index(self, i: int, j: int) -> int:
        """Index of (auto i) after (auto j)."""
        return self._lookup[self.tables[i][self.tables[j]].tobytes()]

    def inverse_index(self, i: int) -> int:
        inv = np.empty_like(self.tables[i])
        inv[self.tables[i]] = np.arange(inv.size)
        return self._lookup[inv.tobytes()]


def enumerate_aut_Gk(p: int, k: int | None = None) -> GkAutomorphisms:
    """All automorphisms of Gk by a pruned search over images of X, Y and E."""
    G = build_Gk(p, k)
    k = G.cube_root  # type: ignore[attr-defined]
    X = int(G.encode([0, 0], Q8_X))
    Y = int(G.encode([0, 0], Q8_Y))
    E = int(G.encode([1, 0], 0))
    gens = [X, Y, E]
    orders = G.element_orders
    e = G.elements
    c4 = e[orders == 4]
    cp = e[orders == p]
    # quaternion relations on (X', Y')
    xs = np.repeat(c4, c4.size)
    ys = np.tile(c4, c4.size)
    x2 = G.mul(xs, xs)
    ok = (x2 == G.mul(ys, ys)) & (G.commutator(xs, ys) == x2)
    xs, ys = xs[ok], ys[ok]
    # action relations on E'
    m = xs.size
    X_ = np.repeat(xs, cp.size)
    Y_ = np.repeat(ys, cp.size)
    E_ = np.tile(cp, m)
    E2 = G.conj(X_, E_)
    ok = G.mul(E_, E2) == G.mul(E2, E_)
    ok &= G.conj(X_, E2) == G.inv(E_)
    ok &= G.conj(Y_, E_) == G.mul(G.power(E_, k * k % p), G.power(E2, k))
    ok &= G.conj(Y_, E2) == G.mul(G.power(E_, k), G.power(E2, (-k * k) % p))
    cand = np.stack([X_[ok], Y_[ok], E_[ok]], axis=1)
    tree = cayley_tree(G, gens)
    tables, good = extend_maps_batch(G, gens, cand, G, tree)
    tables = tables[good]
    srt = np.sort(tables, axis=1)
    bij = (srt == e[None, :]).all(axis=1)
    tables = tables[bij]
    return GkAutomorphisms(G, tables, cand[good][bij])


def twist_family(auts: GkAutomorphisms) -> np.ndarray:
    """Indices of automorphisms of order 3 with 2p fixed points."""
    T = auts.tables
    p = auts.group.p
    ident = auts.group.elements
    cube = np.take_along_axis(T, np.take_along_axis(T, T, axis=1), axis=1)
    order3 = (cube == ident).all(axis=1) & ~(T == ident).all(axis=1)
    fixed = (T == ident).sum(axis=1)
    return np.nonzero(order3 & (fixed == 2 * p))[0]


def _gl2_f2() -> list[np.ndarray]:
    import itertools

    out = []
    for e in itertools.product(range(2), repeat=4):
        A = np.array(e, dtype=IDX).reshape(2, 2)
        if (A[0, 0] * A[1, 1] + A[0, 1] * A[1, 0]) % 2:
            out.append(A)
    return out


@dataclass(frozen=True)
class KleinTriple:
    """Automorphism (g, w) -> (alpha g, P ab(g) + M w) of Gk x Z_2^2.

    ``alpha`` is an index into the enumerated automorphisms of Gk, ``P`` a
    2x2 matrix over GF(2) applied to the quaternion abelianization, and ``M``
    in GL_2(2).
    """

    alpha: int
    P: tuple[int, int, int, int]
    M: tuple[int, int, int, int]


class KleinAutFamily:
    """The parametric automorphism group of Gk x Z_2^2."""

    def __init__(self, auts: GkAutomorphisms):
        self.auts = auts
        G = auts.group
        # induced action of each alpha on the quaternion abelianization Z_2^2
        X = int(G.encode([0, 0], Q8_X))
        Y = int(G.encode([0, 0], Q8_Y))
        _, qx = G.decode(auts.tables[:, X])
        _, qy = G.decode(auts.tables[:, Y])
        ax = quaternion_abelianization(qx)
        ay = quaternion_abelianization(qy)
        self.ab_action = np.stack([ax, ay], axis=2)  # columns are images of e_x, e_y
        self.identity_alpha = auts.index_of(G.elements)
        self.gl2 = _gl2_f2()

    @property
    def order(self) -> int:
        return self.auts.order * 16 * len(self.gl2)

    @staticmethod
    def _m(t) -> np.ndarray:
        return np.array(t, dtype=IDX).reshape(2, 2)

    @staticmethod
    def _t(m) -> tuple[int, int, int, int]:
        return tuple(int(v) for v in (np.asarray(m) % 2).ravel())  # type: ignore[return-value]

    def compose(self, h1: KleinTriple, h2: KleinTriple) -> KleinTriple:
        """h1 after h2."""
        A2 = self.ab_action[h2.alpha]
        P = (self._m(h1.P) @ A2 + self._m(h1.M) @ self._m(h2.P)) % 2
        M = (self._m(h1.M) @ self._m(h2.M)) % 2
        return KleinTriple(self.auts.compose_index(h1.alpha, h2.alpha), self._t(P), self._t(M))

    def inverse(self, h: KleinTriple) -> KleinTriple:
        ai = self.auts.inverse_index(h.alpha)
        Mi = next(B for B in self.gl2 if np.array_equal((self._m(h.M) @ B) % 2, np.eye(2, dtype=IDX)))
        P = (Mi @ self._m(h.P) @ self.ab_action[ai]) % 2
        return KleinTriple(ai, self._t(P), self._t(Mi))

    def conjugate(self, h: KleinTriple, g: KleinTriple) -> KleinTriple:
        """h g h^-1."""
        return self.compose(self.compose(h, g), self.inverse(h))

    def generators(self, alpha_gens: list[int]) -> list[KleinTriple]:
        ident = self.identity_alpha
        zero = (0, 0, 0, 0)
        one = (1, 0, 0, 1)
        out = [KleinTriple(a, zero, one) for a in alpha_gens]
        out += [KleinTriple(ident, self._t(np.eye(4, dtype=IDX)[i].reshape(2, 2)), one) for i in range(4)]
        out += [KleinTriple(ident, zero, (0, 1, 1, 1)), KleinTriple(ident, zero, (0, 1, 1, 0))]
        return out

    def to_map(self, h: KleinTriple) -> GroupMap:
        G = build_Gk_klein(self.auts.group.p, self.auts.group.cube_root)  # type: ignore[attr-defined]
        g, w = G.decode(G.elements)
        _, q = self.auts.group.decode(g)
        ab = quaternion_abelianization(q)
        new_w = (ab @ self._m(h.P).T + klein_coords(w) @ self._m(h.M).T) % 2
        table = G.encode(self.auts.tables[h.alpha][g], klein_code(new_w))
        return GroupMap(G, G, G.generators, table[list(G.generators)], table)

    def sr_triple(self, j: int, a=(1, 0)) -> KleinTriple:
        fj = build_fj(self.auts.group.p, j, self.auts.group.cube_root)  # type: ignore[attr-defined]
        P = np.array([[a[0], 0], [a[1], 0]], dtype=IDX)
        return KleinTriple(self.auts.index_of(fj.table), self._t(P), self._t(KLEIN_M))


def alpha_generators(auts: GkAutomorphisms) -> list[int]:
    """A few automorphism indices generating the whole enumerated group."""
    from .permgrp import PermGroup

    T = auts.tables.astype(np.int32)
    rng = np.random.default_rng(1)
    chosen: list[int] = []
    while True:
        pick = int(rng.integers(auts.order))
        chosen.append(pick)
        if PermGroup(T.shape[1], [T[i] for i in chosen]).order == auts.order:
            return chosen


def principal_cover(p: int, j: int, a=(1, 0)) -> QuandleTable:
    """Principal quandle of the twist induced on (Gk x Z_2^2) / gamma_2, size 32."""
    f = build_f_sr(p, j, a)
    G = f.domain
    gamma2 = G.lower_central_series()[2]
    Q, lab = G.quotient(gamma2)
    reps = np.zeros(Q.order, dtype=IDX)
    reps[lab[::-1]] = G.elements[::-1]
    induced = lab[f.table[reps]]
    trivial = np.array([Q.identity], dtype=IDX)
    return coset_quandle(Q, trivial, induced)


def decomposition_witness(p: int, j: int) -> QuandleTable:
    """Q4 x Q(p, j), compared against the a = (0,0) variant."""
    return direct_product(build_Q4(), build_Qpj(p, j))

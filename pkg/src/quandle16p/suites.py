"""Verification suites: structure of the named families, counting, appendix facts, Galois identities.

Each suite returns a ``SuiteReport`` with one boolean per check plus a
free-form ``details`` dict holding the numbers behind the checks. Nothing
here raises on a failed check; callers decide what a failure means.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .conglat import (
    Congruence,
    all_congruences,
    dis_alpha,
    dis_sup_alpha,
    gamma,
    is_central_cong,
    is_directly_decomposable,
    is_subdirectly_irreducible,
    kernel_cong,
    lattice_shape,
    orbit_cong,
    zeta,
)
from .constructions import (
    KleinAutFamily,
    KleinTriple,
    alpha_generators,
    build_G3_G5,
    build_Gk,
    build_K50,
    build_Q4,
    build_Qpj,
    build_SR,
    cube_roots,
    decomposition_witness,
    enumerate_aut_Gk,
    gl_f2_conjugacy_classes,
    k50_no_centerless_rep,
    latin16_family,
    latin_p_family,
    principal_cover,
    quaternion_group,
    twist_family,
)
from .grpmodel import DirectProduct, TableGroup, elementary_abelian, fix_subgroup, small_group_iso
from .linfq import FqMatrix, batch_rank_f2, fix_space, identity_words, is_diagonalizable_involution, is_prime, mat_inv
from .permgrp import PermGroup, abelian_invariants, perm_order
from .quandle import QuandleTable, coset_quandle, direct_product, quotient
from .quiso import are_isomorphic

IDX = np.int64


@dataclass
class SuiteReport:
    name: str
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def as_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "checks": self.checks, "details": self.details, "seconds": round(self.seconds, 2)}


def _timed(report: SuiteReport, t0: float) -> SuiteReport:
    report.seconds = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# small group helpers
# ---------------------------------------------------------------------------


def _is_elementary_abelian(G: PermGroup) -> bool:
    if G.order == 1:
        return True
    if not G.is_abelian():
        return False
    inv = abelian_invariants(G)
    return len(set(inv)) == 1 and is_prime(inv[0])


def _is_cyclic(G: PermGroup) -> bool:
    return G.order == 1 or (G.is_abelian() and len(abelian_invariants(G)) == 1)


def _prime_factors(n: int) -> list[int]:
    return [d for d in range(2, n + 1) if n % d == 0 and is_prime(d)]


def _perm_power(g: np.ndarray, k: int) -> np.ndarray:
    out = np.arange(g.size, dtype=g.dtype)
    base = g.copy()
    while k:
        if k & 1:
            out = base[out]
        base = base[base]
        k >>= 1
    return out


def sylow_parts(N: PermGroup) -> dict[int, PermGroup]:
    """Sylow subgroups of a nilpotent group: generated by coprime powers of the generators."""
    out = {}
    for q in _prime_factors(N.order):
        a = 0
        m = N.order
        while m % q == 0:
            m //= q
            a += 1
        out[q] = PermGroup(N.degree, [_perm_power(g, m) for g in N.small_gens])
    return out


def perm_to_table_group(P: PermGroup) -> TableGroup:
    return TableGroup.from_perm_group(P)[0]


def quotient_group(G: PermGroup, N: PermGroup) -> TableGroup:
    return perm_to_table_group(G.coset_action(N) if N.order > 1 else G)


# ---------------------------------------------------------------------------
# SR family, LSS family, decomposition witness, inventory
# ---------------------------------------------------------------------------


def sr_structure(p: int) -> SuiteReport:
    """Lattice and displacement-group structure of the two subdirectly reducible quandles."""
    t0 = time.perf_counter()
    rep = SuiteReport(f"sr-structure p={p}")
    qs = {}
    q8z22 = DirectProduct(quaternion_group(), elementary_abelian(2, 2))
    for j in (1, 2):
        q = build_SR(p, j)
        qs[j] = q
        L = all_congruences(q)
        D = q.dis
        Z = D.center()
        lcs = D.lower_central_series()
        g2 = lcs[2] if len(lcs) > 2 else lcs[-1]
        top = quotient_group(D, g2)
        rep.details[f"j={j}"] = {
            "n": q.n,
            "lattice": str(lattice_shape(L)),
            "dis": D.order,
            "center": Z.order,
            "dis_mod_gamma2": top.order,
            "gamma_blocks": gamma(q).num_blocks,
            "zeta_blocks": zeta(q).num_blocks,
            "nu_blocks": L.nu.num_blocks,
        }
        rep.checks[f"j={j} latin of size 16p"] = q.latin and q.n == 16 * p
        rep.checks[f"j={j} diamond with |Q/gamma|=16, |Q/zeta|=4p, |Q/nu|=4"] = (
            len(L) == 5
            and lattice_shape(L).tag == "diamond-3.1"
            and gamma(q).num_blocks == 16
            and zeta(q).num_blocks == 4 * p
            and L.nu.num_blocks == 4
        )
        rep.checks[f"j={j} |Dis| = 32p^2"] = D.order == 32 * p * p
        rep.checks[f"j={j} Z(Dis) elementary abelian of order 4"] = Z.order == 4 and _is_elementary_abelian(Z)
        rep.checks[f"j={j} Dis/gamma_2 = Q8 x Z2^2"] = top.order == 32 and small_group_iso(top, q8z22)
        rep.checks[f"j={j} subdirectly reducible"] = not is_subdirectly_irreducible(L)
        rep.checks[f"j={j} directly indecomposable"] = not is_directly_decomposable(q, L)
    rep.checks["SR(p,1) not isomorphic to SR(p,2)"] = are_isomorphic(qs[1], qs[2]) is None
    return _timed(rep, t0)


def lss_family(p: int) -> SuiteReport:
    """The size-4p non-affine family and its link to the SR family through the center."""
    t0 = time.perf_counter()
    rep = SuiteReport(f"lss-family p={p}")
    if p % 3 != 1:
        try:
            build_Qpj(p, 1)
            rep.checks["family empty for p != 1 mod 3"] = False
        except ValueError:
            rep.checks["family empty for p != 1 mod 3"] = True
        return _timed(rep, t0)
    lss = {j: build_Qpj(p, j) for j in (1, 2)}
    for j, q in lss.items():
        L = all_congruences(q)
        rep.checks[f"Q({p},{j}) latin of size 4p"] = q.latin and q.n == 4 * p
        rep.checks[f"Q({p},{j}) |Dis| = 8p^2"] = q.dis.order == 8 * p * p
        rep.checks[f"Q({p},{j}) 3-chain"] = lattice_shape(L).tag == "chain-3"
    corr = {}
    for j in (1, 2):
        sr = build_SR(p, j)
        top = quotient(sr, zeta(sr))
        hits = [jj for jj, q in lss.items() if are_isomorphic(top, q) is not None]
        corr[j] = hits
        rep.checks[f"SR({p},{j})/zeta is some Q({p},j')"] = len(hits) == 1
    rep.details["sr_mod_zeta_to_lss"] = {str(j): v for j, v in corr.items()}
    return _timed(rep, t0)


def decomposition(p: int) -> SuiteReport:
    """The twist with a = (0,0) splits as Q4 x Q(p, j')."""
    t0 = time.perf_counter()
    rep = SuiteReport(f"decomposition p={p}")
    for j in (1, 2):
        q = build_SR(p, j, a=(0, 0))
        hits = [jj for jj in (1, 2) if are_isomorphic(q, decomposition_witness(p, jj)) is not None]
        rep.details[f"j={j}"] = hits
        rep.checks[f"SR({p},{j},a=0) = Q4 x Q({p},j')"] = len(hits) == 1
        rep.checks[f"SR({p},{j},a=0) directly decomposable"] = is_directly_decomposable(q)
    return _timed(rep, t0)


def inventory(primes=(3, 5, 7, 11, 13)) -> SuiteReport:
    t0 = time.perf_counter()
    rep = SuiteReport("inventory")
    fam = latin16_family()
    words, labels = gl_f2_conjugacy_classes(4)
    plus = words ^ identity_words(4)
    fpf = np.unique(labels[batch_rank_f2(plus, 4) == 4]).size
    rep.details["latin16"] = len(fam)
    rep.checks["latin16 has 9 classes"] = len(fam) == 9
    rep.checks["latin16 pairwise non-isomorphic"] = all(are_isomorphic(a, b) is None for a, b in itertools.combinations(fam, 2))
    rep.details["gl4_2"] = {"order": int(words.shape[0]), "classes": int(np.unique(labels).size), "fixed_point_free_classes": int(fpf)}
    rep.checks["GL_4(2) brute partition: 20160 elements, 5 classes with I + f invertible"] = words.shape[0] == 20160 and fpf == 5
    for p in primes:
        lp = latin_p_family(p)
        rep.checks[f"latin_p({p}) has p-2 members"] = len(lp) == p - 2
        rep.checks[f"latin_p({p}) pairwise non-isomorphic"] = all(are_isomorphic(a, b) is None for a, b in itertools.combinations(lp, 2))
    return _timed(rep, t0)


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------


def counting_suite(p: int = 7) -> SuiteReport:
    """Automorphism counts of Gk and Gk x Z_2^2 and the conjugacy orbits of the twist family."""
    t0 = time.perf_counter()
    rep = SuiteReport(f"counting p={p}")
    auts = enumerate_aut_Gk(p)
    fam = KleinAutFamily(auts)
    F = twist_family(auts)
    rep.details.update(aut_gk=auts.order, twist_family=len(F), parametric=fam.order)
    rep.checks["|Aut(Gk)| = 24 p^2 (p-1)"] = auts.order == 24 * p * p * (p - 1)
    rep.checks["|F| = 16p"] = len(F) == 16 * p
    rep.checks["|Aut(Gk x Z2^2)| = 2304 p^2 (p-1)"] = fam.order == 2304 * p * p * (p - 1)
    order3 = [fam._t(m) for m in fam.gl2 if not np.array_equal(m, np.eye(2)) and np.array_equal((m @ m @ m) % 2, np.eye(2))]
    H = [KleinTriple(int(f), P, M) for f in F for P in itertools.product(range(2), repeat=4) for M in order3]
    rep.details["H"] = len(H)
    rep.checks["|H| = 2^9 p"] = len(H) == 512 * p
    gens = fam.generators(alpha_generators(auts))
    members = set(H)
    seen: set[KleinTriple] = set()
    orbits = []
    closed = True
    for h in H:
        if h in seen:
            continue
        orb = {h}
        frontier = [h]
        while frontier:
            nxt = []
            for g in frontier:
                for s in gens:
                    c = fam.conjugate(s, g)
                    if c not in orb:
                        orb.add(c)
                        nxt.append(c)
            frontier = nxt
        closed &= orb <= members
        seen |= orb
        orbits.append(len(orb))
    orbits.sort()
    rep.details["orbits"] = orbits
    rep.checks["H closed under conjugation"] = closed
    rep.checks["orbit sizes 2^6 p, 2^6 p, 3 2^6 p, 3 2^6 p"] = orbits == sorted([64 * p, 64 * p, 192 * p, 192 * p])
    rep.checks["orbit sizes sum to |H|"] = sum(orbits) == len(H)
    # the SR twists sit in the large orbits (a = (1,0)) and the small ones (a = (0,0))
    sizes = {}
    for j in (1, 2):
        for a in ((1, 0), (0, 0)):
            t = fam.sr_triple(j, a)
            sizes[f"{j},{a}"] = _orbit_size(fam, gens, t)
    rep.details["sr_orbit_sizes"] = sizes
    rep.checks["a=(1,0) orbits have size 3 2^6 p"] = all(v == 192 * p for k, v in sizes.items() if k.endswith("(1, 0)"))
    rep.checks["a=(0,0) orbits have size 2^6 p"] = all(v == 64 * p for k, v in sizes.items() if k.endswith("(0, 0)"))
    return _timed(rep, t0)


def _orbit_size(fam: KleinAutFamily, gens, h: KleinTriple) -> int:
    orb = {h}
    frontier = [h]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                c = fam.conjugate(s, g)
                if c not in orb:
                    orb.add(c)
                    nxt.append(c)
        frontier = nxt
    return len(orb)


# ---------------------------------------------------------------------------
# appendix: involutions, elementary abelian 2-subgroups, class-two 2-groups, K50
# ---------------------------------------------------------------------------


def _all_matrices(n: int, p: int, chunk_rows: int = 1):
    """All n x n matrices mod p, in chunks (the first ``chunk_rows`` rows fixed per chunk)."""
    tail = n * n - n * chunk_rows
    weights = p ** np.arange(tail, dtype=IDX)
    codes = np.arange(p**tail, dtype=IDX)
    tail_entries = (codes[:, None] // weights[None, :]) % p
    for head in itertools.product(range(p), repeat=n * chunk_rows):
        block = np.empty((codes.size, n * n), dtype=IDX)
        block[:, : n * chunk_rows] = head
        block[:, n * chunk_rows :] = tail_entries
        yield block.reshape(-1, n, n)


@lru_cache(maxsize=None)
def involutions(n: int, p: int) -> np.ndarray:
    """Every A in GL_n(p) with A^2 = I and A != I, by exhaustive scan (cached, read-only)."""
    I = np.eye(n, dtype=IDX)
    out = []
    for block in _all_matrices(n, p, chunk_rows=1 if n >= 3 else 0):
        sq = np.einsum("mij,mjk->mik", block, block) % p
        keep = (sq == I).all(axis=(1, 2)) & ~(block == I).all(axis=(1, 2))
        out.append(block[keep])
    res = np.concatenate(out)
    res.setflags(write=False)
    return res


def _codes(mats: np.ndarray, p: int) -> np.ndarray:
    flat = mats.reshape(mats.shape[0], mats.shape[1] * mats.shape[2])
    return flat @ (p ** np.arange(flat.shape[1], dtype=IDX))


def gl_generators(n: int, p: int) -> list[np.ndarray]:
    """Elementary transvections and one diagonal matrix; they generate GL_n(p)."""
    g = next(a for a in range(1, p) if all(pow(a, (p - 1) // r, p) != 1 for r in range(2, p) if (p - 1) % r == 0 and is_prime(r)))
    gens = []
    for i, j in itertools.permutations(range(n), 2):
        T = np.eye(n, dtype=IDX)
        T[i, j] = 1
        gens.append(T)
    D = np.eye(n, dtype=IDX)
    D[0, 0] = g
    gens.append(D)
    return gens


def conjugacy_classes(mats: np.ndarray, p: int) -> np.ndarray:
    """Class labels of a conjugation-closed set of matrices under GL_n(p)."""
    n = mats.shape[1]
    codes = _codes(mats, p)
    order = np.argsort(codes)
    srt = codes[order]
    m = mats.shape[0]
    src, dst = [np.arange(m)], [np.arange(m)]
    for B in gl_generators(n, p):
        Bi = mat_inv(FqMatrix(p, B)).entries
        conj = np.einsum("ij,mjk,kl->mil", B, mats, Bi) % p
        pos = np.searchsorted(srt, _codes(conj, p))
        if (srt[np.minimum(pos, m - 1)] != _codes(conj, p)).any():
            raise ValueError("matrix set is not closed under conjugation")
        src.append(np.arange(m))
        dst.append(order[pos])
    s, d = np.concatenate(src), np.concatenate(dst)
    g = coo_matrix((np.ones(s.size, dtype=np.int8), (s, d)), shape=(m, m))
    return connected_components(g, directed=False)[1]


def max_elementary_2_rank(invs: np.ndarray, p: int) -> int:
    """Largest m with Z_2^m inside GL_n(p), searching from one involution per class."""
    if invs.shape[0] == 0:
        return 0
    labels = conjugacy_classes(invs, p)
    _, firsts = np.unique(labels, return_index=True)
    codes = _codes(invs, p)
    n = invs.shape[1]
    I = np.eye(n, dtype=IDX)
    best = 1
    seen: set[frozenset] = set()

    def commuting(c, pool):
        return ((c @ pool) % p == (pool @ c) % p).all(axis=(1, 2))

    def grow(subgroup: np.ndarray, cands: np.ndarray, rank: int):
        nonlocal best
        key = frozenset(_codes(subgroup, p).tolist())
        if key in seen:
            return
        seen.add(key)
        best = max(best, rank)
        cands = cands[~np.isin(_codes(cands, p), list(key))]
        for idx in range(cands.shape[0]):
            c = cands[idx]
            rest = cands[idx + 1 :]
            grow(np.concatenate([subgroup, (subgroup @ c) % p]), rest[commuting(c, rest)], rank + 1)

    for f in firsts:
        a = invs[f]
        mask = commuting(a, invs) & (codes != codes[f])
        grow(np.stack([I, a]), invs[mask], 1)
    return best


def class_two_reps(kind: str, n: int, p: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Faithful (x, y) in GL_n(p) realizing Q8 or D8, x up to conjugacy.

    Q8: x^4 = 1, x^2 = y^2, y x y^-1 = x^-1.  D8: x^4 = 1, y^2 = 1, y x y^-1 = x^-1.
    Both groups have <x^2> as the unique minimal normal subgroup, so a
    representation is faithful exactly when x^2 != I.
    """
    I = np.eye(n, dtype=IDX)
    fours = []
    for block in _all_matrices(n, p, chunk_rows=1 if n >= 3 else 0):
        sq = np.einsum("mij,mjk->mik", block, block) % p
        keep = (np.einsum("mij,mjk->mik", sq, sq) % p == I).all(axis=(1, 2)) & ~(sq == I).all(axis=(1, 2))
        fours.append(block[keep])
    X = np.concatenate(fours)  # elements of order exactly 4
    labels = conjugacy_classes(X, p)
    _, firsts = np.unique(labels, return_index=True)
    Ys = X if kind == "Q8" else involutions(n, p)
    out = []
    for f in firsts:
        x = X[f]
        x2 = (x @ x) % p
        xinv = (x2 @ x) % p
        # y x = x^-1 y
        ok = (np.einsum("mij,jk->mik", Ys, x) % p == np.einsum("ij,mjk->mik", xinv, Ys) % p).all(axis=(1, 2))
        if kind == "Q8":
            ok &= (np.einsum("mij,mjk->mik", Ys, Ys) % p == x2).all(axis=(1, 2))
        for y in Ys[ok]:
            out.append((x, y))
    return out


def appendix_suite(primes=(3, 5, 7), dims=(2, 3)) -> SuiteReport:
    t0 = time.perf_counter()
    rep = SuiteReport("appendix")
    diag, ranks = {}, {}
    for n in dims:
        for p in primes:
            invs = involutions(n, p)
            diag[f"{n},{p}"] = len(invs)
            rep.checks[f"involutions of GL_{n}({p}) diagonalizable"] = all(is_diagonalizable_involution(FqMatrix(p, a)) for a in invs)
    for n in (1,) + tuple(dims):
        for p in primes:
            invs = involutions(n, p)
            r = max_elementary_2_rank(invs, p)
            ranks[f"{n},{p}"] = r
            rep.checks[f"no faithful Z_2^m on Z_{p}^{n} with m > {n}"] = r <= n
    rep.details["involutions"] = diag
    rep.details["max_2_rank"] = ranks

    # class-two 2-groups with a central involution z = x^2 and centerless Z_p^n x| <z>
    instances = []
    for kind in ("Q8", "D8"):
        for n, p in ((2, 3), (2, 5), (2, 7), (3, 3)):
            for x, y in class_two_reps(kind, n, p):
                z = (x @ x) % p
                if _fixed_dim(z, p) == 0:
                    instances.append((kind, n, p, bool((z == (-np.eye(n, dtype=IDX)) % p).all()) and n % 2 == 0))
    for p in (7, 13):
        for k in cube_roots(p):
            G = build_Gk(p, k)
            rz = G.rho[4]  # image of the central quaternion element
            if _fixed_dim(rz, p) == 0:
                instances.append(("Gk", 2, p, bool((rz == (-np.eye(2, dtype=IDX)) % p).all())))
    rep.details["center_minus_one_instances"] = len(instances)
    rep.checks["center = -1: all hypothesis instances have rho_z = -I, n even"] = bool(instances) and all(i[3] for i in instances)

    K = build_K50()
    rep.checks["|K50| = 32"] = K.order == 32
    rep.checks["Z(K50) = [K50,K50] of order 2"] = len(K.center()) == 2 and np.array_equal(np.sort(K.center()), np.sort(K.derived_series()[1]))
    k50 = k50_no_centerless_rep(7, report=True)
    rep.details["k50_counts"] = k50.counts
    rep.checks["K50 has no centerless rep at p = 7"] = k50.empty
    return _timed(rep, t0)


def _fixed_dim(a: np.ndarray, p: int) -> int:
    return len(fix_space(FqMatrix(p, a)))


# ---------------------------------------------------------------------------
# Galois / commutator identities over a corpus
# ---------------------------------------------------------------------------


def build_corpus() -> list[tuple[str, QuandleTable]]:
    """Connected quandles from every construction, sizes 3 to 112."""
    corpus: list[tuple[str, QuandleTable]] = []
    for p in (3, 5, 7):
        corpus += [(f"Aff(Z{p},{c})", q) for c, q in zip(range(2, p), latin_p_family(p))]
    corpus += [(f"latin16[{i}]", q) for i, q in enumerate(latin16_family())]
    corpus.append(("Q4", build_Q4()))
    for p in (7, 13):
        corpus += [(f"Q({p},{j})", build_Qpj(p, j)) for j in (1, 2)]
    corpus += [(f"SR(7,{j})", build_SR(7, j)) for j in (1, 2)]
    corpus.append(("SR(7,1,a=0)", build_SR(7, 1, a=(0, 0))))
    (g3, f3), (g5, f5) = build_G3_G5()
    corpus.append(("SI48", coset_quandle(g3, fix_subgroup(f3), f3)))
    corpus.append(("SI80", coset_quandle(g5, fix_subgroup(f5), f5)))
    corpus.append(("Q4xAff(Z3,2)", direct_product(build_Q4(), latin_p_family(3)[0])))
    corpus.append(("Q4xQ(7,1)", decomposition_witness(7, 1)))
    corpus.append(("latin16[0]xAff(Z5,2)", direct_product(latin16_family()[0], latin_p_family(5)[0])))
    corpus += [(f"cover(7,{j})", principal_cover(7, j)) for j in (1, 2)]
    return corpus


def galois_checks(q: QuandleTable) -> dict[str, bool]:
    """Every identity that applies to q; keys name the identity."""
    out: dict[str, bool] = {}
    L = all_congruences(q)
    cs = L.elements
    D = q.dis
    dis_of = [dis_alpha(q, a) for a in cs]
    sup_of = [dis_sup_alpha(q, a) for a in cs]

    def put(key, val):
        out[key] = out.get(key, True) and bool(val)

    for i, a in enumerate(cs):
        N = dis_of[i]
        o, c = orbit_cong(q, N, check=False), kernel_cong(q, N, check=False)
        put("sandwich O(Dis_a) <= a <= c(Dis_a)", o <= a <= c)
        if q.latin:
            put("latin: O(Dis_a) = a = c(Dis_a)", o == a == c)
        # Dis_{O_N} <= Dis_{c_N} <= N <= Dis^{O_N}
        dis_o = dis_alpha(q, o)
        dis_c = dis_alpha(q, c)
        sup_o = dis_sup_alpha(q, o)
        put("sandwich Dis_O(N) <= Dis_c(N) <= N <= Dis^O(N)", dis_o.is_subgroup_of(dis_c) and dis_c.is_subgroup_of(N) and N.is_subgroup_of(sup_o))
        put("Dis_a <= Dis^a", N.is_subgroup_of(sup_of[i]))
    for i, j in itertools.combinations(range(len(cs)), 2):
        a, b = cs[i], cs[j]
        N, M = dis_of[i], dis_of[j]
        put("Dis_a Dis_b = Dis_(a v b)", dis_alpha(q, a | b).equals(N.join(M)))
        put("c(N ^ M) = c(N) ^ c(M)", kernel_cong(q, N.intersection(M), check=False) == (kernel_cong(q, N, check=False) & kernel_cong(q, M, check=False)))
        put("O(NM) = O(N) v O(M)", orbit_cong(q, N.join(M), check=False) == (orbit_cong(q, N, check=False) | orbit_cong(q, M, check=False)))
    for a in L.minimal:
        N = dis_alpha(q, a)
        ea = _is_elementary_abelian(N)
        put("minimal a: Dis_a elementary abelian", ea)
        if ea and N.order > 1:
            r = _prime_factors(N.order)[0]
            sizes = a.block_sizes
            put("minimal a: blocks have prime-power size for the same prime", all(_is_power_of(int(s), r) for s in sizes))
    # Sylow parts of nilpotent normal subgroups
    for N in [D] + dis_of:
        if N.order > 1 and N.is_nilpotent():
            parts = list(sylow_parts(N).values())
            for P1, P2 in itertools.combinations(parts, 2):
                put("Sylow: O(P_i) ^ O(P_j) = 0", (orbit_cong(q, P1, check=False) & orbit_cong(q, P2, check=False)).is_bottom)
    # lattice shape facts
    put("height <= 4 iff Con = Max u Min u {0,1}", (L.height <= 3) == _slim(L))
    if len(L) > 2 and not is_directly_decomposable(q, L):
        # atoms and coatoms are taken among proper nontrivial congruences
        put("indecomposable: nu <= mu", L.nu <= L.mu)
        both = set(L.minimal) & set(L.maximal)
        put("indecomposable: Max and Min meet iff Con is the 3-chain", bool(both) == (len(L) == 3))
    if q.faithful:
        g = gamma(q)
        for i, a in enumerate(cs):
            if _is_cyclic(dis_of[i]):
                put("cyclic Dis_a implies a central", is_central_cong(q, a))
            if (a & g).is_bottom:
                cen = is_central_cong(q, a)
                put("a ^ gamma = 0 implies a central", cen)
                put("a ^ gamma = 0 implies Dis_a = Dis^a", dis_of[i].equals(sup_of[i]))
                put("a ^ gamma = 0 implies Q/a faithful", quotient(q, a.labels).faithful)
    if q.latin:
        put("latin implies solvable", D.is_solvable())
    return out


def _is_power_of(n: int, r: int) -> bool:
    while n > 1 and n % r == 0:
        n //= r
    return n == 1


def _slim(L) -> bool:
    special = {L.bottom, L.top, *L.minimal, *L.maximal}
    return all(c in special for c in L.elements)


def galois_suite(corpus=None) -> SuiteReport:
    t0 = time.perf_counter()
    rep = SuiteReport("galois")
    corpus = build_corpus() if corpus is None else corpus
    rep.details["corpus"] = len(corpus)
    rep.details["per_quandle"] = {}
    for name, q in corpus:
        res = galois_checks(q)
        rep.details["per_quandle"][name] = {"n": q.n, "failed": [k for k, v in res.items() if not v], "checked": len(res)}
        for k, v in res.items():
            rep.checks[k] = rep.checks.get(k, True) and v
    rep.checks["corpus has at least 30 quandles"] = len(corpus) >= 30
    return _timed(rep, t0)


SUITES = {"galois": lambda p: galois_suite(), "appendix": lambda p: appendix_suite(), "counting": counting_suite}

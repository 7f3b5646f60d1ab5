"""Quandle isomorphism: backtracking on tables, conjugacy of twisting maps, fingerprints.

The backtracking search works for connected targets. Left translations are
automorphisms and act transitively, so the first generator of the source can
be sent to element 0 of the target without loss. The remaining generators
branch over target elements whose local invariants match, and every partial
assignment is propagated through the generated subquandle before branching
further.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .conglat import all_congruences, is_directly_decomposable, lattice_shape
from .grpmodel import FiniteGroup, GroupMap
from .permgrp import abelian_invariants, perm_order
from .quandle import QuandleTable

IDX = np.int64


# ---------------------------------------------------------------------------
# backtracking
# ---------------------------------------------------------------------------


def generating_set(q: QuandleTable, start: int = 0) -> list[int]:
    """Greedy small generating set under * and \\, starting from ``start``."""
    gens = [start]
    inside = np.zeros(q.n, dtype=bool)
    inside[q.subquandle(gens)] = True
    while not inside.all():
        # prefer the candidate that enlarges the subquandle the most
        best, best_size = None, -1
        for c in np.nonzero(~inside)[0][:64]:
            size = q.subquandle(gens + [int(c)]).size
            if size > best_size:
                best, best_size = int(c), size
                if size == q.n:
                    break
        gens.append(best)
        inside[q.subquandle(gens)] = True
    return gens


def _local_key(q: QuandleTable, base: int, x: int) -> tuple[int, int]:
    disp = q.star[x][np.argsort(q.star[base])]  # L_x L_base^-1
    return q.subquandle([base, x]).size, perm_order(disp)


def _propagate(q1: QuandleTable, q2: QuandleTable, phi: np.ndarray) -> bool:
    """Close the partial map under * and \\; False on any conflict."""
    while True:
        dom = np.nonzero(phi >= 0)[0]
        img = phi[dom]
        changed = False
        for t1, t2 in ((q1.star, q2.star), (q1.ldiv, q2.ldiv)):
            src = t1[np.ix_(dom, dom)].ravel()
            dst = t2[np.ix_(img, img)].ravel()
            known = phi[src]
            if (known[known >= 0] != dst[known >= 0]).any():
                return False
            fresh = known < 0
            if fresh.any():
                s, d = src[fresh], dst[fresh]
                order = np.argsort(s, kind="stable")
                s, d = s[order], d[order]
                first = np.r_[True, s[1:] != s[:-1]]
                # the same new element must get one image
                grp = np.cumsum(first) - 1
                if (d != d[first][grp]).any():
                    return False
                phi[s[first]] = d[first]
                changed = True
        used = phi[phi >= 0]
        if np.unique(used).size != used.size:
            return False
        if not changed:
            return True


def are_isomorphic(q1: QuandleTable, q2: QuandleTable) -> np.ndarray | None:
    """A bijection phi with phi(x*y) = phi(x)*phi(y), or None."""
    if q1.n != q2.n:
        return None
    n = q1.n
    if n == 0:
        return np.zeros(0, dtype=IDX)
    if not q2.connected or not q1.connected:
        raise ValueError("are_isomorphic expects connected quandles")
    if q1.latin != q2.latin:
        return None
    if not np.array_equal(np.sort(q1.left_orders()), np.sort(q2.left_orders())):
        return None
    gens = generating_set(q1)
    keys1 = [_local_key(q1, gens[0], g) for g in gens[1:]]
    # candidates in the target, keyed relative to the fixed image 0
    cache: dict[tuple[int, int], list[int]] = {}
    all_keys = {}
    for c in range(1, n):
        all_keys.setdefault(_local_key(q2, 0, c), []).append(c)
    for k in keys1:
        cache[k] = all_keys.get(k, [])
        if not cache[k]:
            return None

    def search(depth: int, phi: np.ndarray):
        if depth == len(gens):
            return phi if (phi >= 0).all() else None
        g = gens[depth]
        if phi[g] >= 0:
            return search(depth + 1, phi)
        for c in cache[keys1[depth - 1]]:
            if c in set(phi[phi >= 0].tolist()):
                continue
            trial = phi.copy()
            trial[g] = c
            if _propagate(q1, q2, trial):
                out = search(depth + 1, trial)
                if out is not None:
                    return out
        return None

    phi0 = np.full(n, -1, dtype=IDX)
    phi0[gens[0]] = 0
    if not _propagate(q1, q2, phi0):
        return None
    phi = search(1, phi0)
    if phi is None:
        return None
    if not np.array_equal(phi[q1.star], q2.star[np.ix_(phi, phi)]):  # pragma: no cover
        raise AssertionError("isomorphism witness failed the table check")
    return phi


def is_isomorphic(q1: QuandleTable, q2: QuandleTable) -> bool:
    return are_isomorphic(q1, q2) is not None


# ---------------------------------------------------------------------------
# conjugacy criterion
# ---------------------------------------------------------------------------


def displacement_subgroup(G: FiniteGroup, f: GroupMap) -> np.ndarray:
    """Elements of the subgroup generated by g f(g)^-1."""
    e = G.elements
    return G.subgroup_generated(np.unique(G.mul(e, G.inv(f.table))))


def is_minimal_pair(G: FiniteGroup, f: GroupMap) -> bool:
    return displacement_subgroup(G, f).size == G.order


def conjugacy_orbit(f: GroupMap, generators: list[GroupMap], target: GroupMap | None = None, limit: int = 10**5):
    """Orbit of f under conjugation by the group generated by ``generators``.

    Stops early and returns (orbit, True) once ``target`` is met.
    """
    inverses = [h.inverse() for h in generators]
    seen = {f.table.tobytes(): f}
    frontier = [f]
    goal = None if target is None else target.table.tobytes()
    if goal in seen:
        return list(seen.values()), True
    while frontier:
        nxt = []
        for g in frontier:
            for h, hi in zip(generators, inverses):
                t = h.table[g.table[hi.table]]
                key = t.tobytes()
                if key not in seen:
                    m = GroupMap(g.domain, g.codomain, g.gens, t[list(g.gens)], t)
                    seen[key] = m
                    nxt.append(m)
                    if key == goal:
                        return list(seen.values()), True
                    if len(seen) > limit:
                        raise RuntimeError("conjugacy orbit exceeds the limit")
        frontier = nxt
    return list(seen.values()), False


def iso_via_conjugacy(G: FiniteGroup, f1: GroupMap, f2: GroupMap, automorphism_gens: list[GroupMap]) -> bool:
    """Decide whether the coset quandles of f1 and f2 are isomorphic.

    Both maps must satisfy the minimality condition (g f(g)^-1 generate G);
    then the quandles are isomorphic exactly when the maps are conjugate
    under the automorphism group generated by ``automorphism_gens``.
    """
    for f in (f1, f2):
        if not is_minimal_pair(G, f):
            raise ValueError("g f(g)^-1 does not generate the group; the conjugacy criterion does not apply")
    if f1.order() != f2.order():
        return False
    if np.count_nonzero(f1.table == G.elements) != np.count_nonzero(f2.table == G.elements):
        return False
    return conjugacy_orbit(f1, automorphism_gens, target=f2)[1]


# ---------------------------------------------------------------------------
# fingerprints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    n: int
    lmlt_order: int
    dis_order: int
    center_order: int
    num_congruences: int
    shape: str
    decomposable: bool
    left_orders: tuple[tuple[int, int], ...]
    abelianization: tuple[int, ...]
    term_profile: tuple[tuple[int, int], ...] = ()

    @property
    def key(self) -> tuple:
        return (
            self.n,
            self.lmlt_order,
            self.dis_order,
            self.center_order,
            self.num_congruences,
            self.shape,
            self.decomposable,
            self.left_orders,
            self.abelianization,
            self.term_profile,
        )

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "lmlt": self.lmlt_order,
            "dis": self.dis_order,
            "center": self.center_order,
            "congruences": self.num_congruences,
            "shape": self.shape,
            "dd": self.decomposable,
            "left_orders": [list(p) for p in self.left_orders],
            "abelianization": list(self.abelianization),
            "term_profile": hashlib.sha1(repr(self.term_profile).encode()).hexdigest()[:16],
        }

    def __str__(self):
        ab = "x".join(str(a) for a in self.abelianization) or "1"
        dd = "DD" if self.decomposable else "ind"
        return f"n={self.n} lmlt={self.lmlt_order} dis={self.dis_order} z={self.center_order} con={self.num_congruences} {self.shape} {dd} ab={ab}"


def term_profile(q: QuandleTable) -> tuple[tuple[int, int], ...]:
    """Solution counts of t(x0, y) = x0 and t(x0, y) = y over y, for small terms t.

    Terms are built from two variables with * and \\ up to nesting depth two,
    in a fixed order. On a connected quandle the counts do not depend on the
    base point x0, so they are isomorphism invariants.
    """
    n = q.n
    y = np.arange(n, dtype=IDX)
    x = np.zeros(n, dtype=IDX)
    ops = (q.star, q.ldiv)
    level0 = [x, y]
    level1 = [t[a, b] for t in ops for a, b in itertools.product(level0, repeat=2)]
    level2 = [t[a, b] for t in ops for a, b in itertools.product(level0 + level1, repeat=2)]
    return tuple((int((t == 0).sum()), int((t == y).sum())) for t in level1 + level2)


def fingerprint(q: QuandleTable) -> Fingerprint:
    D = q.dis
    L = all_congruences(q)
    orders, counts = np.unique(q.left_orders(), return_counts=True)
    derived = D.derived_subgroup()
    if derived.order == D.order:
        ab: tuple[int, ...] = ()
    else:
        quot = D.coset_action(derived) if derived.order > 1 else D
        ab = tuple(abelian_invariants(quot))
    return Fingerprint(
        n=q.n,
        lmlt_order=q.lmlt.order,
        dis_order=D.order,
        center_order=D.center().order,
        num_congruences=len(L),
        shape=str(lattice_shape(L)),
        decomposable=is_directly_decomposable(q, L),
        left_orders=tuple((int(o), int(c)) for o, c in zip(orders, counts)),
        abelianization=ab,
        term_profile=term_profile(q) if q.connected else (),
    )


class _Entry:
    def __init__(self, q: QuandleTable, fp: Fingerprint):
        self.q, self.fp = q, fp


def dedupe(quandles, fingerprints=None) -> list[QuandleTable]:
    """One representative per isomorphism class, sorted by fingerprint then table."""
    qs = list(quandles)
    fps = list(fingerprints) if fingerprints is not None else [fingerprint(q) for q in qs]
    buckets: dict[tuple, list[_Entry]] = {}
    for q, fp in zip(qs, fps):
        reps = buckets.setdefault(fp.key, [])
        if not any(r.q == q or is_isomorphic(r.q, q) for r in reps):
            reps.append(_Entry(q, fp))
    out = [e for reps in buckets.values() for e in reps]
    out.sort(key=lambda e: (repr(e.fp.key), e.q.star.tobytes()))
    return [e.q for e in out]


@dataclass
class ClassBucket:
    """Representatives with their fingerprints, as produced by ``classify_corpus``."""

    quandle: QuandleTable
    fp: Fingerprint
    members: int = 1

    @cached_property
    def label(self) -> str:
        return str(self.fp)


def classify_corpus(quandles) -> list[ClassBucket]:
    buckets: dict[tuple, list[ClassBucket]] = {}
    for q in quandles:
        fp = fingerprint(q)
        reps = buckets.setdefault(fp.key, [])
        for r in reps:
            if r.quandle == q or is_isomorphic(r.quandle, q):
                r.members += 1
                break
        else:
            reps.append(ClassBucket(q, fp))
    out = [r for reps in buckets.values() for r in reps]
    out.sort(key=lambda r: (repr(r.fp.key), r.quandle.star.tobytes()))
    return out

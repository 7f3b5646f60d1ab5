"""Permutation groups on ``{0, ..., n-1}``.

Permutations are integer image arrays. The composition ``a * b`` means
"apply ``b`` first, then ``a``", so ``(a * b)[x] == a[b[x]]``.

Orders and membership come from a stabilizer chain. The chain is grown
from random group elements (product replacement) and then certified by a
deterministic pass over all Schreier generators, so the reported order is
exact and never probabilistic. A chain also gives every element a
canonical index in ``range(order)`` (its mixed-radix transversal
coordinates), which is what the enumeration-based helpers use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .linfq import CapacityError

PERM_DTYPE = np.int32

#: Upper bound for anything that materializes all group elements.
ENUMERATION_CAP = 10**6
#: Upper bound on order * degree for materialized element arrays.
ENUMERATION_CELLS = 8 * 10**7


def _as_perm_array(img) -> np.ndarray:
    arr = np.asarray(img, dtype=PERM_DTYPE)
    if arr.ndim != 1:
        raise ValueError("permutation images must be one dimensional")
    n = arr.shape[0]
    seen = np.zeros(n, dtype=bool)
    if n and (arr.min() < 0 or arr.max() >= n):
        raise ValueError("permutation image out of range")
    seen[arr] = True
    if not seen.all():
        raise ValueError("image array is not a bijection")
    return arr


def identity_perm(n: int) -> np.ndarray:
    return np.arange(n, dtype=PERM_DTYPE)


def inverse_perm(a: np.ndarray) -> np.ndarray:
    inv = np.empty_like(a)
    inv[a] = np.arange(a.shape[0], dtype=a.dtype)
    return inv


def inverse_many(arr: np.ndarray) -> np.ndarray:
    """Row-wise inverses of a stack of permutations."""
    out = np.empty_like(arr)
    rows = np.arange(arr.shape[0])[:, None]
    out[rows, arr] = np.arange(arr.shape[1], dtype=arr.dtype)[None, :]
    return out


def compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a after b."""
    return a[b]


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[a, b] = a^-1 b^-1 a b."""
    ai, bi = inverse_perm(a), inverse_perm(b)
    return ai[bi[a[b]]]


def perm_order(a: np.ndarray) -> int:
    """Order of a permutation (lcm of cycle lengths)."""
    n = a.shape[0]
    seen = np.zeros(n, dtype=bool)
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = a[x]
            length += 1
        order = order * length // np.gcd(order, length)
    return int(order)


@dataclass(frozen=True, eq=False)
class Permutation:
    """A bijection of ``{0..n-1}`` given by its image array."""

    image: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = _as_perm_array(self.image).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "image", arr)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(identity_perm(n))

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Permutation":
        img = identity_perm(n)
        for cyc in cycles:
            for i, x in enumerate(cyc):
                img[x] = cyc[(i + 1) % len(cyc)]
        return cls(img)

    @property
    def degree(self) -> int:
        return self.image.shape[0]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(self.image[other.image])

    def inverse(self) -> "Permutation":
        return Permutation(inverse_perm(self.image))

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def order(self) -> int:
        return perm_order(self.image)

    def is_identity(self) -> bool:
        return bool((self.image == np.arange(self.degree)).all())

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.image.shape == other.image.shape and bool((self.image == other.image).all())

    def __hash__(self):
        return hash(self.image.tobytes())

    def __repr__(self):
        return f"Permutation({self.image.tolist()})"


# ---------------------------------------------------------------------------
# stabilizer chain
# ---------------------------------------------------------------------------


class _Level:
    __slots__ = ("base", "gens", "orbit", "pos", "trans", "tinv")

    def __init__(self, base: int, gens: list[np.ndarray], n: int):
        self.base = base
        self.gens = gens
        self.recompute(n)

    def recompute(self, n: int) -> None:
        pos = np.full(n, -1, dtype=np.int64)
        pos[self.base] = 0
        orbit = [self.base]
        trans = [identity_perm(n)]
        i = 0
        while i < len(orbit):
            x = orbit[i]
            u = trans[i]
            for s in self.gens:
                y = int(s[x])
                if pos[y] < 0:
                    pos[y] = len(orbit)
                    orbit.append(y)
                    trans.append(s[u])
            i += 1
        self.orbit = np.array(orbit, dtype=np.int64)
        self.pos = pos
        self.trans = np.stack(trans)
        self.tinv = inverse_many(self.trans)


class StabChain:
    """Base and strong generating set with explicit transversals."""

    def __init__(self, n: int, gens: list[np.ndarray], *, base_prefix=(), seed: int = 0):
        self.n = n
        self.levels: list[_Level] = []
        self.strong: list[np.ndarray] = []
        self._base_prefix = [int(b) for b in base_prefix]
        ident = identity_perm(n)
        gens = [g for g in gens if not np.array_equal(g, ident)]
        for b in self._base_prefix:
            self.levels.append(_Level(b, [], n))
        if gens:
            self._random_phase(gens, np.random.default_rng(seed))
            self._verify()
            self._absorb(gens)
        # drop trailing levels with trivial orbit that came only from the prefix
        while self.levels and len(self.levels[-1].orbit) == 1 and not self.levels[-1].gens:
            self.levels.pop()

    # -- incremental construction ------------------------------------------
    def _fixes_prefix(self, g: np.ndarray, depth: int) -> bool:
        return all(g[self.levels[i].base] == self.levels[i].base for i in range(depth))

    def _add_strong(self, h: np.ndarray, level: int) -> None:
        """Insert a strong generator fixing the first ``level`` base points."""
        ident_mask = h != np.arange(self.n)
        if level == len(self.levels):
            moved = int(np.nonzero(ident_mask)[0][0])
            self.levels.append(_Level(moved, [], self.n))
        self.strong.append(h)
        for i in range(level + 1):
            self.levels[i].gens.append(h)
            self.levels[i].recompute(self.n)

    def _sift_one(self, g: np.ndarray, start: int = 0):
        """Return (residue, level reached). Level == len(levels) means passed."""
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            beta = int(g[lv.base])
            k = lv.pos[beta]
            if k < 0:
                return g, i
            g = lv.tinv[k][g]
        return g, len(self.levels)

    def _sift_add(self, g: np.ndarray, start: int = 0) -> bool:
        h, lvl = self._sift_one(g, start)
        if lvl == len(self.levels) and np.array_equal(h, np.arange(self.n)):
            return False
        self._add_strong(h, lvl)
        return True

    def _random_phase(self, gens: list[np.ndarray], rng) -> None:
        for g in gens[: min(len(gens), 6)]:
            self._sift_add(g)
        slots = [g.copy() for g in gens]
        while len(slots) < 10:
            slots.append(gens[len(slots) % len(gens)].copy())
        acc = identity_perm(self.n)
        m = len(slots)

        def step():
            nonlocal acc
            i, j = rng.choice(m, size=2, replace=False)
            if rng.random() < 0.5:
                slots[i] = slots[i][slots[j]]
            else:
                slots[i] = slots[i][inverse_perm(slots[j])]
            acc = acc[slots[i]]
            return acc

        for _ in range(40):
            step()
        quiet = 0
        while quiet < 25:
            quiet = 0 if self._sift_add(step().copy()) else quiet + 1

    def _schreier_chunks(self, i: int):
        """Schreier generators of level i, one chunk per strong generator."""
        lv = self.levels[i]
        for s in list(lv.gens):
            su = s[lv.trans]  # (o, n): s after u_b
            back = lv.tinv[lv.pos[s[lv.orbit]]]
            yield np.take_along_axis(back, su, axis=1)

    def _verify(self) -> None:
        i = len(self.levels) - 1
        while i >= 0:
            restart = None
            for chunk in self._schreier_chunks(i):
                _, ok = self.sift_many(chunk, start=i + 1)
                bad = np.nonzero(~ok)[0]
                if bad.size:
                    h, lvl = self._sift_one(chunk[bad[0]], i + 1)
                    self._add_strong(h, lvl)
                    restart = lvl  # levels 0..lvl were rebuilt
                    break
            i = i - 1 if restart is None else restart

    def _absorb(self, gens: list[np.ndarray]) -> None:
        """Make sure every input generator lies in the certified group."""
        while True:
            arr = np.stack(gens)
            _, ok = self.sift_many(arr)
            bad = np.nonzero(~ok)[0]
            if not bad.size:
                return
            h, lvl = self._sift_one(arr[bad[0]])
            self._add_strong(h, lvl)
            self._verify()

    # -- queries --------------------------------------------------------------
    @property
    def order(self) -> int:
        o = 1
        for lv in self.levels:
            o *= len(lv.orbit)
        return o

    @property
    def base(self) -> list[int]:
        return [lv.base for lv in self.levels]

    def sift_many(self, arr: np.ndarray, start: int = 0):
        """Vectorized sift. Returns (residues, membership mask)."""
        arr = np.array(arr, dtype=PERM_DTYPE, copy=True)
        m = arr.shape[0]
        ok = np.ones(m, dtype=bool)
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            k = lv.pos[arr[:, lv.base]]
            miss = k < 0
            ok &= ~miss
            live = np.nonzero(~miss)[0]
            if live.size:
                arr[live] = np.take_along_axis(lv.tinv[k[live]], arr[live], axis=1)
        ok &= (arr == np.arange(self.n, dtype=PERM_DTYPE)).all(axis=1)
        return arr, ok

    def coordinates(self, arr: np.ndarray) -> np.ndarray:
        """Canonical index of each row, or -1 for non-members."""
        arr = np.array(arr, dtype=PERM_DTYPE, copy=True)
        m = arr.shape[0]
        idx = np.zeros(m, dtype=np.int64)
        ok = np.ones(m, dtype=bool)
        stride = 1
        for lv in self.levels:
            k = lv.pos[arr[:, lv.base]]
            miss = k < 0
            ok &= ~miss
            k = np.where(miss, 0, k)
            idx += k * stride
            arr = np.take_along_axis(lv.tinv[k], arr, axis=1)
            stride *= len(lv.orbit)
        ok &= (arr == np.arange(self.n, dtype=PERM_DTYPE)).all(axis=1)
        return np.where(ok, idx, -1)

    def enumerate(self) -> np.ndarray:
        """All elements, row ``i`` having canonical index ``i``."""
        E = identity_perm(self.n)[None, :]
        for lv in reversed(self.levels):
            U = lv.trans  # (o, n)
            block = U[:, E]  # (o, m, n)
            E = np.ascontiguousarray(block.transpose(1, 0, 2)).reshape(-1, self.n)
        return E


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------


class PermGroup:
    """A permutation group given by generators; the chain is built lazily."""

    def __init__(self, degree: int, gens=(), *, base_prefix=()):
        arrs = []
        for g in gens:
            a = g.image if isinstance(g, Permutation) else np.asarray(g, dtype=PERM_DTYPE)
            if a.shape != (degree,):
                raise ValueError(f"generator of degree {a.shape[0]} in a group of degree {degree}")
            arrs.append(a.astype(PERM_DTYPE, copy=False))
        self.degree = degree
        self.gens = arrs
        self._base_prefix = tuple(base_prefix)

    # -- construction ---------------------------------------------------------
    @classmethod
    def closure(cls, gens, degree: int | None = None) -> "PermGroup":
        gens = list(gens)
        if degree is None:
            if not gens:
                raise ValueError("degree needed for an empty generating set")
            first = gens[0]
            degree = (first.degree if isinstance(first, Permutation) else len(first))
        degs = {g.degree if isinstance(g, Permutation) else len(g) for g in gens}
        if degs and degs != {degree}:
            raise ValueError(f"generators of mixed degrees {sorted(degs)}")
        return cls(degree, gens)

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree, [])

    @classmethod
    def from_elements(cls, degree: int, elements: np.ndarray) -> "PermGroup":
        """Subgroup generated by a list of elements, with few generators."""
        elements = np.asarray(elements, dtype=PERM_DTYPE).reshape(-1, degree)
        group = cls(degree, [])
        rng = np.random.default_rng(1)
        while True:
            inside = group.contains_many(elements)
            out = np.nonzero(~inside)[0]
            if not out.size:
                return group
            pick = elements[out[rng.integers(out.size)]]
            group = cls(degree, group.small_gens + [pick])

    # -- chain-backed queries ------------------------------------------------
    @cached_property
    def chain(self) -> StabChain:
        return StabChain(self.degree, self.gens, base_prefix=self._base_prefix)

    @property
    def order(self) -> int:
        return self.chain.order

    def __len__(self):  # pragma: no cover - convenience
        return self.order

    @property
    def small_gens(self) -> list[np.ndarray]:
        """A short generating set (the strong generators of the chain)."""
        return list(self.chain.strong)

    def contains(self, g) -> bool:
        a = g.image if isinstance(g, Permutation) else np.asarray(g, dtype=PERM_DTYPE)
        if a.shape != (self.degree,):
            raise ValueError("degree mismatch")
        return bool(self.chain.sift_many(a[None, :])[1][0])

    def contains_many(self, arr) -> np.ndarray:
        arr = np.asarray(arr, dtype=PERM_DTYPE).reshape(-1, self.degree)
        if arr.shape[0] == 0:
            return np.zeros(0, dtype=bool)
        return self.chain.sift_many(arr)[1]

    def element_index(self, arr) -> np.ndarray:
        arr = np.asarray(arr, dtype=PERM_DTYPE).reshape(-1, self.degree)
        return self.chain.coordinates(arr)

    def _check_enumerable(self, what: str) -> None:
        if self.order > ENUMERATION_CAP or self.order * self.degree > ENUMERATION_CELLS:
            raise CapacityError(f"{what}: group of order {self.order} on {self.degree} points exceeds the enumeration cap")

    @cached_property
    def elements(self) -> np.ndarray:
        self._check_enumerable("element enumeration")
        E = self.chain.enumerate()
        E.setflags(write=False)
        return E

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return bool(other.contains_many(np.stack(self.small_gens)).all()) if self.small_gens else True

    def equals(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self.order == other.order and self.is_subgroup_of(other)

    # -- orbits ---------------------------------------------------------------
    def orbit_labels(self) -> np.ndarray:
        """Label array: points in the same orbit share the smallest member."""
        n = self.degree
        gens = self.small_gens if self._chain_ready() else self.gens
        if not gens:
            return np.arange(n)
        rows = np.concatenate([np.arange(n)] * len(gens))
        cols = np.concatenate([g.astype(np.int64) for g in gens])
        graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n))
        _, comp = connected_components(graph, directed=True, connection="weak")
        first = np.full(comp.max() + 1, n, dtype=np.int64)
        np.minimum.at(first, comp, np.arange(n))
        return first[comp]

    def _chain_ready(self) -> bool:
        return "chain" in self.__dict__

    def orbits(self) -> list[list[int]]:
        lab = self.orbit_labels()
        out: dict[int, list[int]] = {}
        for x, l in enumerate(lab.tolist()):
            out.setdefault(l, []).append(x)
        return list(out.values())

    def is_transitive(self) -> bool:
        return bool((self.orbit_labels() == 0).all())

    def stabilizer(self, point: int) -> "PermGroup":
        """Point stabilizer, read off a chain whose first base point is ``point``."""
        G = self
        if self._base_prefix[:1] != (point,):
            G = PermGroup(self.degree, self.small_gens, base_prefix=(point,))
        levels = G.chain.levels
        if not levels or levels[0].base != point:
            return G
        gens = levels[1].gens if len(levels) > 1 else []
        return PermGroup(self.degree, list(gens))

    # -- structure --------------------------------------------------------------
    def is_abelian(self) -> bool:
        gs = self.small_gens
        for i, a in enumerate(gs):
            for b in gs[i + 1 :]:
                if not np.array_equal(a[b], b[a]):
                    return False
        return True

    def normal_closure(self, seeds) -> "PermGroup":
        """Smallest subgroup containing ``seeds`` normalized by this group."""
        seeds = [s.image if isinstance(s, Permutation) else np.asarray(s, dtype=PERM_DTYPE) for s in seeds]
        N = PermGroup(self.degree, seeds)
        conj = self.small_gens
        if not conj:
            return N
        conj_inv = [inverse_perm(g) for g in conj]
        while True:
            ng = N.small_gens
            if not ng:
                return N
            cands = np.stack([g[h[gi]] for g, gi in zip(conj, conj_inv) for h in ng])
            inside = N.contains_many(cands)
            bad = np.nonzero(~inside)[0]
            if not bad.size:
                return N
            N = PermGroup(self.degree, ng + [cands[bad[0]]])

    def derived_subgroup(self) -> "PermGroup":
        gs = self.small_gens
        comms = [commutator(a, b) for i, a in enumerate(gs) for b in gs[i + 1 :]]
        return self.normal_closure(comms)

    def derived_series(self) -> list["PermGroup"]:
        series = [self]
        while True:
            nxt = series[-1].derived_subgroup()
            if nxt.order == series[-1].order:
                return series
            series.append(nxt)

    def commutator_subgroup(self, N: "PermGroup") -> "PermGroup":
        """[N, G] for a normal subgroup N of this group."""
        comms = [commutator(a, b) for a in N.small_gens for b in self.small_gens]
        return self.normal_closure(comms)

    def lower_central_series(self) -> list["PermGroup"]:
        """[G, [G,G], [[G,G],G], ...] until the terms stabilize."""
        series = [self]
        while True:
            nxt = self.commutator_subgroup(series[-1])
            if nxt.order == series[-1].order:
                return series
            series.append(nxt)

    def is_solvable(self) -> bool:
        return self.derived_series()[-1].order == 1

    def is_nilpotent(self) -> bool:
        return self.lower_central_series()[-1].order == 1

    def is_normal_in(self, G: "PermGroup") -> bool:
        mine = self.small_gens
        if not mine:
            return True
        cands = np.stack([g[h[inverse_perm(g)]] for g in G.small_gens for h in mine]) if G.small_gens else np.empty((0, self.degree), dtype=PERM_DTYPE)
        return bool(self.contains_many(cands).all()) if len(cands) else True

    def center(self) -> "PermGroup":
        self._check_enumerable("center")
        E = self.elements
        keep = np.ones(E.shape[0], dtype=bool)
        for s in self.small_gens:
            keep &= (E[:, s] == s[E]).all(axis=1)
        return PermGroup.from_elements(self.degree, E[keep])

    def intersection(self, other: "PermGroup") -> "PermGroup":
        small, big = (self, other) if self.order <= other.order else (other, self)
        E = small.elements
        return PermGroup.from_elements(self.degree, E[big.contains_many(E)])

    def join(self, other: "PermGroup") -> "PermGroup":
        return PermGroup(self.degree, self.small_gens + other.small_gens)

    def block_action_kernel(self, partition) -> "PermGroup":
        """Elements fixing every block of ``partition`` (a label array) setwise."""
        lab = np.asarray(partition)
        n = self.degree
        _, first = np.unique(lab, return_index=True)
        rep = first[np.searchsorted(np.unique(lab), lab)]
        for g in self.small_gens:
            if not np.array_equal(lab[g], lab[g[rep]]):
                raise ValueError("partition is not invariant under the group")
        self._check_enumerable("block kernel")
        E = self.elements
        keep = (lab[E] == lab[None, :]).all(axis=1)
        return PermGroup.from_elements(n, E[keep])

    def coset_labels(self, N: "PermGroup") -> np.ndarray:
        """Left-coset label of every element (indexed canonically)."""
        if not N.is_subgroup_of(self):
            raise ValueError("not a subgroup")
        if not N.is_normal_in(self):
            raise ValueError("subgroup is not normal")
        self._check_enumerable("coset action")
        E = self.elements
        m = E.shape[0]
        rows, cols = [], []
        for s in N.small_gens:
            rows.append(np.arange(m))
            cols.append(self.element_index(E[:, s]))
        if not rows:
            return np.arange(m)
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        graph = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(m, m))
        _, comp = connected_components(graph, directed=True, connection="weak")
        return comp

    def coset_action(self, N: "PermGroup") -> "PermGroup":
        """The quotient G/N acting on left cosets of N."""
        lab = self.coset_labels(N)
        k = int(lab.max()) + 1
        if k > 10**4:
            raise CapacityError(f"index {k} exceeds the coset action cap")
        E = self.elements
        reps = np.zeros(k, dtype=np.int64)
        reps[lab[::-1]] = np.arange(E.shape[0])[::-1]
        rep_elems = E[reps]
        images = []
        for t in self.small_gens:
            idx = self.element_index(t[rep_elems])
            images.append(lab[idx].astype(PERM_DTYPE))
        return PermGroup(k, images)

    def random_element(self, rng) -> np.ndarray:
        g = identity_perm(self.degree)
        for lv in reversed(self.chain.levels):
            g = lv.trans[rng.integers(len(lv.orbit))][g]
        return g

    def element_orders(self) -> np.ndarray:
        E = self.elements
        return np.array([perm_order(e) for e in E], dtype=np.int64)


def closure(gens, degree: int | None = None) -> PermGroup:
    return PermGroup.closure(gens, degree)


def order(G: PermGroup) -> int:
    return G.order


def contains(G: PermGroup, g) -> bool:
    return G.contains(g)


def normal_closure(G: PermGroup, seeds) -> PermGroup:
    return G.normal_closure(seeds)


def derived_series(G: PermGroup) -> list[PermGroup]:
    return G.derived_series()


def lower_central_series(G: PermGroup) -> list[PermGroup]:
    return G.lower_central_series()


def center(G: PermGroup) -> PermGroup:
    return G.center()


def is_transitive(G: PermGroup) -> bool:
    return G.is_transitive()


def orbits(G: PermGroup) -> list[list[int]]:
    return G.orbits()


def block_action_kernel(G: PermGroup, partition) -> PermGroup:
    return G.block_action_kernel(partition)


def coset_action(G: PermGroup, N: PermGroup) -> PermGroup:
    return G.coset_action(N)


def bfs_closure(gens, degree: int, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """Naive BFS over the Cayley graph; the independent oracle for small groups."""
    gens = [np.asarray(g, dtype=PERM_DTYPE) for g in gens]
    start = identity_perm(degree)
    seen = {start.tobytes(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                h = g[e]
                key = h.tobytes()
                if key not in seen:
                    seen[key] = h
                    nxt.append(h)
                    if len(seen) > cap:
                        raise CapacityError("BFS closure exceeded its cap")
        frontier = nxt
    return np.stack(list(seen.values()))


def abelian_invariants(G: PermGroup) -> tuple[int, ...]:
    """Elementary divisors of an abelian permutation group, sorted ascending."""
    if not G.is_abelian():
        raise ValueError("group is not abelian")
    if G.order == 1:
        return ()
    orders = G.element_orders()
    n = G.order
    primes = []
    m, q = n, 2
    while q * q <= m:
        if m % q == 0:
            primes.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        primes.append(m)
    out: list[int] = []
    for q in primes:
        # s_i = log_q #{g : g^(q^i) = 1}
        s = [0]
        i = 1
        while True:
            cnt = int(np.sum((q**i) % orders == 0))
            si = round(np.log(cnt) / np.log(q))
            s.append(si)
            if q**si >= _ppart(n, q):
                break
            i += 1
        # number of cyclic factors of order >= q^i is s_i - s_{i-1}
        ge = [s[i] - s[i - 1] for i in range(1, len(s))] + [0]
        for i in range(len(ge) - 1):
            out += [q ** (i + 1)] * (ge[i] - ge[i + 1])
    return tuple(sorted(out))


def _ppart(n: int, q: int) -> int:
    r = 1
    while n % q == 0:
        n //= q
        r *= q
    return r

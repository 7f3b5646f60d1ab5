"""Congruences of quandles, the congruence lattice and commutator predicates.

A congruence is stored as a canonical block-label array (blocks numbered in
order of their smallest element). The lattice of a connected quandle is
built from principal congruences ``Cg(x0, y)``: every congruence is
invariant under left translations, so it is the join of the principal
congruences at a single base point, and ``y`` only needs to range over orbit
representatives of the stabilizer of ``x0`` in LMlt.

The link to groups runs through four operators:

* ``dis_alpha(Q, a)``: generated by ``L_x L_y^-1`` for ``x a y``.
* ``dis_sup_alpha(Q, a)``: displacements that fix every ``a``-block setwise.
* ``orbit_cong(Q, N)``: orbits of a normal subgroup ``N``.
* ``kernel_cong(Q, N)``: ``x ~ y`` iff ``L_x L_y^-1`` lies in ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .linfq import CapacityError
from .permgrp import PermGroup, inverse_many, inverse_perm
from .quandle import QuandleError, QuandleTable, _canonical_labels

IDX = np.int64
MAX_LATTICE_SIZE = 2500
SMALL_JOIN = 64  # below this, scipy's per-call overhead dominates a join


def _components(n: int, src, dst) -> np.ndarray:
    g = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    return connected_components(g, directed=False)[1]


def _join_labels(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Finest partition coarser than both, by propagating block minima to a fixed point."""
    lab = np.arange(a.size, dtype=IDX)
    while True:
        prev = lab
        for blocks in (a, b):
            m = np.full(int(blocks.max()) + 1, a.size, dtype=IDX)
            np.minimum.at(m, blocks, lab)
            lab = m[blocks]
        if np.array_equal(lab, prev):
            return lab


def _block_reps(labels: np.ndarray) -> np.ndarray:
    """For each element, the smallest element of its block."""
    k = int(labels.max()) + 1
    first = np.full(k, labels.size, dtype=IDX)
    np.minimum.at(first, labels, np.arange(labels.size))
    return first[labels]


@dataclass(frozen=True, eq=False)
class Congruence:
    labels: np.ndarray

    def __post_init__(self):
        lab = _canonical_labels(self.labels)
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @classmethod
    def bottom(cls, n: int) -> "Congruence":
        return cls(np.arange(n))

    @classmethod
    def top(cls, n: int) -> "Congruence":
        return cls(np.zeros(n, dtype=IDX))

    @property
    def n(self) -> int:
        return self.labels.size

    @cached_property
    def num_blocks(self) -> int:
        return int(self.labels.max()) + 1 if self.n else 0

    @property
    def quotient_size(self) -> int:
        return self.num_blocks

    @cached_property
    def block_sizes(self) -> np.ndarray:
        return np.bincount(self.labels)

    @cached_property
    def blocks(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        cuts = np.cumsum(self.block_sizes)[:-1]
        return np.split(order, cuts)

    @cached_property
    def reps(self) -> np.ndarray:
        return _block_reps(self.labels)

    @property
    def is_bottom(self) -> bool:
        return self.num_blocks == self.n

    @property
    def is_top(self) -> bool:
        return self.num_blocks <= 1

    @property
    def is_uniform(self) -> bool:
        return bool((self.block_sizes == self.block_sizes[0]).all())

    def related(self, x: int, y: int) -> bool:
        return bool(self.labels[x] == self.labels[y])

    def __le__(self, other: "Congruence") -> bool:
        """Refinement: every block of self lies inside a block of other."""
        return bool((other.labels == other.labels[self.reps]).all())

    def __ge__(self, other: "Congruence") -> bool:
        return other <= self

    def __lt__(self, other: "Congruence") -> bool:
        return self <= other and self != other

    def __eq__(self, other):
        return isinstance(other, Congruence) and np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash(self.labels.tobytes())

    def meet(self, other: "Congruence") -> "Congruence":
        _, lab = np.unique(self.labels * (other.num_blocks + 1) + other.labels, return_inverse=True)
        return Congruence(lab.ravel())

    def join(self, other: "Congruence") -> "Congruence":
        if self.n <= SMALL_JOIN:
            return Congruence(_join_labels(self.labels, other.labels))
        x = np.arange(self.n)
        src = np.concatenate([x, x])
        dst = np.concatenate([self.reps, other.reps])
        return Congruence(_components(self.n, src, dst))

    __and__ = meet
    __or__ = join

    def composition_is_total(self, other: "Congruence") -> bool:
        """Whether self o other relates every pair: each block meets each block."""
        hits = np.zeros((self.num_blocks, other.num_blocks), dtype=bool)
        hits[self.labels, other.labels] = True
        return bool(hits.all())

    def __repr__(self):
        return f"Congruence(blocks={self.num_blocks}, n={self.n})"


def is_congruence(q: QuandleTable, alpha: Congruence) -> bool:
    from .quandle import is_compatible

    return is_compatible(q, alpha.labels)


def generated_congruence(q: QuandleTable, pairs) -> Congruence:
    """Smallest congruence containing the given pairs (closure in rounds)."""
    n = q.n
    pairs = np.asarray(list(pairs), dtype=IDX).reshape(-1, 2)
    lab = _components(n, pairs[:, 0], pairs[:, 1]) if pairs.size else np.arange(n)
    tables = (q.star, q.ldiv)
    while True:
        rep = _block_reps(lab)
        moved = np.nonzero(rep != np.arange(n))[0]
        if moved.size == 0:
            return Congruence(lab)
        r = rep[moved]
        src, dst = [], []
        for t in tables:
            # changing the left argument, then the right one
            src.append(t[moved].ravel())
            dst.append(t[r].ravel())
            src.append(t[:, moved].ravel())
            dst.append(t[:, r].ravel())
        src = np.concatenate(src)
        dst = np.concatenate(dst)
        keep = lab[src] != lab[dst]
        if not keep.any():
            return Congruence(lab)
        x = np.arange(n)
        new = _components(n, np.concatenate([x, src[keep]]), np.concatenate([rep, dst[keep]]))
        lab = new


def principal_congruence(q: QuandleTable, x: int, y: int) -> Congruence:
    return generated_congruence(q, [(x, y)])


# ---------------------------------------------------------------------------
# lattice
# ---------------------------------------------------------------------------


@dataclass
class CongruenceLattice:
    quandle: QuandleTable
    elements: list[Congruence]
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.elements.sort(key=lambda c: (-c.num_blocks, c.labels.tobytes()))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, c: Congruence) -> bool:
        return c in set(self.elements)

    @property
    def bottom(self) -> Congruence:
        return self.elements[0]

    @property
    def top(self) -> Congruence:
        return self.elements[-1]

    @cached_property
    def leq(self) -> np.ndarray:
        m = len(self.elements)
        out = np.zeros((m, m), dtype=bool)
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                out[i, j] = a <= b
        return out

    @cached_property
    def hasse(self) -> list[tuple[int, int]]:
        """Covering pairs (i, j): element i is covered by element j."""
        lt = self.leq & ~np.eye(len(self.elements), dtype=bool)
        edges = []
        for i, j in zip(*np.nonzero(lt)):
            between = lt[i] & lt[:, j]
            if not between.any():
                edges.append((int(i), int(j)))
        return edges

    @property
    def minimal(self) -> list[Congruence]:
        return [self.elements[j] for i, j in self.hasse if i == 0]

    @property
    def maximal(self) -> list[Congruence]:
        top = len(self.elements) - 1
        return [self.elements[i] for i, j in self.hasse if j == top]

    @cached_property
    def mu(self) -> Congruence:
        out = self.top
        for c in self.maximal:
            out = out.meet(c)
        return out

    @cached_property
    def nu(self) -> Congruence:
        out = self.bottom
        for c in self.minimal:
            out = out.join(c)
        return out

    @cached_property
    def height(self) -> int:
        """Length (in covering steps) of the longest chain from bottom to top."""
        m = len(self.elements)
        best = [0] * m
        for j in range(m):  # elements are sorted so predecessors come first
            for i, jj in self.hasse:
                if jj == j:
                    best[j] = max(best[j], best[i] + 1)
        return best[-1]

    def is_closed(self) -> bool:
        s = set(self.elements)
        return all(a.meet(b) in s and a.join(b) in s for a, b in combinations(self.elements, 2))

    def index(self, c: Congruence) -> int:
        return self.elements.index(c)

    def is_chain(self) -> bool:
        return bool((self.leq | self.leq.T).all())


def all_congruences(q: QuandleTable) -> CongruenceLattice:
    """Full congruence lattice of a connected quandle."""
    if q.n > MAX_LATTICE_SIZE:
        raise CapacityError(f"congruence lattice capped at n <= {MAX_LATTICE_SIZE}")
    if not q.connected:
        if q.n > 64:
            raise CapacityError("non-connected quandles are handled up to n = 64")
        return all_congruences_exhaustive(q)
    n = q.n
    if n == 1:
        return CongruenceLattice(q, [Congruence.bottom(1)])
    stab = q.lmlt.stabilizer(0)
    lab = stab.orbit_labels()
    reps = [int(y) for y in np.unique(lab) if y != 0]
    found = {Congruence.bottom(n)}
    for y in reps:
        found.add(principal_congruence(q, 0, y))
    return CongruenceLattice(q, _join_closure(found))


def all_congruences_exhaustive(q: QuandleTable) -> CongruenceLattice:
    """Oracle: join closure of Cg(x, y) over all pairs."""
    n = q.n
    found = {Congruence.bottom(n)}
    for x, y in combinations(range(n), 2):
        found.add(principal_congruence(q, x, y))
    return CongruenceLattice(q, _join_closure(found))


def _join_closure(found: set[Congruence]) -> list[Congruence]:
    # every element of the closure is a join of generators, so joining each
    # new element with the generators alone reaches all of them
    gens = list(found)
    items = list(gens)
    seen = set(items)
    i = 0
    while i < len(items):
        for g in gens:
            c = items[i].join(g)
            if c not in seen:
                seen.add(c)
                items.append(c)
        i += 1
    return items


# ---------------------------------------------------------------------------
# group operators
# ---------------------------------------------------------------------------


def _check_normal(q: QuandleTable, N: PermGroup) -> None:
    if not N.is_normal_in(q.lmlt):
        raise ValueError("subgroup is not normal in LMlt")


def dis_alpha(q: QuandleTable, alpha: Congruence) -> PermGroup:
    rep = alpha.reps
    moved = np.nonzero(rep != np.arange(q.n))[0]
    if moved.size == 0:
        return PermGroup.trivial(q.n)
    inv_rep = inverse_many(q.star[rep[moved]])
    gens = np.take_along_axis(q.star[moved], inv_rep, axis=1)  # L_x after L_rep^-1
    gens = np.unique(gens.astype(np.int32), axis=0)
    gens = gens[(gens != np.arange(q.n)).any(axis=1)]
    return PermGroup(q.n, list(gens))


def dis_sup_alpha(q: QuandleTable, alpha: Congruence) -> PermGroup:
    """Displacements preserving each block of alpha."""
    E = q.dis.elements
    keep = (alpha.labels[E] == alpha.labels[None, :]).all(axis=1)
    return PermGroup.from_elements(q.n, E[keep])


def orbit_cong(q: QuandleTable, N: PermGroup, *, check: bool = True) -> Congruence:
    if check:
        _check_normal(q, N)
    return Congruence(N.orbit_labels())


def kernel_cong(q: QuandleTable, N: PermGroup, *, check: bool = True) -> Congruence:
    if check:
        _check_normal(q, N)
    n = q.n
    d = np.take_along_axis(q.star, np.broadcast_to(inverse_perm(q.star[0]), (n, n)), axis=1).astype(np.int32)
    d_inv = inverse_many(d)
    src, dst = [], []
    for x in range(n):
        # L_x L_y^-1 = d_x d_y^-1 for y > x
        ys = np.arange(x + 1, n)
        if ys.size == 0:
            break
        prods = d[x][d_inv[ys]]
        ok = N.contains_many(prods)
        src.append(np.full(int(ok.sum()), x))
        dst.append(ys[ok])
    if src:
        s, t = np.concatenate(src), np.concatenate(dst)
    else:
        s = t = np.zeros(0, dtype=IDX)
    return Congruence(_components(n, np.concatenate([np.arange(n), s]), np.concatenate([np.arange(n), t])))


def _require_faithful(q: QuandleTable) -> None:
    if not q.faithful:
        raise QuandleError("the Dis-criterion for abelian and central congruences needs a faithful quandle")


def is_abelian_cong(q: QuandleTable, alpha: Congruence) -> bool:
    _require_faithful(q)
    return dis_alpha(q, alpha).is_abelian()


def _commutes_with(gs, hs) -> bool:
    return all(np.array_equal(a[b], b[a]) for a in gs for b in hs)


def is_central_cong(q: QuandleTable, alpha: Congruence) -> bool:
    _require_faithful(q)
    return _commutes_with(dis_alpha(q, alpha).small_gens, q.dis.small_gens)


def gamma(q: QuandleTable) -> Congruence:
    if not q.connected:
        raise QuandleError("gamma is defined here for connected quandles")
    return orbit_cong(q, q.dis.derived_subgroup(), check=False)


def zeta(q: QuandleTable) -> Congruence:
    if not q.latin:
        raise QuandleError("zeta via the center of Dis needs a latin quandle")
    return orbit_cong(q, q.dis.center(), check=False)


def is_solvable(q: QuandleTable) -> bool:
    return q.dis.is_solvable()


def is_nilpotent(q: QuandleTable) -> bool:
    return q.dis.is_nilpotent()


def sigma_relation(q: QuandleTable) -> Congruence:
    """x ~ y iff the stabilizers of x and y in Dis coincide."""
    if q.dis.order > 10**6:
        raise CapacityError("sigma_relation is capped at |Dis| <= 10^6")
    E = q.dis.elements
    fixed = E == np.arange(q.n)[None, :]
    _, lab = np.unique(fixed.T, axis=0, return_inverse=True)
    return Congruence(lab.ravel())


# ---------------------------------------------------------------------------
# lattice predicates and shape
# ---------------------------------------------------------------------------


def is_subdirectly_irreducible(L: CongruenceLattice) -> bool:
    return len(L.elements) > 1 and len(L.minimal) == 1


def decomposition_pair(L: CongruenceLattice):
    """A pair (a, b) of proper nontrivial congruences with a ^ b = 0 and a o b total."""
    inner = [c for c in L.elements if not c.is_bottom and not c.is_top]
    for a, b in combinations(inner, 2):
        if a.meet(b).is_bottom and a.composition_is_total(b):
            return a, b
    return None


def is_directly_decomposable(q: QuandleTable, L: CongruenceLattice | None = None) -> bool:
    L = all_congruences(q) if L is None else L
    return decomposition_pair(L) is not None


@dataclass(frozen=True)
class LatticeShape:
    tag: str
    quotient_sizes: tuple[int, ...]

    def __str__(self):
        sizes = ",".join(str(s) for s in self.quotient_sizes)
        return f"{self.tag}[{sizes}]"


def lattice_shape(L: CongruenceLattice) -> LatticeShape:
    """``chain-k``, ``diamond-3.1`` or ``other``, with |Q/a| for every element."""
    sizes = tuple(c.num_blocks for c in L.elements)
    if L.is_chain():
        return LatticeShape(f"chain-{len(L)}", sizes)
    if len(L) == 5:
        atoms = L.minimal
        coatoms = L.maximal
        n = L.quandle.n
        if len(atoms) == 2 and len(coatoms) == 1:
            nu = coatoms[0]
            if all(a <= nu for a in atoms) and nu == atoms[0].join(atoms[1]):
                atom_sizes = sorted(a.num_blocks for a in atoms)
                if atom_sizes == sorted([16, n // 4]) and nu.num_blocks == 4 and n % 16 == 0:
                    return LatticeShape("diamond-3.1", sizes)
    return LatticeShape("other", sizes)


def lattice_to_dot(L: CongruenceLattice) -> str:
    lines = ["digraph congruences {", "  rankdir=BT;"]
    for i, c in enumerate(L.elements):
        size = int(c.block_sizes.max())
        lines.append(f'  c{i} [label="|Q/α| = {c.num_blocks}, blocks = {size}"];')
    for i, j in L.hasse:
        lines.append(f"  c{i} -> c{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Quandle tables: construction, axiom checks, predicates and table files.

A quandle on ``{0..n-1}`` is stored as its star table, ``star[x, y] = x*y``.
Row ``x`` is the left translation ``L_x``; the left division table is kept
alongside so that ``x \\ y`` is a lookup.

Table files look like this::

    # optional comments, only before the header
    quandle 3
    0 2 1
    2 1 0
    1 0 2
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .grpmodel import FiniteGroup, GroupMap
from .linfq import FqMatrix, SingularMatrixError
from .linfq import rank as matrix_rank
from .permgrp import PermGroup, inverse_perm

IDX = np.int64


class QuandleError(ValueError):
    """Table does not satisfy a required axiom."""


class TableFormatError(ValueError):
    """Malformed table file; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CosetError(ValueError):
    """Coset construction refused; ``witness`` is an h in H with f(h) != h."""

    def __init__(self, witness: int):
        super().__init__(f"subgroup is not inside Fix(f): element {witness} moves")
        self.witness = witness


def _labels_from_edges(n: int, src, dst) -> np.ndarray:
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, lab = connected_components(graph, directed=True, connection="weak")
    return lab


class QuandleTable:
    """Immutable left-quasigroup table; equality is literal table equality."""

    __slots__ = ("n", "star", "ldiv", "__dict__")

    def __init__(self, star, *, check_rows: bool = True):
        s = np.array(star, dtype=IDX)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise QuandleError("star table must be square")
        n = s.shape[0]
        if check_rows:
            if n and (s.min() < 0 or s.max() >= n):
                raise QuandleError("entries out of range")
            srt = np.sort(s, axis=1)
            bad = np.nonzero((srt != np.arange(n)).any(axis=1))[0]
            if bad.size:
                raise QuandleError(f"row {int(bad[0])} not a permutation")
        ldiv = np.empty_like(s)
        rows = np.arange(n)[:, None]
        ldiv[rows, s] = np.arange(n)[None, :]
        s.setflags(write=False)
        ldiv.setflags(write=False)
        self.n = n
        self.star = s
        self.ldiv = ldiv

    # basic ops --------------------------------------------------------------
    def mul(self, x, y):
        return self.star[x, y]

    def div(self, x, y):
        return self.ldiv[x, y]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return isinstance(other, QuandleTable) and self.n == other.n and np.array_equal(self.star, other.star)

    def __hash__(self):
        return hash((self.n, self.star.tobytes()))

    def __repr__(self):
        return f"QuandleTable(n={self.n})"

    # axioms -----------------------------------------------------------------
    def is_idempotent(self) -> bool:
        return bool((np.diagonal(self.star) == np.arange(self.n)).all())

    def is_left_distributive(self) -> bool:
        s = self.star
        n = self.n
        for x in range(n):  # x*(y*z) == (x*y)*(x*z), one x at a time keeps memory at n^2
            lhs = s[x][s]
            rhs = s[s[x][:, None], s[x][None, :]]
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_quandle(self) -> bool:
        return self.is_idempotent() and self.is_left_distributive()

    def require_quandle(self) -> "QuandleTable":
        if not self.is_idempotent():
            raise QuandleError("not idempotent")
        if not self.is_left_distributive():
            raise QuandleError("not left distributive")
        return self

    # predicates -------------------------------------------------------------
    @cached_property
    def latin(self) -> bool:
        srt = np.sort(self.star, axis=0)
        return bool((srt == np.arange(self.n)[:, None]).all())

    @cached_property
    def connected(self) -> bool:
        if self.n <= 1:
            return True
        src = np.repeat(np.arange(self.n), self.n)
        lab = _labels_from_edges(self.n, src, self.star.T.ravel())
        return bool(lab.max() == 0)

    @cached_property
    def faithful(self) -> bool:
        return np.unique(self.star, axis=0).shape[0] == self.n

    # groups -----------------------------------------------------------------
    @cached_property
    def lmlt(self) -> PermGroup:
        return PermGroup(self.n, list(self._distinct_rows()))

    @cached_property
    def dis(self) -> PermGroup:
        return PermGroup(self.n, list(self.dis_generators()))

    def _distinct_rows(self) -> np.ndarray:
        rows = np.unique(self.star, axis=0).astype(np.int32)
        return rows if rows.size else np.zeros((1, 0), dtype=np.int32)

    def dis_generators(self, base: int = 0) -> np.ndarray:
        """L_x L_base^-1 for all x (identity rows dropped)."""
        inv0 = inverse_perm(self.star[base])
        gens = self.star[:, inv0].astype(np.int32)
        keep = (gens != np.arange(self.n)).any(axis=1)
        gens = np.unique(gens[keep], axis=0)
        return gens

    def cayley_kernel(self) -> np.ndarray:
        """Block labels of x ~ y iff L_x = L_y."""
        _, lab = np.unique(self.star, axis=0, return_inverse=True)
        return _canonical_labels(lab.ravel())

    def orbit_labels(self) -> np.ndarray:
        src = np.repeat(np.arange(self.n), self.n)
        return _canonical_labels(_labels_from_edges(self.n, src, self.star.T.ravel()))

    def left_orders(self) -> np.ndarray:
        """Order of every left translation."""
        from .permgrp import perm_order

        return np.array([perm_order(r) for r in self.star], dtype=IDX)

    def subquandle(self, seeds) -> np.ndarray:
        """Sorted elements of the subquandle generated by ``seeds``."""
        inside = np.zeros(self.n, dtype=bool)
        seeds = np.unique(np.asarray(list(seeds), dtype=IDX))
        inside[seeds] = True
        while True:
            members = np.nonzero(inside)[0]
            grid = np.concatenate(
                [self.star[np.ix_(members, members)].ravel(), self.ldiv[np.ix_(members, members)].ravel()]
            )
            new = np.zeros(self.n, dtype=bool)
            new[grid] = True
            new &= ~inside
            if not new.any():
                return members
            inside |= new

    def relabel(self, perm) -> "QuandleTable":
        """Image of the table under the bijection ``x -> perm[x]``."""
        perm = np.asarray(perm, dtype=IDX)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(self.n)
        return QuandleTable(perm[self.star[np.ix_(inv, inv)]])


def _canonical_labels(lab) -> np.ndarray:
    """Relabel blocks 0,1,2,... in order of first appearance."""
    lab = np.asarray(lab)
    _, first, inv = np.unique(lab, return_index=True, return_inverse=True)
    order = np.argsort(first)
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return rank[inv.ravel()].astype(IDX)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def trivial_quandle(n: int) -> QuandleTable:
    return QuandleTable(np.tile(np.arange(n), (n, 1)))


def affine(f, modulus: int | None = None, dim: int | None = None) -> QuandleTable:
    """Affine quandle on Z_m^t with ``x*y = (I - f)x + f y``.

    ``f`` may be an ``FqMatrix`` (modulus taken from it), an integer matrix
    with an explicit ``modulus`` (for rings like Z_4), or an integer scalar
    acting on Z_m. Elements are coded as ``sum x_i m**i``.
    """
    if isinstance(f, FqMatrix):
        m, mat = f.p, f.entries.astype(IDX)
    else:
        if modulus is None:
            raise ValueError("modulus is required for a plain integer matrix")
        m = modulus
        mat = np.atleast_2d(np.asarray(f, dtype=IDX)) % m
        if dim is not None and mat.shape == (1, 1) and dim > 1:
            mat = mat[0, 0] * np.eye(dim, dtype=IDX)
    t = mat.shape[0]
    size = m**t
    weights = m ** np.arange(t, dtype=IDX)
    digits = (np.arange(size, dtype=IDX)[:, None] // weights[None, :]) % m
    fy = (digits @ mat.T) % m
    codes_fy = fy @ weights
    if np.unique(codes_fy).size != size:
        if isinstance(f, FqMatrix):
            raise SingularMatrixError(matrix_rank(f), t)
        raise QuandleError(f"f is not invertible over Z_{m}")
    gx = (digits - fy) % m  # (I - f) x
    star = ((gx[:, None, :] + fy[None, :, :]) % m) @ weights
    return QuandleTable(star)


@dataclass(frozen=True)
class CosetSpec:
    """Data for a coset quandle on G/H twisted by f."""

    group: FiniteGroup
    subgroup: np.ndarray
    automorphism: np.ndarray  # image array of f

    @classmethod
    def make(cls, G: FiniteGroup, H, f) -> "CosetSpec":
        table = f.table if isinstance(f, GroupMap) else np.asarray(f, dtype=IDX)
        return cls(G, np.unique(np.asarray(H, dtype=IDX)), table)

    @cached_property
    def coset_ids(self) -> np.ndarray:
        return self.group.left_coset_labels(self.subgroup)

    @cached_property
    def representatives(self) -> np.ndarray:
        cid = self.coset_ids
        reps = np.full(int(cid.max()) + 1, -1, dtype=IDX)
        reps[cid[::-1]] = self.group.elements[::-1]
        return reps


def coset_quandle(G: FiniteGroup | CosetSpec, H=None, f=None) -> QuandleTable:
    """Quandle on left cosets with ``xH * yH = x f(x^-1 y) H``."""
    spec = G if isinstance(G, CosetSpec) else CosetSpec.make(G, H, f)
    grp, fmap, Hs = spec.group, spec.automorphism, spec.subgroup
    moved = Hs[fmap[Hs] != Hs]
    if moved.size:
        raise CosetError(int(moved[0]))
    reps = spec.representatives
    cid = spec.coset_ids
    rinv = grp.inv(reps)
    quot = grp.mul(rinv[:, None], reps[None, :])  # r_i^-1 r_j
    star = cid[grp.mul(reps[:, None], fmap[quot])]
    return QuandleTable(star)


def direct_product(q1: QuandleTable, q2: QuandleTable) -> QuandleTable:
    """Componentwise product; element ``a + n1 * b`` is the pair (a, b)."""
    n1, n2 = q1.n, q2.n
    a = np.arange(n1 * n2) % n1
    b = np.arange(n1 * n2) // n1
    star = q1.star[a[:, None], a[None, :]] + n1 * q2.star[b[:, None], b[None, :]]
    return QuandleTable(star)


def is_compatible(q: QuandleTable, labels) -> bool:
    """Whether a partition is a congruence (compatible with * and \\)."""
    lab = np.asarray(labels, dtype=IDX)
    n = q.n
    reps = np.full(int(lab.max()) + 1, -1, dtype=IDX)
    reps[lab[::-1]] = np.arange(n)[::-1]
    rx = reps[lab]  # representative of the block of each element
    for tab in (q.star, q.ldiv):
        blk = lab[tab]
        # changing the left argument within a block, then the right one
        if not (blk == blk[rx, :]).all() or not (blk == blk[:, rx]).all():
            return False
    return True


def quotient(q: QuandleTable, labels) -> QuandleTable:
    """Quotient table on blocks; block ids must be 0..k-1."""
    lab = np.asarray(labels.labels if hasattr(labels, "labels") else labels, dtype=IDX)
    if not is_compatible(q, lab):
        raise QuandleError("partition is not compatible with the operations")
    reps = np.full(int(lab.max()) + 1, -1, dtype=IDX)
    reps[lab[::-1]] = np.arange(q.n)[::-1]
    return QuandleTable(lab[q.star[np.ix_(reps, reps)]])


# ---------------------------------------------------------------------------
# table files
# ---------------------------------------------------------------------------


def serialize(q: QuandleTable) -> str:
    lines = [f"quandle {q.n}"]
    lines.extend(" ".join(str(int(v)) for v in row) for row in q.star)
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> QuandleTable:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    i = 0
    while i < len(lines) and (lines[i].startswith("#") or not lines[i].strip()):
        i += 1
    if i == len(lines):
        raise TableFormatError("missing header", i + 1)
    head = lines[i].split()
    if len(head) != 2 or head[0] != "quandle" or not head[1].isdigit():
        raise TableFormatError("expected header 'quandle <n>'", i + 1)
    n = int(head[1])
    body = lines[i + 1 :]
    if len(body) != n:
        raise TableFormatError(f"header says {n} rows but found {len(body)}", i + 1)
    rows = []
    for r, line in enumerate(body):
        lineno = i + 2 + r
        if line.lstrip().startswith("#"):
            raise TableFormatError("comments are only allowed before the header", lineno)
        try:
            vals = [int(tok) for tok in line.split()]
        except ValueError:
            raise TableFormatError(f"row {r} has a non-integer entry", lineno) from None
        if len(vals) != n:
            raise TableFormatError(f"row {r} has {len(vals)} entries, header says {n}", lineno)
        if sorted(vals) != list(range(n)):
            raise TableFormatError(f"row {r} not a permutation", lineno)
        rows.append(vals)
    return QuandleTable(np.array(rows, dtype=IDX).reshape(n, n))


def read_table(path) -> QuandleTable:
    with open(path, encoding="utf-8") as fh:
        return deserialize(fh.read())


def write_table(q: QuandleTable, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize(q))


# module-level conveniences mirroring the method names
def lmlt(q: QuandleTable) -> PermGroup:
    return q.lmlt


def dis(q: QuandleTable) -> PermGroup:
    return q.dis


def cayley_kernel(q: QuandleTable) -> np.ndarray:
    return q.cayley_kernel()


def is_latin(q: QuandleTable) -> bool:
    return q.latin


def is_connected(q: QuandleTable) -> bool:
    return q.connected


def is_faithful(q: QuandleTable) -> bool:
    return q.faithful

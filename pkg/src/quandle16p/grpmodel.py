"""Structured finite groups with integer-coded elements.

Every group here numbers its elements ``0 .. order-1`` and exposes a
vectorized ``mul``/``inv`` over numpy index arrays. Three shapes cover
everything the pipeline needs:

* ``TableGroup``: an explicit multiplication table (small groups, quotients).
* ``SemidirectProduct``: ``Z_p^t x| K`` with ``(v1,k1)(v2,k2) = (v1 + rho_k1 v2, k1 k2)``.
  The code of ``(v, k)`` is ``vcode + p**t * k`` with ``vcode = sum v_i p**i``.
* ``DirectProduct``: code ``a + |A| * b``.

Homomorphisms are ``GroupMap`` objects holding generator images and the
full image array. ``extend_map`` builds one from generator images by walking
a breadth-first Cayley tree and then certifies it edge by edge.

Relator words are parsed by ``parse_word``. The syntax covers symbols,
``^k`` and unicode superscripts, parentheses and commutators ``[u,v]``,
which expand to ``u^-1 v^-1 u v``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linfq import CapacityError, FqMatrix, is_prime
from .permgrp import PermGroup

IDX = np.int64


class HomomorphismError(ValueError):
    """Generator images do not define a homomorphism (or bijection)."""


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------


class FiniteGroup:
    """Base class; subclasses provide ``order``, ``identity``, ``mul``, ``inv``."""

    order: int
    identity: int
    generators: tuple[int, ...]
    tag: str = "group"
    name: str = ""

    def mul(self, a, b):  # pragma: no cover - abstract
        raise NotImplementedError

    def inv(self, a):  # pragma: no cover - abstract
        raise NotImplementedError

    # derived helpers --------------------------------------------------------
    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=IDX)

    def power(self, a, k: int):
        a = np.asarray(a, dtype=IDX)
        if k < 0:
            a, k = self.inv(a), -k
        result = np.full(a.shape, self.identity, dtype=IDX)
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def conj(self, g, h):
        """g h g^-1."""
        return self.mul(self.mul(g, h), self.inv(g))

    def commutator(self, a, b):
        """a^-1 b^-1 a b."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    @cached_property
    def element_orders(self) -> np.ndarray:
        x = self.elements.copy()
        orders = np.ones(self.order, dtype=IDX)
        done = x == self.identity
        k = 1
        while not done.all():
            k += 1
            x = self.mul(x, self.elements)
            newly = (x == self.identity) & ~done
            orders[newly] = k
            done |= newly
        orders[self.identity] = 1
        return orders

    @cached_property
    def table(self) -> np.ndarray:
        if self.order > 6000:
            raise CapacityError(f"multiplication table of a group of order {self.order}")
        e = self.elements
        return self.mul(e[:, None], e[None, :])

    def subgroup_generated(self, gens) -> np.ndarray:
        """Sorted element indices of the subgroup generated by ``gens``."""
        gens = np.unique(np.asarray(list(gens), dtype=IDX))
        seen = np.zeros(self.order, dtype=bool)
        seen[self.identity] = True
        frontier = np.array([self.identity], dtype=IDX)
        while frontier.size:
            prod = self.mul(frontier[:, None], gens[None, :]).ravel()
            prod = np.unique(prod)
            new = prod[~seen[prod]]
            seen[new] = True
            frontier = new
        return np.nonzero(seen)[0]

    def generates(self, gens) -> bool:
        return self.subgroup_generated(gens).size == self.order

    def center(self) -> np.ndarray:
        e = self.elements
        keep = np.ones(self.order, dtype=bool)
        for g in self.generators:
            keep &= self.mul(e, g) == self.mul(g, e)
        return np.nonzero(keep)[0]

    def is_abelian(self) -> bool:
        g = np.asarray(self.generators, dtype=IDX)
        return bool((self.mul(g[:, None], g[None, :]) == self.mul(g[None, :], g[:, None])).all())

    def regular_perms(self, elems=None) -> np.ndarray:
        """Left regular permutations ``h -> g h`` for the given elements."""
        elems = self.elements if elems is None else np.asarray(elems, dtype=IDX)
        return self.mul(elems[:, None], self.elements[None, :]).astype(np.int32)

    @cached_property
    def perm_group(self) -> PermGroup:
        """This group in its left regular representation."""
        gens = self.regular_perms(np.asarray(self.generators, dtype=IDX))
        return PermGroup(self.order, list(gens))

    def perm_subgroup(self, elems) -> PermGroup:
        """Subgroup (given by elements) as a regular-representation PermGroup."""
        gens = _few_generators(self, elems)
        return PermGroup(self.order, list(self.regular_perms(gens)))

    def perm_to_elements(self, P: PermGroup) -> np.ndarray:
        """Element indices of a subgroup given in the regular representation."""
        return np.sort(P.elements[:, self.identity].astype(IDX))

    def lower_central_series(self) -> list[np.ndarray]:
        """Element sets of G = g0 > g1 = [G,G] > g2 = [g1,G] > ..."""
        return [self.perm_to_elements(P) for P in self.perm_group.lower_central_series()]

    def derived_series(self) -> list[np.ndarray]:
        return [self.perm_to_elements(P) for P in self.perm_group.derived_series()]

    def is_subgroup(self, elems) -> bool:
        elems = np.asarray(elems, dtype=IDX)
        mask = np.zeros(self.order, dtype=bool)
        mask[elems] = True
        if not mask[self.identity]:
            return False
        prod = self.mul(elems[:, None], elems[None, :]).ravel()
        return bool(mask[prod].all() and mask[self.inv(elems)].all())

    def is_normal(self, elems) -> bool:
        elems = np.asarray(elems, dtype=IDX)
        mask = np.zeros(self.order, dtype=bool)
        mask[elems] = True
        return all(mask[self.conj(g, elems)].all() for g in self.generators)

    def left_coset_labels(self, H) -> np.ndarray:
        """Label of the coset gH for every g (labels are 0..index-1, first-seen order)."""
        H = np.asarray(H, dtype=IDX)
        e = self.elements
        reps = self.mul(e[:, None], H[None, :]).min(axis=1)
        _, first, lab = np.unique(reps, return_index=True, return_inverse=True)
        # renumber so that labels follow the smallest member of each coset
        order = np.argsort(first)
        relabel = np.empty_like(order)
        relabel[order] = np.arange(order.size)
        return relabel[lab]

    def quotient(self, N) -> tuple["TableGroup", np.ndarray]:
        """G/N as a table group, plus the projection array."""
        if not self.is_subgroup(N) or not self.is_normal(N):
            raise ValueError("quotient needs a normal subgroup")
        lab = self.left_coset_labels(N)
        k = int(lab.max()) + 1
        reps = np.zeros(k, dtype=IDX)
        reps[lab[::-1]] = self.elements[::-1]
        table = lab[self.mul(reps[:, None], reps[None, :])]
        gens = tuple(sorted(set(int(lab[g]) for g in self.generators)))
        Q = TableGroup(table, generators=gens, name=f"{self.name}/N")
        return Q, lab


def _few_generators(G: FiniteGroup, elems) -> np.ndarray:
    elems = np.asarray(elems, dtype=IDX)
    chosen: list[int] = []
    have = np.array([G.identity], dtype=IDX)
    inside = np.zeros(G.order, dtype=bool)
    inside[have] = True
    for x in elems:
        if not inside[x]:
            chosen.append(int(x))
            have = G.subgroup_generated(chosen)
            inside[:] = False
            inside[have] = True
    return np.asarray(chosen if chosen else [G.identity], dtype=IDX)


class TableGroup(FiniteGroup):
    """Group given by a Cayley table ``table[a, b] = a*b``."""

    tag = "table"

    def __init__(self, table, generators=None, name: str = ""):
        t = np.asarray(table, dtype=IDX)
        n = t.shape[0]
        if t.shape != (n, n):
            raise ValueError("table must be square")
        ids = [e for e in range(n) if np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))]
        if len(ids) != 1:
            raise ValueError("table has no two-sided identity")
        self._t = t
        self.order = n
        self.identity = ids[0]
        pos = np.argwhere(t == self.identity)
        inv = np.full(n, -1, dtype=IDX)
        inv[pos[:, 0]] = pos[:, 1]
        if (inv < 0).any():
            raise ValueError("table lacks inverses")
        self._inv = inv
        if generators is None:
            generators = tuple(int(x) for x in _few_generators(self, np.arange(n)))
        self.generators = tuple(int(g) for g in generators)
        self.name = name

    def mul(self, a, b):
        return self._t[np.asarray(a, dtype=IDX), np.asarray(b, dtype=IDX)]

    def inv(self, a):
        return self._inv[np.asarray(a, dtype=IDX)]

    @classmethod
    def from_perm_group(cls, P: PermGroup, name: str = "") -> tuple["TableGroup", np.ndarray]:
        """Table of a permutation group; returns the group and its element array."""
        E = P.elements
        m = E.shape[0]
        if m > 6000:
            raise CapacityError(f"table of a permutation group of order {m}")
        table = np.empty((m, m), dtype=IDX)
        for a in range(m):
            table[a] = P.element_index(E[a][E])
        gens = tuple(int(i) for i in P.element_index(np.stack(P.small_gens))) if P.small_gens else (0,)
        return cls(table, generators=gens, name=name), E


class SemidirectProduct(FiniteGroup):
    """``Z_p^t x|_rho K`` with rho given on every element of K."""

    tag = "semidirect"

    def __init__(self, t: int, p: int, K: FiniteGroup, rho, *, check: bool = True, name: str = ""):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.t, self.p, self.K = t, p, K
        mats = np.asarray([r.entries if isinstance(r, FqMatrix) else r for r in rho], dtype=IDX) % p
        if mats.shape != (K.order, t, t):
            raise ValueError("rho must list one t x t matrix per element of K")
        self.rho = mats
        self.vsize = p**t
        self.order = self.vsize * K.order
        self.identity = self.vsize * K.identity
        self._weights = p ** np.arange(t, dtype=IDX)
        self._digits = (np.arange(self.vsize, dtype=IDX)[:, None] // self._weights[None, :]) % p
        # act[k, v] = code of rho_k v
        self._act = ((self._digits @ mats.transpose(0, 2, 1)) % p) @ self._weights
        self._neg = ((-self._digits) % p) @ self._weights
        if check:
            self._check_rho()
        basis = [self.embed_vector(np.eye(t, dtype=IDX)[i]) for i in range(t)]
        self.generators = tuple(int(self.vsize * k) for k in K.generators) + tuple(int(b) for b in basis)
        self.name = name

    def _check_rho(self) -> None:
        Kt = self.K.table
        lhs = self.rho[Kt]  # rho_{k1 k2}
        rhs = np.einsum("aij,bjk->abik", self.rho, self.rho) % self.p
        bad = np.argwhere((lhs != rhs).any(axis=(2, 3)))
        if bad.size:
            k1, k2 = bad[0]
            raise ValueError(f"rho is not multiplicative at ({k1}, {k2})")

    # coding -----------------------------------------------------------------
    def encode(self, v, k):
        v = np.asarray(v, dtype=IDX) % self.p
        return (v @ self._weights) + self.vsize * np.asarray(k, dtype=IDX)

    def decode(self, g):
        g = np.asarray(g, dtype=IDX)
        return self._digits[g % self.vsize], g // self.vsize

    def embed_vector(self, v):
        return self.encode(v, self.K.identity)

    def vadd(self, u, v):
        return ((self._digits[u] + self._digits[v]) % self.p) @ self._weights

    def mul(self, a, b):
        a = np.asarray(a, dtype=IDX)
        b = np.asarray(b, dtype=IDX)
        va, ka = a % self.vsize, a // self.vsize
        vb, kb = b % self.vsize, b // self.vsize
        v = self.vadd(va, self._act[ka, vb])
        return v + self.vsize * self.K.mul(ka, kb)

    def inv(self, a):
        a = np.asarray(a, dtype=IDX)
        va, ka = a % self.vsize, a // self.vsize
        ki = self.K.inv(ka)
        # (v,k)^-1 = (-rho_{k^-1} v, k^-1)
        return self._neg[self._act[ki, va]] + self.vsize * ki

    @property
    def vector_part(self) -> np.ndarray:
        return self.vsize * self.K.identity + np.arange(self.vsize, dtype=IDX)


class DirectProduct(FiniteGroup):
    tag = "direct"

    def __init__(self, A: FiniteGroup, B: FiniteGroup, name: str = ""):
        self.A, self.B = A, B
        self.order = A.order * B.order
        self.identity = A.identity + A.order * B.identity
        self.generators = tuple(int(a + A.order * B.identity) for a in A.generators) + tuple(
            int(A.identity + A.order * b) for b in B.generators
        )
        self.name = name

    def encode(self, a, b):
        return np.asarray(a, dtype=IDX) + self.A.order * np.asarray(b, dtype=IDX)

    def decode(self, g):
        g = np.asarray(g, dtype=IDX)
        return g % self.A.order, g // self.A.order

    def mul(self, x, y):
        xa, xb = self.decode(x)
        ya, yb = self.decode(y)
        return self.encode(self.A.mul(xa, ya), self.B.mul(xb, yb))

    def inv(self, x):
        xa, xb = self.decode(x)
        return self.encode(self.A.inv(xa), self.B.inv(xb))


def cyclic_group(n: int) -> TableGroup:
    e = np.arange(n)
    return TableGroup((e[:, None] + e[None, :]) % n, generators=(1 % n,), name=f"Z{n}")


def elementary_abelian(t: int, p: int) -> SemidirectProduct:
    trivial = TableGroup(np.zeros((1, 1), dtype=IDX), generators=(0,), name="1")
    return SemidirectProduct(t, p, trivial, [np.eye(t, dtype=IDX)], name=f"Z{p}^{t}")


def semidirect(t: int, p: int, K: FiniteGroup, rho) -> SemidirectProduct:
    return SemidirectProduct(t, p, K, rho)


def direct_product(A: FiniteGroup, B: FiniteGroup) -> DirectProduct:
    return DirectProduct(A, B)


def rho_from_generators(K: FiniteGroup, gen_mats: dict[int, FqMatrix] | list, p: int) -> list[np.ndarray]:
    """Extend matrices given on K's generators to every element by BFS words.

    The result is checked for multiplicativity when it is fed to
    ``SemidirectProduct``.
    """
    if isinstance(gen_mats, dict):
        items = list(gen_mats.items())
    else:
        items = list(zip(K.generators, gen_mats))
    t = (items[0][1].entries if isinstance(items[0][1], FqMatrix) else np.asarray(items[0][1])).shape[0]
    out: list[np.ndarray | None] = [None] * K.order
    out[K.identity] = np.eye(t, dtype=IDX)
    frontier = [K.identity]
    while frontier:
        nxt = []
        for k in frontier:
            for g, m in items:
                m = m.entries if isinstance(m, FqMatrix) else np.asarray(m, dtype=IDX)
                h = int(K.mul(k, g))
                if out[h] is None:
                    out[h] = (out[k] @ m) % p
                    nxt.append(h)
        frontier = nxt
    if any(o is None for o in out):
        raise ValueError("matrices are not given on a generating set")
    return out  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# words and relators
# ---------------------------------------------------------------------------

_SUPER = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹⁻", "0123456789-")
_TOKEN = re.compile(r"\s*(?:(?P<sym>[A-Za-z](?:_\d+)?)|(?P<pow>\^\(-?\d+\)|\^-?\d+|[⁻⁰¹²³⁴⁵⁶⁷⁸⁹]+)|(?P<punct>[()\[\],*·]))")


@dataclass(frozen=True)
class Word:
    """A group word as a tuple of (symbol, +1/-1) letters."""

    letters: tuple[tuple[str, int], ...]

    def inverse(self) -> "Word":
        return Word(tuple((s, -e) for s, e in reversed(self.letters)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def power(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    @property
    def symbols(self) -> frozenset[str]:
        return frozenset(s for s, _ in self.letters)

    def evaluate(self, ops, assignment: dict):
        """Evaluate with a group-ops object (``mul``, ``inv``, ``identity``)."""
        acc = None
        cache_inv: dict[str, object] = {}
        for s, e in self.letters:
            if e > 0:
                x = assignment[s]
            else:
                if s not in cache_inv:
                    cache_inv[s] = ops.inv(assignment[s])
                x = cache_inv[s]
            acc = x if acc is None else ops.mul(acc, x)
        if acc is None:
            return ops.identity_like(assignment)
        return acc

    def __str__(self):
        return "".join(s if e > 0 else f"{s}^-1" for s, e in self.letters) or "1"


Relator = Word


def parse_word(text: str) -> Word:
    """Parse ``a^2 b a^-1``, ``(cb)^2``, ``[x,y] z^-1``, ``a²ba⁻¹ba`` and similar."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse word at {text[pos:]!r}")
        pos = m.end()
        if m.group("sym"):
            tokens.append(("sym", m.group("sym")))
        elif m.group("pow"):
            raw = m.group("pow").translate(_SUPER).strip("^()")
            tokens.append(("pow", int(raw)))
        else:
            tokens.append(("punct", m.group("punct")))
    word, i = _parse_seq(tokens, 0)
    if i != len(tokens):
        raise ValueError(f"unexpected token {tokens[i]!r} in {text!r}")
    return word


def _parse_seq(tokens, i):
    out = Word(())
    while i < len(tokens):
        kind, val = tokens[i]
        if kind == "punct" and val in ")],":
            break
        if kind == "punct" and val in "*·":
            i += 1
            continue
        atom, i = _parse_atom(tokens, i)
        while i < len(tokens) and tokens[i][0] == "pow":
            atom = atom.power(tokens[i][1])
            i += 1
        out = out * atom
    return out, i


def _parse_atom(tokens, i):
    kind, val = tokens[i]
    if kind == "sym":
        return Word(((val, 1),)), i + 1
    if val == "(":
        w, i = _parse_seq(tokens, i + 1)
        if i >= len(tokens) or tokens[i] != ("punct", ")"):
            raise ValueError("unbalanced parenthesis")
        return w, i + 1
    if val == "[":
        u, i = _parse_seq(tokens, i + 1)
        if i >= len(tokens) or tokens[i] != ("punct", ","):
            raise ValueError("commutator needs a comma")
        v, i = _parse_seq(tokens, i + 1)
        if i >= len(tokens) or tokens[i] != ("punct", "]"):
            raise ValueError("unbalanced commutator bracket")
        return u.inverse() * v.inverse() * u * v, i + 1
    raise ValueError(f"unexpected token {val!r}")


class GroupOps:
    """Adapter so words can be evaluated on integer-coded group elements."""

    def __init__(self, G: FiniteGroup):
        self.G = G

    def mul(self, a, b):
        return self.G.mul(a, b)

    def inv(self, a):
        return self.G.inv(a)

    def identity_like(self, assignment):
        shapes = [np.shape(v) for v in assignment.values()]
        shape = np.broadcast_shapes(*shapes) if shapes else ()
        return np.full(shape, self.G.identity, dtype=IDX)


class MatrixOps:
    """Words evaluated on stacks of n x n matrices over GF(p)."""

    def __init__(self, n: int, p: int):
        self.n, self.p = n, p

    def mul(self, a, b):
        return np.matmul(a, b) % self.p

    def inv(self, a):
        return batch_inverse_mod(a, self.p)

    def identity_like(self, assignment):
        shapes = [np.shape(v)[:-2] for v in assignment.values()]
        shape = np.broadcast_shapes(*shapes) if shapes else ()
        return np.broadcast_to(np.eye(self.n, dtype=IDX), shape + (self.n, self.n)).copy()


def batch_inverse_mod(a, p: int) -> np.ndarray:
    """Inverses of a stack of invertible matrices mod p (Gauss-Jordan, vectorized)."""
    a = np.asarray(a, dtype=IDX) % p
    shape = a.shape
    n = shape[-1]
    m = a.reshape(-1, n, n).copy()
    inv = np.broadcast_to(np.eye(n, dtype=IDX), m.shape).copy()
    rows = np.arange(m.shape[0])
    inv_table = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=IDX)
    for c in range(n):
        # pivot: first row >= c with a nonzero entry in column c
        cand = m[:, c:, c] != 0
        if not cand.any(axis=1).all():
            raise ValueError("singular matrix in batch inverse")
        piv = c + cand.argmax(axis=1)
        for arr in (m, inv):
            tmp = arr[rows, c].copy()
            arr[rows, c] = arr[rows, piv]
            arr[rows, piv] = tmp
        scale = inv_table[m[:, c, c]]
        m[:, c] = (m[:, c] * scale[:, None]) % p
        inv[:, c] = (inv[:, c] * scale[:, None]) % p
        for r in range(n):
            if r == c:
                continue
            f = m[:, r, c][:, None]
            m[:, r] = (m[:, r] - f * m[:, c]) % p
            inv[:, r] = (inv[:, r] - f * inv[:, c]) % p
    return inv.reshape(shape)


def realize_presentation(G: FiniteGroup, symbols, relators, *, limit: int = 1, require_generating: bool = True):
    """Search tuples of G satisfying all relators (and generating G).

    Returns the first tuple (``limit == 1``), a list of up to ``limit``
    tuples, or ``None`` when nothing qualifies.
    """
    if G.order > 1000:
        raise CapacityError("realize_presentation is capped at |G| <= 1000")
    symbols = list(symbols)
    words = [parse_word(r) if isinstance(r, str) else r for r in relators]
    ops = GroupOps(G)
    partial = np.zeros((1, 0), dtype=IDX)
    for i, s in enumerate(symbols):
        known = set(symbols[: i + 1])
        active = [w for w in words if s in w.symbols and w.symbols <= known]
        cands = np.arange(G.order, dtype=IDX)
        m = partial.shape[0]
        grid = np.concatenate(
            [np.repeat(partial, cands.size, axis=0), np.tile(cands, m)[:, None]], axis=1
        )
        keep = np.ones(grid.shape[0], dtype=bool)
        assign = {sym: grid[:, j] for j, sym in enumerate(symbols[: i + 1])}
        for w in active:
            keep &= w.evaluate(ops, assign) == G.identity
        partial = grid[keep]
        if partial.shape[0] == 0:
            return None if limit == 1 else []
    found = []
    for row in partial:
        if not require_generating or G.generates(row):
            found.append(tuple(int(x) for x in row))
            if len(found) >= limit:
                break
    if limit == 1:
        return found[0] if found else None
    return found


# ---------------------------------------------------------------------------
# maps
# ---------------------------------------------------------------------------


class GroupMap:
    """Homomorphism given by generator images and a full image array."""

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, gens, images, table: np.ndarray):
        self.domain = domain
        self.codomain = codomain
        self.gens = tuple(int(g) for g in gens)
        self.images = tuple(int(h) for h in images)
        t = np.asarray(table, dtype=IDX).copy()
        t.setflags(write=False)
        self.table = t

    def __call__(self, g):
        return self.table[np.asarray(g, dtype=IDX)]

    @cached_property
    def is_bijective(self) -> bool:
        return self.domain.order == self.codomain.order and np.unique(self.table).size == self.table.size

    @property
    def is_automorphism(self) -> bool:
        return self.domain is self.codomain and self.is_bijective

    def compose(self, other: "GroupMap") -> "GroupMap":
        """self after other."""
        if other.codomain is not self.domain:
            raise ValueError("maps are not composable")
        table = self.table[other.table]
        return GroupMap(other.domain, self.codomain, other.gens, table[list(other.gens)], table)

    def inverse(self) -> "GroupMap":
        if not self.is_bijective:
            raise HomomorphismError("map is not bijective")
        inv = np.empty_like(self.table)
        inv[self.table] = np.arange(self.table.size)
        gens = self.codomain.generators
        return GroupMap(self.codomain, self.domain, gens, inv[list(gens)], inv)

    def order(self) -> int:
        """Order as an automorphism (least k with f^k = id)."""
        if not self.is_automorphism:
            raise HomomorphismError("order is defined for automorphisms")
        x = self.table
        ident = np.arange(self.table.size)
        k = 1
        while not np.array_equal(x, ident):
            x = self.table[x]
            k += 1
        return k

    def conjugate_by(self, h: "GroupMap") -> "GroupMap":
        """h f h^-1."""
        return h.compose(self).compose(h.inverse())

    def __eq__(self, other):
        return isinstance(other, GroupMap) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())


def cayley_tree(G: FiniteGroup, gens) -> tuple[list[np.ndarray], list[np.ndarray], list[np.ndarray]]:
    """BFS layers of the right Cayley graph: (children, parents, generator slots) per layer."""
    gens = np.asarray(gens, dtype=IDX)
    seen = np.zeros(G.order, dtype=bool)
    seen[G.identity] = True
    frontier = np.array([G.identity], dtype=IDX)
    layers_c, layers_p, layers_g = [], [], []
    while frontier.size:
        prod = G.mul(frontier[:, None], gens[None, :])  # (f, k)
        par = np.repeat(frontier, gens.size)
        slot = np.tile(np.arange(gens.size), frontier.size)
        flat = prod.ravel()
        new_mask = ~seen[flat]
        flat, par, slot = flat[new_mask], par[new_mask], slot[new_mask]
        flat, first = np.unique(flat, return_index=True)
        par, slot = par[first], slot[first]
        seen[flat] = True
        if flat.size:
            layers_c.append(flat)
            layers_p.append(par)
            layers_g.append(slot)
        frontier = flat
    if not seen.all():
        raise HomomorphismError("generator tuple does not generate the group")
    return layers_c, layers_p, layers_g


def extend_maps_batch(G: FiniteGroup, gens, images: np.ndarray, codomain: FiniteGroup | None = None, tree=None):
    """Extend many image tuples at once.

    ``images`` has shape (m, k). Returns (tables of shape (m, |G|), ok mask),
    where ``ok`` certifies the homomorphism property on every Cayley edge.
    """
    H = G if codomain is None else codomain
    images = np.asarray(images, dtype=IDX)
    m = images.shape[0]
    if tree is None:
        tree = cayley_tree(G, gens)
    tables = np.empty((m, G.order), dtype=IDX)
    tables[:, G.identity] = H.identity
    for c, par, slot in zip(*tree):
        tables[:, c] = H.mul(tables[:, par], images[:, slot])
    ok = np.ones(m, dtype=bool)
    e = G.elements
    for j, g in enumerate(np.asarray(gens, dtype=IDX)):
        ag = G.mul(e, g)
        ok &= (tables[:, ag] == H.mul(tables, images[:, j : j + 1])).all(axis=1)
    return tables, ok


def extend_map(G: FiniteGroup, gens, images, codomain: FiniteGroup | None = None, *, require_bijective: bool = False) -> GroupMap:
    """Homomorphism from generator images, certified on all Cayley edges.

    For |G| <= 2000 the full multiplication table is also checked.
    """
    H = G if codomain is None else codomain
    gens = [int(g) for g in gens]
    images = [int(h) for h in images]
    if len(gens) != len(images):
        raise ValueError("need one image per generator")
    tree = cayley_tree(G, gens)
    tables, ok = extend_maps_batch(G, gens, np.asarray([images]), H, tree)
    table = tables[0]
    if not ok[0]:
        e = G.elements
        for j, g in enumerate(gens):
            ag = G.mul(e, g)
            bad = np.nonzero(table[ag] != H.mul(table, images[j]))[0]
            if bad.size:
                a = int(bad[0])
                raise HomomorphismError(
                    f"images violate a relation: phi({a}*{g}) != phi({a})*phi({g})"
                )
    if G.order <= 2000:
        e = G.elements
        lhs = table[G.mul(e[:, None], e[None, :])]
        rhs = H.mul(table[:, None], table[None, :])
        if not (lhs == rhs).all():  # pragma: no cover - implied by the edge check
            raise HomomorphismError("table check failed")
    f = GroupMap(G, H, gens, images, table)
    if require_bijective and not f.is_bijective:
        raise HomomorphismError("map is not bijective")
    return f


def identity_map(G: FiniteGroup) -> GroupMap:
    return GroupMap(G, G, G.generators, G.generators, G.elements)


def fix_subgroup(f: GroupMap) -> np.ndarray:
    """Elements fixed by an automorphism, as a sorted index array."""
    fixed = np.nonzero(f.table == f.domain.elements)[0]
    if not f.domain.is_subgroup(fixed):  # pragma: no cover - always a subgroup
        raise AssertionError("fixed points do not form a subgroup")
    return fixed


# ---------------------------------------------------------------------------
# small group isomorphism
# ---------------------------------------------------------------------------


def _class_key(G: FiniteGroup) -> np.ndarray:
    """Per-element invariant: (order, number of square roots, centralizer size)."""
    e = G.elements
    t = G.table
    orders = G.element_orders
    sq = t[e, e]
    roots = np.bincount(sq, minlength=G.order)
    cent = (t == t.T).sum(axis=1)
    return orders * 10**6 + roots * 10**3 + cent


def small_group_iso(G: FiniteGroup, H: FiniteGroup) -> bool:
    """Isomorphism test for groups of order <= 64."""
    if G.order > 64 or H.order > 64:
        raise CapacityError("small_group_iso is capped at order 64")
    if G.order != H.order:
        return False
    kg, kh = _class_key(G), _class_key(H)
    if not np.array_equal(np.sort(kg), np.sort(kh)):
        return False
    if G.is_abelian() != H.is_abelian():
        return False
    gens = list(_few_generators(G, np.argsort(-kg, kind="stable")))
    cand = [np.nonzero(kh == kg[g])[0] for g in gens]
    tree = cayley_tree(G, gens)
    combos = np.array(np.meshgrid(*cand, indexing="ij")).reshape(len(gens), -1).T
    for start in range(0, combos.shape[0], 20000):
        block = combos[start : start + 20000]
        tables, ok = extend_maps_batch(G, gens, block, H, tree)
        if ok.any():
            good = tables[ok]
            srt = np.sort(good, axis=1)
            bij = (srt == np.arange(H.order)).all(axis=1)
            if bij.any():
                return True
    return False


def iter_tuples(*ranges):  # pragma: no cover - tiny helper kept for scripts
    return itertools.product(*ranges)

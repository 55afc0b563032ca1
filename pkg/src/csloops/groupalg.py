"""Structural computations on fully materialized finite groups.

Everything operates on index tables: a group of order n is an (n, n)
multiplication table over element indices 0..n-1 with identity 0.
Subgroups are boolean masks plus a generating set; quotients carry the
coset map, a deterministic section (minimal representative per coset,
identity first), and the induced table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np


class GroupTable:
    """A finite group as a full multiplication table, identity index 0."""

    def __init__(self, mul: np.ndarray, inv: np.ndarray):
        self.mul = mul
        self.inv = inv
        self.order = int(mul.shape[0])
        self.id = 0
        self._conj = None
        self._comm = None

    @classmethod
    def from_mul(cls, mul, check="full") -> "GroupTable":
        mul = np.ascontiguousarray(np.asarray(mul, dtype=np.int32))
        n = mul.shape[0]
        if mul.shape != (n, n):
            raise ValueError("multiplication table must be square")
        inv = np.asarray(mul == 0).argmax(axis=1).astype(np.int32)
        table = cls(mul, inv)
        if check != "none":
            table.check_axioms(assoc=(check == "full"))
        return table

    def check_axioms(self, assoc=True):
        n, mul, inv = self.order, self.mul, self.inv
        idx = np.arange(n, dtype=np.int32)
        if not (np.array_equal(mul[0], idx) and np.array_equal(mul[:, 0], idx)):
            raise ValueError("index 0 is not a two-sided identity")
        if not (np.array_equal(np.sort(mul, axis=1), np.tile(idx, (n, 1)))
                and np.array_equal(np.sort(mul, axis=0), np.tile(idx[:, None], (1, n)))):
            raise ValueError("rows/columns are not permutations")
        if not (np.array_equal(mul[idx, inv], np.zeros(n, dtype=np.int32))
                and np.array_equal(mul[inv, idx], np.zeros(n, dtype=np.int32))):
            raise ValueError("inverse table is wrong")
        if assoc and not self.is_associative():
            raise ValueError("multiplication is not associative")

    def is_associative(self) -> bool:
        """Exhaustive associativity check over all order**3 triples."""
        mul = self.mul
        n = self.order
        step = max(1, (1 << 22) // max(1, n * n))
        for a in range(0, n, step):
            rows = mul[a : a + step]
            if not np.array_equal(mul[rows, :], rows[:, mul]):
                return False
        return True

    @property
    def conj_table(self) -> np.ndarray:
        """conj_table[x, z] = z^-1 x z."""
        if self._conj is None:
            n = np.arange(self.order, dtype=np.int32)
            zx = self.mul[self.inv[None, :], n[:, None]]  # zx[x, z] = z^-1 x
            self._conj = self.mul[zx, n[None, :]]
        return self._conj

    @property
    def comm_table(self) -> np.ndarray:
        """comm_table[x, y] = [x, y] = x^-1 y^-1 x y."""
        if self._comm is None:
            n = np.arange(self.order, dtype=np.int32)
            a = self.mul[self.inv[:, None], self.inv[None, :]]  # x^-1 y^-1
            b = self.mul[a, n[:, None]]
            self._comm = self.mul[b, n[None, :]]
        return self._comm

    def conj(self, x: int, z: int) -> int:
        """z^-1 x z."""
        return int(self.mul[self.mul[self.inv[z], x], z])

    def comm(self, x: int, y: int) -> int:
        """[x, y] = x^-1 y^-1 x y."""
        return int(self.mul[self.mul[self.mul[self.inv[x], self.inv[y]], x], y])

    def power(self, x: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv[x], -k)
        out = 0
        for _ in range(k):
            out = int(self.mul[out, x])
        return out

    def whole(self) -> "Subgroup":
        return Subgroup(self, np.ones(self.order, dtype=bool), _greedy=True)

    def trivial(self) -> "Subgroup":
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        return Subgroup(self, mask, gens=())


class Subgroup:
    """A subgroup as a bitset over element indices plus generators."""

    def __init__(self, parent: GroupTable, mask, gens=None, _greedy=False):
        self.parent = parent
        self.mask = np.asarray(mask, dtype=bool).copy()
        if not self.mask[0]:
            raise ValueError("subgroup must contain the identity")
        elems = np.flatnonzero(self.mask).astype(np.int32)
        sub = parent.mul[np.ix_(elems, elems)]
        if not self.mask[sub].all() or not self.mask[parent.inv[elems]].all():
            raise ValueError("member set is not closed")
        if gens is None or _greedy:
            gens = _greedy_gens(parent, self.mask)
        self.gens = tuple(int(g) for g in gens)
        self._elems = elems

    @property
    def elements(self) -> np.ndarray:
        return self._elems

    @property
    def order(self) -> int:
        return int(self.mask.sum())

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __le__(self, other: "Subgroup") -> bool:
        return bool((~self.mask | other.mask).all())

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and self.parent is other.parent
                and np.array_equal(self.mask, other.mask))

    def __hash__(self):
        return hash((id(self.parent), self.mask.tobytes()))

    def __repr__(self):
        return f"Subgroup(order={self.order}, gens={self.gens})"


def _closure_mask(G: GroupTable, gens) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    for g in gens:
        mask[int(g)] = True
    while True:
        elems = np.flatnonzero(mask)
        prods = G.mul[np.ix_(elems, elems)]
        new = np.zeros(G.order, dtype=bool)
        new[prods.ravel()] = True
        if (new | mask).sum() == mask.sum():
            return mask
        mask |= new


def _greedy_gens(G: GroupTable, mask) -> tuple[int, ...]:
    """Small generating set for a closed member set, by ascending index."""
    gens: list[int] = []
    have = np.zeros(G.order, dtype=bool)
    have[0] = True
    for x in np.flatnonzero(mask):
        if not have[x]:
            gens.append(int(x))
            have = _closure_mask(G, gens)
    return tuple(gens)


def closure(G: GroupTable, gens) -> Subgroup:
    """Smallest subgroup containing the given element indices."""
    gens = tuple(int(g) for g in gens)
    return Subgroup(G, _closure_mask(G, gens), gens=gens if gens else ())


def center(G: GroupTable) -> Subgroup:
    mask = (G.mul == G.mul.T).all(axis=1)
    return Subgroup(G, mask, _greedy=True)


def derived(G: GroupTable) -> Subgroup:
    comms = np.unique(G.comm_table)
    return Subgroup(G, _closure_mask(G, comms), _greedy=True)


def commutator_sub(G: GroupTable, A: Subgroup, B: Subgroup) -> Subgroup:
    comms = np.unique(G.comm_table[np.ix_(A.elements, B.elements)])
    return Subgroup(G, _closure_mask(G, comms), _greedy=True)


def conj(G: GroupTable, x: int, z: int) -> int:
    return G.conj(x, z)


def comm(G: GroupTable, x: int, y: int) -> int:
    return G.comm(x, y)


def is_normal(G: GroupTable, A: Subgroup) -> bool:
    return bool(A.mask[G.conj_table[A.elements, :]].all())


def normal_core(G: GroupTable, A: Subgroup) -> Subgroup:
    """Largest normal subgroup of G contained in A (the intersection of
    all conjugates of A)."""
    mask = A.mask.copy()
    elems = np.flatnonzero(mask)
    keep = A.mask[G.conj_table[elems, :]].all(axis=1)
    out = np.zeros(G.order, dtype=bool)
    out[elems[keep]] = True
    return Subgroup(G, out, _greedy=True)


@dataclass
class QuotientMap:
    """A quotient G/N with deterministic coset labels.

    Coset indices follow ascending minimal representatives, so the
    identity coset is index 0 and section(0) = 0.
    """

    parent: GroupTable
    kernel: Subgroup
    coset_of: np.ndarray
    quotient: GroupTable
    section: np.ndarray

    def image_of(self, A: Subgroup) -> Subgroup:
        """Image of a subgroup A (with kernel <= A) in the quotient."""
        mask = np.zeros(self.quotient.order, dtype=bool)
        mask[self.coset_of[A.elements]] = True
        return Subgroup(self.quotient, mask, _greedy=True)

    def preimage_of(self, B: Subgroup) -> Subgroup:
        return Subgroup(self.parent, B.mask[self.coset_of], _greedy=True)


def quotient(G: GroupTable, N: Subgroup) -> QuotientMap:
    if not is_normal(G, N):
        raise ValueError("subgroup is not normal; quotient undefined")
    reps = G.mul[:, N.elements].min(axis=1).astype(np.int32)
    section = np.unique(reps).astype(np.int32)
    coset_of = np.searchsorted(section, reps).astype(np.int32)
    q = len(section)
    qmul = coset_of[G.mul[np.ix_(section, section)]]
    qtable = GroupTable.from_mul(qmul, check="light")
    return QuotientMap(G, N, coset_of, qtable, section)


def transversal(Q: QuotientMap) -> list[int]:
    """Coset representatives, identity first, ascending coset index."""
    return [int(t) for t in Q.section]


def subgroup_as_group(A: Subgroup) -> tuple[GroupTable, np.ndarray]:
    """Relabel a subgroup as a standalone GroupTable.

    Returns the table and the array mapping new indices to parent indices
    (ascending, so the identity stays at 0).
    """
    elems = A.elements
    pos = np.full(A.parent.order, -1, dtype=np.int32)
    pos[elems] = np.arange(len(elems), dtype=np.int32)
    mul = pos[A.parent.mul[np.ix_(elems, elems)]]
    return GroupTable.from_mul(mul, check="light"), elems


def _as_table(A) -> GroupTable:
    return subgroup_as_group(A)[0] if isinstance(A, Subgroup) else A


def element_orders(G: GroupTable) -> np.ndarray:
    n = G.order
    out = np.zeros(n, dtype=np.int64)
    out[0] = 1
    cur = np.arange(n, dtype=np.int32)
    k = 1
    base = np.arange(n, dtype=np.int32)
    while (out == 0).any():
        k += 1
        cur = G.mul[cur, base]
        out[(cur == 0) & (out == 0)] = k
    return out


def exponent(A) -> int:
    G = _as_table(A)
    return reduce(math.lcm, (int(k) for k in element_orders(G)), 1)


def is_abelian(A) -> bool:
    G = _as_table(A)
    return bool((G.mul == G.mul.T).all())


def is_elementary_abelian(A) -> bool:
    """Abelian of prime exponent; the trivial group counts vacuously."""
    G = _as_table(A)
    if not is_abelian(G):
        return False
    if G.order == 1:
        return True
    e = exponent(G)
    return e >= 2 and all(e % q for q in range(2, int(e**0.5) + 1))


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def abelian_invariants(A) -> list[int]:
    """Invariant-factor orders of a finite abelian group, descending.

    Computed from element-order statistics: for each prime p the count of
    solutions of x^(p^k) = 1 determines the multiset of cyclic p-factor
    exponents (as the conjugate partition), and the primary components are
    then merged into invariant factors.
    """
    G = _as_table(A)
    if not is_abelian(G):
        raise ValueError("abelian_invariants requires an abelian group")
    n = G.order
    if n == 1:
        return []
    primary: dict[int, list[int]] = {}
    base = np.arange(n, dtype=np.int32)
    for p, e in _prime_factors(n).items():
        counts = [1]
        cur = base.copy()
        for _ in range(e):
            nxt = cur
            for _ in range(p - 1):
                nxt = G.mul[nxt, cur]
            cur = nxt
            counts.append(int((cur == 0).sum()))
        m = []
        for k in range(1, e + 1):
            quot, rem = divmod(counts[k], counts[k - 1])
            log = round(math.log(quot, p))
            assert rem == 0 and p**log == quot, "order statistics not a p-group shape"
            m.append(log)
        m.append(0)
        exps = []
        for k in range(1, e + 1):
            exps.extend([k] * (m[k - 1] - m[k]))
        primary[p] = sorted(exps, reverse=True)
    width = max(len(v) for v in primary.values())
    factors = []
    for j in range(width):
        d = 1
        for p, exps in primary.items():
            if j < len(exps):
                d *= p ** exps[j]
        factors.append(d)
    assert math.prod(factors) == n
    return factors


def upper_central_series(G: GroupTable) -> list[Subgroup]:
    """Ascending central series Z_1 <= Z_2 <= ..., strictly increasing
    until it stabilizes (at G when the group is nilpotent)."""
    series = [center(G)]
    while True:
        cur = series[-1]
        if cur.order == G.order:
            return series
        Q = quotient(G, cur)
        nxt = Q.preimage_of(center(Q.quotient))
        if nxt.order == cur.order:
            return series
        series.append(nxt)


def nilpotency_class_group(G) -> int | None:
    """Nilpotency class, or None when the group is not nilpotent."""
    G = _as_table(G)
    if G.order == 1:
        return 0
    series = upper_central_series(G)
    if series[-1].order != G.order:
        return None
    return len(series)


def class2_commutator_triple(H: GroupTable) -> tuple[int, int, int] | None:
    """Find u, v, w generating H modulo Z(H) with [u,v][v,w] = [w,u] and
    none of the three commutators trivial.

    Such a triple exists whenever H is a 2-group with H/Z(H) elementary
    abelian of order 8 and |H'| = 4.  Returns the lexicographically least
    triple, or None if no triple qualifies.
    """
    Z = center(H)
    Q = quotient(H, Z)
    if Q.quotient.order != 8:
        return None
    qmul = Q.quotient.mul
    cos = Q.coset_of
    cm = H.comm_table
    n = H.order
    for u in range(n):
        cu = cos[u]
        if cu == 0:
            continue
        for v in range(n):
            cv = cos[v]
            if cv in (0, cu):
                continue
            span = {0, cu, cv, int(qmul[cu, cv])}
            a = cm[u, v]
            if a == 0:
                continue
            for w in range(n):
                if cos[w] in span:
                    continue
                b = cm[v, w]
                c = cm[w, u]
                if b != 0 and c != 0 and int(H.mul[a, b]) == c:
                    return (u, v, w)
    return None

"""Loops as Latin squares with identity, and their multiplication groups.

A loop is stored as a full multiplication table plus the two division
tables.  Mlt(Q) is generated by all left and right translations;
Inn(Q) is the stabilizer of the identity point inside Mlt(Q).  The
center, the nilpotency class, the associator and derived subloops are all
computed from these permutation actions.
"""

from __future__ import annotations

import numpy as np

from .cocycle import Cocycle2, TriMap
from .errors import LatinSquareError
from .groupalg import GroupTable
from .permgrp import (
    Bsgs,
    close_perms,
    group_table_from_perms,
    schreier_sims,
)
from .report import Report, first_violation

INN_MATERIALIZATION_BOUND = 20000


class LoopTable:
    """A loop: Latin square with two-sided identity 0 and divisions."""

    def __init__(self, mul: np.ndarray):
        mul = np.ascontiguousarray(np.asarray(mul, dtype=np.int32))
        n = mul.shape[0]
        if mul.shape != (n, n):
            raise LatinSquareError("loop table must be square")
        idx = np.arange(n, dtype=np.int32)
        if not (np.array_equal(np.sort(mul, axis=1), np.tile(idx, (n, 1)))
                and np.array_equal(np.sort(mul, axis=0),
                                   np.tile(idx[:, None], (1, n)))):
            raise LatinSquareError("table is not a Latin square")
        if not (np.array_equal(mul[0], idx) and np.array_equal(mul[:, 0], idx)):
            raise LatinSquareError("index 0 is not a two-sided identity")
        self.order = int(n)
        self.id = 0
        self.mul = mul
        self.ldiv = np.argsort(mul, axis=1).astype(np.int32)  # [x, z] = x \ z
        self.rdiv = np.argsort(mul, axis=0).astype(np.int32)  # [z, y] = z / y
        self._mlt = None
        self._inn_perms = None

    def left_translation(self, x: int) -> np.ndarray:
        return self.mul[x].copy()

    def right_translation(self, x: int) -> np.ndarray:
        return self.mul[:, x].copy()

    def is_associative(self) -> bool:
        mul = self.mul
        return bool(np.array_equal(mul[mul, :], mul[:, mul]))

    def as_group(self) -> GroupTable:
        if not self.is_associative():
            raise LatinSquareError("loop is not associative")
        return GroupTable.from_mul(self.mul, check="light")


class NormalSubloop:
    """A subloop invariant under every inner mapping."""

    def __init__(self, parent: LoopTable, mask):
        self.parent = parent
        self.mask = np.asarray(mask, dtype=bool).copy()
        if not self.mask[0]:
            raise LatinSquareError("subloop must contain the identity")
        elems = np.flatnonzero(self.mask).astype(np.int32)
        for table in (parent.mul, parent.ldiv, parent.rdiv):
            if not self.mask[table[np.ix_(elems, elems)]].all():
                raise LatinSquareError("member set is not division-closed")
        for phi in inn_permutations(parent):
            if not self.mask[phi[elems]].all():
                raise LatinSquareError("member set is not inner-mapping invariant")
        self._elems = elems

    @property
    def elements(self) -> np.ndarray:
        return self._elems

    @property
    def order(self) -> int:
        return len(self._elems)

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __eq__(self, other):
        return (isinstance(other, NormalSubloop) and self.parent is other.parent
                and np.array_equal(self.mask, other.mask))


def loop_from_mu(G: GroupTable, mu: Cocycle2) -> LoopTable:
    """The loop on G with x * y = x y mu(x, y)."""
    table = G.mul[G.mul, mu.Z.pow[mu.values]]
    return LoopTable(table)


def mlt(Q: LoopTable) -> Bsgs:
    """Multiplication group, with the identity point first in the base."""
    if Q._mlt is None:
        gens = [Q.mul[x] for x in range(Q.order)]
        gens += [Q.mul[:, x] for x in range(Q.order)]
        Q._mlt = schreier_sims(gens, preferred_first_base_point=Q.id,
                               degree=Q.order)
    return Q._mlt


def inn_permutations(Q: LoopTable) -> list[np.ndarray]:
    """All inner mappings, materialized (identity first)."""
    if Q._inn_perms is None:
        stab = mlt(Q).point_stabilizer(Q.id)
        if not stab:
            from .permgrp import identity_perm

            Q._inn_perms = [identity_perm(Q.order)]
        else:
            Q._inn_perms = close_perms(stab, limit=INN_MATERIALIZATION_BOUND)
    return Q._inn_perms


def inn(Q: LoopTable) -> GroupTable:
    """The inner mapping group as an abstract multiplication table."""
    return group_table_from_perms(inn_permutations(Q))


def loop_center(Q: LoopTable) -> NormalSubloop:
    """Common fixed points of all inner mappings."""
    mask = np.ones(Q.order, dtype=bool)
    for phi in mlt(Q).point_stabilizer(Q.id):
        mask &= phi == np.arange(Q.order, dtype=np.int32)
    return NormalSubloop(Q, mask)


def normal_closure_subloop(Q: LoopTable, seed) -> NormalSubloop:
    """Smallest normal subloop containing the seed elements: alternate
    division-closure with images under the inner mapping generators."""
    mask = np.zeros(Q.order, dtype=bool)
    mask[0] = True
    for s in seed:
        mask[int(s)] = True
    gens = mlt(Q).point_stabilizer(Q.id)
    while True:
        before = int(mask.sum())
        elems = np.flatnonzero(mask)
        for table in (Q.mul, Q.ldiv, Q.rdiv):
            mask[table[np.ix_(elems, elems)].ravel()] = True
        for phi in gens:
            mask[phi[np.flatnonzero(mask)]] = True
        if int(mask.sum()) == before:
            return NormalSubloop(Q, mask)


def quotient_loop(Q: LoopTable, N: NormalSubloop) -> LoopTable:
    """Factor loop Q/N on minimal coset representatives; multiplication of
    representatives is checked to be independent of the choice."""
    reps = Q.mul[:, N.elements].min(axis=1).astype(np.int32)
    section = np.unique(reps).astype(np.int32)
    coset_of = np.searchsorted(section, reps).astype(np.int32)
    qmul = coset_of[Q.mul[np.ix_(section, section)]]
    if not np.array_equal(coset_of[Q.mul], qmul[coset_of[:, None], coset_of[None, :]]):
        w = first_violation(
            coset_of[Q.mul] != qmul[coset_of[:, None], coset_of[None, :]])
        raise LatinSquareError(
            f"coset multiplication is not well-defined at {w}; "
            "the subloop is not normal"
        )
    return LoopTable(qmul)


def loop_coset_map(Q: LoopTable, N: NormalSubloop):
    """(coset_of, section) for Q/N, matching quotient_loop's labels."""
    reps = Q.mul[:, N.elements].min(axis=1).astype(np.int32)
    section = np.unique(reps).astype(np.int32)
    return np.searchsorted(section, reps).astype(np.int32), section


def nilpotency_class_loop(Q: LoopTable) -> int | None:
    """Length of the iterated center-quotient chain; None if it stalls."""
    cls = 0
    cur = Q
    while cur.order > 1:
        Zc = loop_center(cur)
        if Zc.order == 1:
            return None
        cur = quotient_loop(cur, Zc)
        cls += 1
    return cls


def _associator_values(Q: LoopTable) -> np.ndarray:
    """All a with (x(yz)) a = (xy)z, read off by left division."""
    lhs = Q.mul[Q.mul, :]  # [x,y,z] = (xy)z
    rhs = Q.mul[:, Q.mul]  # [x,y,z] = x(yz)
    return Q.ldiv[rhs, lhs]


def associator_subloop(Q: LoopTable) -> NormalSubloop:
    """Normal closure of all associators; the quotient is re-verified to
    be a group."""
    seeds = np.unique(_associator_values(Q))
    A = normal_closure_subloop(Q, [s for s in seeds if s != 0])
    if not quotient_loop(Q, A).is_associative():
        raise LatinSquareError("quotient by the associator closure is not a group")
    return A


def derived_subloop(Q: LoopTable) -> NormalSubloop:
    """Normal closure of associators and commutators."""
    comms = Q.ldiv[Q.mul.T, Q.mul]  # c with (yx) c = xy
    seeds = set(np.unique(_associator_values(Q))) | set(np.unique(comms))
    return normal_closure_subloop(Q, [s for s in seeds if s != 0])


def is_solvable(Q: LoopTable) -> bool:
    cur = Q
    while cur.order > 1:
        D = derived_subloop(cur)
        if D.order == cur.order:
            return False
        cur = quotient_loop(cur, D)
    return True


def subloop_from_elements(Q: LoopTable, elems) -> NormalSubloop:
    mask = np.zeros(Q.order, dtype=bool)
    mask[0] = True
    for e in elems:
        mask[int(e)] = True
    return NormalSubloop(Q, mask)


def check_T2(Q: LoopTable, G: GroupTable, mu: Cocycle2, f: TriMap) -> Report:
    """Conjugation-squared identity: with T_x = R_x^-1 L_x,
    (T_x)^2 y = y^{x^2} f(y,x,x) for all pairs, plus the intermediate
    formula T_x(y) = y^x mu(y,x) mu(x,y^x) and a witness that some T_x^2
    moves a point (so Inn(Q) is not elementary abelian)."""
    rep = Report("conjugation-squared identity")
    n = Q.order
    X = np.arange(n, dtype=np.int32)[:, None]
    Y = np.arange(n, dtype=np.int32)[None, :]
    # conjugation by x in Q, solving x * T_x(y) = y * x; for trivial mu
    # this is y^x = x^-1 y x, matching the conjugation used everywhere else
    T = Q.ldiv[X, Q.mul[Y, X]]
    cj = G.conj_table
    zpow = mu.Z.pow
    yx = cj[Y, X]
    inter = G.mul[G.mul[yx, zpow[mu.values.T]], zpow[mu.values[X, yx]]]
    w = first_violation(T != inter)
    rep.add("T_x(y) = y^x mu(y,x) mu(x,y^x)", w is None,
            None if w is None else (w[0], w[1]))
    T2 = T[X, T]  # [x, y] = T_x(T_x(y))
    xsq = G.mul[np.arange(n), np.arange(n)]
    rhs = G.mul[cj[Y, xsq[:, None]], zpow[f.values[Y, X, X]]]
    w = first_violation(T2 != rhs)
    rep.add("(T_x)^2 y = y^{x^2} f(y,x,x)", w is None,
            None if w is None else (w[0], w[1]))
    moved = first_violation(T2 != Y)
    rep.add("some (T_x)^2 is not the identity map", moved is not None, moved,
            detail="witness pair (x, y)" if moved is not None else "")
    return rep


def loop_to_text(Q: LoopTable) -> str:
    """Cayley table as rows of space-separated 1-based indices."""
    lines = [" ".join(str(v + 1) for v in row) for row in Q.mul]
    return "\n".join(lines) + "\n"


def loop_from_text(text: str) -> LoopTable:
    rows = [[int(v) - 1 for v in line.split()]
            for line in text.strip().splitlines() if line.strip()]
    return LoopTable(np.asarray(rows, dtype=np.int32))

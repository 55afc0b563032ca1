"""Base and strong generating sets for permutation groups on few points.

Permutations are numpy int32 image arrays acting on the left, composed as
(p * q)(x) = p(q(x)).  The stabilizer chain is built deterministically:
at each level the full set of Schreier generators is formed and
deduplicated, which is exactly the stabilizer by Schreier's lemma.  At
degree <= 256 and the group orders this toolkit meets, dedup keeps every
level's generator list no larger than the stabilizer itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SizeOverflowError
from .groupalg import GroupTable


def identity_perm(degree: int) -> np.ndarray:
    return np.arange(degree, dtype=np.int32)


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """(p * q)(x) = p(q(x))."""
    return p[q]


def inverse(p: np.ndarray) -> np.ndarray:
    out = np.empty_like(p)
    out[p] = np.arange(len(p), dtype=np.int32)
    return out


def is_identity(p: np.ndarray) -> bool:
    return bool((p == np.arange(len(p), dtype=np.int32)).all())


def _dedupe(perms) -> list[np.ndarray]:
    seen = set()
    out = []
    for p in perms:
        key = p.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


@dataclass
class _Level:
    point: int
    gens: list  # generators of this level's group
    orbit: dict  # orbit point -> transversal perm u with u(level point) = point


class Bsgs:
    """A stabilizer chain: base points, per-level generators, orbits."""

    def __init__(self, degree: int, levels: list[_Level]):
        self.degree = degree
        self.levels = levels

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    @property
    def strong_gens(self) -> list[np.ndarray]:
        out = []
        for lv in self.levels:
            out.extend(lv.gens)
        return _dedupe(out)

    def order(self) -> int:
        n = 1
        for lv in self.levels:
            n *= len(lv.orbit)
        return n

    def sift(self, p: np.ndarray) -> np.ndarray:
        for lv in self.levels:
            c = int(p[lv.point])
            if c not in lv.orbit:
                return p
            p = compose(inverse(lv.orbit[c]), p)
        return p

    def contains(self, p: np.ndarray) -> bool:
        p = np.asarray(p, dtype=np.int32)
        if p.shape != (self.degree,):
            raise ValueError("permutation degree mismatch")
        return is_identity(self.sift(p))

    def point_stabilizer(self, pt: int) -> list[np.ndarray]:
        """Generators of the stabilizer of the first base point."""
        if not self.levels:
            return []
        if pt != self.levels[0].point:
            raise ValueError("stabilizer only available at the first base point")
        return list(self.levels[1].gens) if len(self.levels) > 1 else []


def _orbit_transversal(point: int, gens, degree: int):
    orbit = {point: identity_perm(degree)}
    frontier = [point]
    while frontier:
        nxt = []
        for a in frontier:
            ua = orbit[a]
            for g in gens:
                b = int(g[a])
                if b not in orbit:
                    orbit[b] = compose(g, ua)
                    nxt.append(b)
        frontier = nxt
    return orbit


def schreier_sims(gens, preferred_first_base_point: int | None = None,
                  degree: int | None = None) -> Bsgs:
    """Deterministic stabilizer-chain construction.

    The first base point is the preferred point when some generator moves
    it, otherwise the least moved point.  Each level recurses on the
    deduplicated set of all Schreier generators.
    """
    gens = [np.asarray(g, dtype=np.int32) for g in gens]
    if degree is None:
        if not gens:
            raise ValueError("degree required for an empty generating set")
        degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise ValueError("generators act on different point sets")
    levels: list[_Level] = []
    cur = _dedupe(g for g in gens if not is_identity(g))
    first = True
    while cur:
        moved = np.flatnonzero(
            np.vstack(cur) != np.arange(degree, dtype=np.int32)[None, :]
        ) % degree
        point = int(moved.min())
        if first and preferred_first_base_point is not None:
            if any(g[preferred_first_base_point] != preferred_first_base_point
                   for g in cur):
                point = int(preferred_first_base_point)
        first = False
        orbit = _orbit_transversal(point, cur, degree)
        schreier = []
        for a in sorted(orbit):
            ua = orbit[a]
            for g in cur:
                s = compose(inverse(orbit[int(g[a])]), compose(g, ua))
                if not is_identity(s):
                    schreier.append(s)
        levels.append(_Level(point, cur, orbit))
        cur = _dedupe(schreier)
    return Bsgs(degree, levels)


def order(b: Bsgs) -> int:
    return b.order()


def contains(b: Bsgs, p) -> bool:
    return b.contains(p)


def point_stabilizer(b: Bsgs, pt: int) -> list[np.ndarray]:
    return b.point_stabilizer(pt)


def close_perms(gens, limit: int = 20000) -> list[np.ndarray]:
    """All elements of the group generated by gens, by breadth-first
    closure; raises SizeOverflowError past the limit.

    The identity comes first; the rest are sorted by image tuple, so the
    ordering is independent of the generator list.
    """
    gens = [np.asarray(g, dtype=np.int32) for g in gens]
    if not gens:
        raise ValueError("need at least one permutation to fix the degree")
    degree = len(gens[0])
    ident = identity_perm(degree)
    elems = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose(g, p)
                key = q.tobytes()
                if key not in elems:
                    if len(elems) >= limit:
                        raise SizeOverflowError(
                            f"closure exceeds materialization bound {limit}"
                        )
                    elems[key] = q
                    nxt.append(q)
        frontier = nxt
    ordered = [ident] + sorted(
        (p for p in elems.values() if not is_identity(p)),
        key=lambda p: tuple(p),
    )
    return ordered


def group_table_from_perms(perms) -> GroupTable:
    """Multiplication table of an explicit permutation list (closed under
    composition, identity included)."""
    index = {p.tobytes(): i for i, p in enumerate(perms)}
    if not is_identity(perms[0]):
        raise ValueError("perms[0] must be the identity")
    n = len(perms)
    mul = np.empty((n, n), dtype=np.int32)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            mul[i, j] = index[compose(p, q).tobytes()]
    return GroupTable.from_mul(mul, check="light")

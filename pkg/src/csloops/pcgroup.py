"""Power-commutator presentations of finite p-groups and their collection.

A presentation lists, for generators g_1 < ... < g_n of prime orders p_i,
the normal words equal to g_i^{p_i} (supported on indices > i) and to the
commutators [g_j, g_i] for j > i (supported on indices > j).  Omitted
relations default to the identity word.  Triangularity guarantees that
collection terminates and that the group has order prod(p_i).

Elements are represented by exponent vectors (a_1, ..., a_n) with
0 <= a_i < p_i; the element index is the lexicographic rank of the vector,
so index 0 is the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistentPresentationError, PresentationError
from .groupalg import GroupTable

_COLLECT_STEP_CAP = 10_000_000


@dataclass(frozen=True)
class PcPresentation:
    """A triangular power-commutator presentation.

    power_rhs[i] and comm_rhs[(j, i)] map to exponent-vector right-hand
    sides; both dictionaries use 1-based generator indices.
    """

    ngens: int
    rel_orders: tuple[int, ...]
    power_rhs: dict[int, tuple[int, ...]] = field(default_factory=dict)
    comm_rhs: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.rel_orders) != self.ngens:
            raise PresentationError("one order per generator required")
        for i, rhs in self.power_rhs.items():
            self._check_rhs(rhs, i, f"g{i}^{self.rel_orders[i - 1]}")
        for (j, i), rhs in self.comm_rhs.items():
            if not (1 <= i < j <= self.ngens):
                raise PresentationError(f"commutator [g{j},g{i}] needs j > i")
            self._check_rhs(rhs, j, f"[g{j},g{i}]")

    def _check_rhs(self, rhs, lhs_index, what):
        if len(rhs) != self.ngens:
            raise PresentationError(f"{what}: right-hand side has wrong length")
        for k in range(self.ngens):
            if rhs[k] and k + 1 <= lhs_index:
                raise PresentationError(
                    f"{what}: right-hand side uses g{k + 1}, "
                    f"violating triangularity"
                )
            if not 0 <= rhs[k] < self.rel_orders[k]:
                raise PresentationError(f"{what}: exponent out of range")

    @property
    def order(self) -> int:
        n = 1
        for p in self.rel_orders:
            n *= p
        return n

    def identity(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def generator(self, i: int) -> tuple[int, ...]:
        """Exponent vector of g_i (1-based)."""
        v = [0] * self.ngens
        v[i - 1] = 1
        return tuple(v)

    def _letters(self, vec) -> list[int]:
        out = []
        for i, a in enumerate(vec):
            out.extend([i + 1] * int(a))
        return out


_REL_POWER = re.compile(r"^g(\d+)\s*\^\s*(\d+)$")
_REL_COMM = re.compile(r"^\[\s*g(\d+)\s*,\s*g(\d+)\s*\]$")
_WORD_GEN = re.compile(r"^g(\d+)$")


def _parse_word(text: str, ngens: int, lineno: int) -> tuple[int, ...]:
    text = text.strip()
    vec = [0] * ngens
    if text == "1":
        return tuple(vec)
    last = 0
    for part in text.split("*"):
        m = _WORD_GEN.match(part.strip())
        if not m:
            raise PresentationError(f"cannot parse word factor {part.strip()!r}", lineno)
        k = int(m.group(1))
        if not 1 <= k <= ngens:
            raise PresentationError(f"generator g{k} out of range", lineno)
        if k <= last:
            raise PresentationError(
                "word factors must appear in strictly increasing index order", lineno
            )
        vec[k - 1] = 1
        last = k
    return tuple(vec)


def parse_pc(text: str) -> PcPresentation:
    """Parse presentation text into a PcPresentation.

    Format: a header line ``gens n``, an optional ``orders p1 ... pn``
    line (default all 2), then relation lines ``g<i>^<p> = <word>`` and
    ``[g<j>,g<i>] = <word>`` where ``<word>`` is ``1`` or a ``*``-separated
    product of generators in increasing index order.  ``#`` starts a comment.
    """
    ngens = None
    orders = None
    power_rhs: dict[int, tuple[int, ...]] = {}
    comm_rhs: dict[tuple[int, int], tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ngens is None:
            m = re.match(r"^gens\s+(\d+)$", line)
            if not m:
                raise PresentationError("expected header 'gens n'", lineno)
            ngens = int(m.group(1))
            if ngens < 1:
                raise PresentationError("need at least one generator", lineno)
            continue
        if line.startswith("orders"):
            if orders is not None or power_rhs or comm_rhs:
                raise PresentationError("'orders' must directly follow the header", lineno)
            parts = line.split()[1:]
            if len(parts) != ngens:
                raise PresentationError(f"expected {ngens} orders", lineno)
            orders = tuple(int(p) for p in parts)
            if any(p < 2 for p in orders):
                raise PresentationError("generator orders must be at least 2", lineno)
            continue
        if "=" not in line:
            raise PresentationError("expected a relation 'lhs = word'", lineno)
        lhs, rhs_text = (s.strip() for s in line.split("=", 1))
        rel_orders = orders if orders is not None else (2,) * ngens
        rhs = _parse_word(rhs_text, ngens, lineno)
        m = _REL_POWER.match(lhs)
        if m:
            i, p = int(m.group(1)), int(m.group(2))
            if not 1 <= i <= ngens:
                raise PresentationError(f"generator g{i} out of range", lineno)
            if p != rel_orders[i - 1]:
                raise PresentationError(
                    f"power exponent {p} does not match order of g{i}", lineno
                )
            if i in power_rhs:
                raise PresentationError(f"duplicate relation for g{i}^{p}", lineno)
            if any(rhs[k] for k in range(i)):
                raise PresentationError(
                    f"g{i}^{p}: right-hand side must use only indices > {i}", lineno
                )
            power_rhs[i] = rhs
            continue
        m = _REL_COMM.match(lhs)
        if m:
            j, i = int(m.group(1)), int(m.group(2))
            if not (1 <= i <= ngens and 1 <= j <= ngens):
                raise PresentationError("generator index out of range", lineno)
            if j <= i:
                raise PresentationError(f"[g{j},g{i}] requires j > i", lineno)
            if (j, i) in comm_rhs:
                raise PresentationError(f"duplicate relation for [g{j},g{i}]", lineno)
            if any(rhs[k] for k in range(j)):
                raise PresentationError(
                    f"[g{j},g{i}]: right-hand side must use only indices > {j}", lineno
                )
            comm_rhs[(j, i)] = rhs
            continue
        raise PresentationError(f"cannot parse relation left-hand side {lhs!r}", lineno)
    if ngens is None:
        raise PresentationError("missing 'gens n' header", 1)
    rel_orders = orders if orders is not None else (2,) * ngens
    return PcPresentation(ngens, rel_orders, power_rhs, comm_rhs)


def _collect_letters(pres: PcPresentation, word: list[int]) -> list[int]:
    """Collection from the left: repeatedly rewrite the leftmost violation.

    A violation is either an adjacent descent g_j g_i with j > i (rewritten
    via g_j g_i = g_i g_j [g_j, g_i]) or p_i consecutive copies of g_i
    (rewritten via the power relation).  Triangularity makes this terminate.
    """
    orders = pres.rel_orders
    steps = 0
    while True:
        steps += 1
        if steps > _COLLECT_STEP_CAP:
            raise InconsistentPresentationError("collection did not terminate")
        spot = None  # (position, kind)
        run = 1
        for q in range(len(word) - 1):
            a, b = word[q], word[q + 1]
            if a > b:
                spot = (q, "descent")
                break
            run = run + 1 if a == b else 1
            if run == orders[b - 1]:
                spot = (q + 2 - run, "power")
                break
        if spot is None:
            break
        q, kind = spot
        if kind == "descent":
            j, i = word[q], word[q + 1]
            rhs = pres.comm_rhs.get((j, i))
            tail = pres._letters(rhs) if rhs else []
            word[q : q + 2] = [i, j] + tail
        else:
            i = word[q]
            p = orders[i - 1]
            rhs = pres.power_rhs.get(i)
            word[q : q + p] = pres._letters(rhs) if rhs else []
    return word


def collect(pres: PcPresentation, u, v) -> tuple[int, ...]:
    """Normal form of the product u * v of two normal forms."""
    word = pres._letters(u) + pres._letters(v)
    word = _collect_letters(pres, word)
    vec = [0] * pres.ngens
    for k in word:
        vec[k - 1] += 1
    return tuple(vec)


def vector_index(pres: PcPresentation, vec) -> int:
    """Lexicographic rank of an exponent vector; the identity has rank 0."""
    idx = 0
    for a, p in zip(vec, pres.rel_orders):
        idx = idx * p + int(a)
    return idx


def index_vector(pres: PcPresentation, idx: int) -> tuple[int, ...]:
    vec = [0] * pres.ngens
    for k in range(pres.ngens - 1, -1, -1):
        idx, vec[k] = divmod(idx, pres.rel_orders[k])
    return tuple(vec)


def generator_index(pres: PcPresentation, i: int) -> int:
    """Element index of the generator g_i (1-based)."""
    return vector_index(pres, pres.generator(i))


def build_group(pres: PcPresentation) -> GroupTable:
    """Materialize the presented group as a full multiplication table.

    All prod(p_i) exponent vectors are enumerated in lexicographic order
    and the table is filled by collection.  Associativity is then checked
    over all triples; failure means the presentation is inconsistent.
    """
    n = pres.order
    vectors = [index_vector(pres, x) for x in range(n)]

    # Right multiplication by each generator, computed by collection once;
    # full columns are then assembled by chaining these maps.
    rmul = np.empty((pres.ngens, n), dtype=np.int32)
    for i in range(1, pres.ngens + 1):
        g = pres.generator(i)
        for x in range(n):
            rmul[i - 1, x] = vector_index(pres, collect(pres, vectors[x], g))

    mul = np.empty((n, n), dtype=np.int32)
    mul[:, 0] = np.arange(n, dtype=np.int32)
    for y in range(1, n):
        vec = vectors[y]
        last = max(k for k in range(pres.ngens) if vec[k])
        prev = list(vec)
        prev[last] -= 1
        z = vector_index(pres, prev)
        mul[:, y] = rmul[last, mul[:, z]]

    table = GroupTable.from_mul(mul, check="none")
    try:
        table.check_axioms(assoc=False)
    except ValueError as exc:
        raise InconsistentPresentationError(
            f"presentation is inconsistent: {exc}") from None
    if not table.is_associative():
        raise InconsistentPresentationError(
            "presentation is inconsistent: multiplication is not associative"
        )
    _verify_relations(pres, table)
    return table


def _verify_relations(pres: PcPresentation, table: GroupTable):
    """Check every (stated or default) relation inside the built table;
    together with the group axioms this certifies the presentation is
    consistent, i.e. the group really has order prod(p_i)."""
    gidx = [generator_index(pres, i) for i in range(1, pres.ngens + 1)]
    for i in range(1, pres.ngens + 1):
        want = pres.power_rhs.get(i, pres.identity())
        got = table.power(gidx[i - 1], pres.rel_orders[i - 1])
        if got != vector_index(pres, want):
            raise InconsistentPresentationError(
                f"power relation for g{i} fails in the collected table")
    for j in range(2, pres.ngens + 1):
        for i in range(1, j):
            want = pres.comm_rhs.get((j, i), pres.identity())
            if table.comm(gidx[j - 1], gidx[i - 1]) != vector_index(pres, want):
                raise InconsistentPresentationError(
                    f"commutator relation [g{j},g{i}] fails in the collected table")


def load_presentation_file(path) -> PcPresentation:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pc(fh.read())

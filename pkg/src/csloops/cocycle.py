"""Central cocycle tables and their radicals, multiplicative parts, and
derived trilinear maps.

A table delta : G x G -> Z (Z a central cyclic subgroup with a designated
generator) is stored as a full matrix of exponents of that generator, so
products of values are exponent sums.  The table is constant on cosets of
a stated modulus subgroup.  From delta we derive three maps on triples:

    f(x,y,z) = delta([x,y], z)
    g(x,y,z) = f(x,y,z) f(y,z,x) f(z,x,y)
    h(x,y,z) = [x, [y,z]]

g is the obstruction whose nontriviality forces the constructed loops to
have nilpotency class three.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FrameError
from .groupalg import (
    GroupTable,
    Subgroup,
    center,
    closure,
    commutator_sub,
    derived,
    is_elementary_abelian,
    is_normal,
    nilpotency_class_group,
    normal_core,
    quotient,
)
from .report import Report, first_violation


@dataclass
class CentralCyclic:
    """A central cyclic subgroup with a designated generator."""

    parent: GroupTable
    Z: Subgroup
    gen: int

    def __post_init__(self):
        if not self.Z <= center(self.parent):
            raise FrameError("Z is not central")
        if self.gen not in self.Z:
            raise FrameError("designated generator is not in Z")
        n = self.parent.order
        powers = [0]
        x = self.gen
        while x != 0:
            powers.append(x)
            x = int(self.parent.mul[x, self.gen])
        powers = powers[1:] + [0]  # gen^1, gen^2, ..., gen^m = 1
        self.m = len(powers)
        if self.m != self.Z.order:
            raise FrameError("Z is not cyclic with the designated generator")
        self.pow = np.zeros(self.m, dtype=np.int32)  # exponent -> element
        self.pow[1:] = powers[:-1]
        self.exp_of = np.full(n, -1, dtype=np.int64)  # element -> exponent
        for e in range(self.m):
            self.exp_of[self.pow[e]] = e

    @classmethod
    def from_subgroup(cls, G: GroupTable, Z: Subgroup) -> "CentralCyclic":
        """Pick the least element of maximal order as the generator."""
        from .groupalg import element_orders, subgroup_as_group

        table, elems = subgroup_as_group(Z)
        orders = element_orders(table)
        best = int(elems[int(np.argmax(orders == orders.max()))])
        return cls(G, Z, best)


@dataclass
class Cocycle2:
    """A Z-valued table on G x G, constant on cosets of the modulus."""

    parent: GroupTable
    Z: CentralCyclic
    modulus: Subgroup
    values: np.ndarray  # (n, n) exponents of Z.gen, int16

    def __post_init__(self):
        n = self.parent.order
        self.values = np.ascontiguousarray(
            np.asarray(self.values, dtype=np.int16) % self.Z.m
        )
        if self.values.shape != (n, n):
            raise ValueError("cocycle table has wrong shape")

    def value_elem(self, x: int, y: int) -> int:
        return int(self.Z.pow[self.values[x, y]])

    def wellformedness_report(self) -> Report:
        """Normalization, coset constancy, and modulus normality."""
        rep = Report("cocycle wellformedness")
        D = self.values
        n = self.parent.order
        bad = np.zeros(n, dtype=bool)
        bad |= D[0, :] != 0
        bad |= D[:, 0] != 0
        w = first_violation(bad)
        rep.add("normalized: delta(1,x) = delta(x,1) = 1", w is None, w)
        normal = is_normal(self.parent, self.modulus)
        rep.add("modulus subgroup is normal", normal)
        if normal:
            Q = quotient(self.parent, self.modulus)
            reps = Q.section[Q.coset_of]
            canon = D[np.ix_(reps, reps)]
            w = first_violation(canon != D)
            rep.add("constant on modulus cosets", w is None, w)
        return rep

    def validate(self):
        rep = self.wellformedness_report()
        if not rep.passed:
            raise ValueError(str(rep))


# a mapping mu intended to satisfy the loop-construction conditions is
# stored exactly like a cocycle table
Mu = Cocycle2


@dataclass
class TriMap:
    """A Z-valued table on G^3, kept as a full exponent tensor."""

    parent: GroupTable
    Z: CentralCyclic
    values: np.ndarray  # (n, n, n) exponents, int16
    name: str = "trimap"

    def __post_init__(self):
        self.values = np.ascontiguousarray(
            np.asarray(self.values, dtype=np.int16) % self.Z.m
        )


# ---------------------------------------------------------------------------
# radicals and the multiplicative part


def rad1(phi: Cocycle2) -> Subgroup:
    """Elements whose insertion on either side of either argument leaves
    phi unchanged; always a subgroup."""
    G, D = phi.parent, phi.values
    ok = (D[G.mul] == D[None, :, :]).all(axis=(1, 2))
    ok &= (D[G.mul.T] == D[None, :, :]).all(axis=(1, 2))
    left = np.moveaxis(D[:, G.mul], 1, 0)  # [t, x, y] = D[x, t*y]
    ok &= (left == D[None, :, :]).all(axis=(1, 2))
    right = np.moveaxis(D[:, G.mul.T], 1, 0)  # [t, x, y] = D[x, y*t]
    ok &= (right == D[None, :, :]).all(axis=(1, 2))
    return Subgroup(G, ok, _greedy=True)


def rad2(phi: Cocycle2) -> frozenset[int]:
    """Annihilator set {t : phi(t,x) = phi(x,t) = 1 for all x}; need not
    be a subgroup, so it is returned as a raw element set."""
    D = phi.values
    mask = (D == 0).all(axis=1) & (D == 0).all(axis=0)
    return frozenset(int(t) for t in np.flatnonzero(mask))


def radical(phi: Cocycle2) -> Subgroup:
    """Normal core of rad1."""
    return normal_core(phi.parent, rad1(phi))


def radical3(phi: TriMap) -> Subgroup:
    """Radical of a multiplicative map on triples: elements killing the
    value whenever inserted in any slot."""
    V = phi.values
    mask = (V == 0).all(axis=(1, 2)) & (V == 0).all(axis=(0, 2)) \
        & (V == 0).all(axis=(0, 1))
    return Subgroup(phi.parent, mask, _greedy=True)


def mul_part(phi: Cocycle2) -> Subgroup:
    """Elements in which phi behaves multiplicatively in every slot."""
    G, D = phi.parent, phi.values
    m = phi.Z.m
    base = D[None, :, :].astype(np.int32)  # [t, x, y] = D[x, y]
    tfirst = D[:, None, :].astype(np.int32)  # [t, x, y] = D[t, y]
    tsecond = D.T[:, :, None].astype(np.int32)  # [t, x, y] = D[x, t]
    ok = (D[G.mul].astype(np.int32) == (tfirst + base) % m).all(axis=(1, 2))
    ok &= (D[G.mul.T].astype(np.int32) == (tfirst + base) % m).all(axis=(1, 2))
    left = np.moveaxis(D[:, G.mul], 1, 0).astype(np.int32)  # [t,x,y] = D[x, t*y]
    ok &= (left == (tsecond + base) % m).all(axis=(1, 2))
    right = np.moveaxis(D[:, G.mul.T], 1, 0).astype(np.int32)  # [t,x,y] = D[x, y*t]
    ok &= (right == (tsecond + base) % m).all(axis=(1, 2))
    # multiplicativity with t held in a fixed slot: phi(xy,t) and phi(t,xy)
    col = D.T[:, G.mul].astype(np.int32)  # [t, x, y] = D[x*y, t]
    ok &= (col == (D.T[:, :, None].astype(np.int32) + D.T[:, None, :]) % m).all(axis=(1, 2))
    row = D[:, G.mul].astype(np.int32)  # [t, x, y] = D[t, x*y]
    ok &= (row == (D[:, :, None].astype(np.int32) + D[:, None, :]) % m).all(axis=(1, 2))
    return Subgroup(G, ok, _greedy=True)


# ---------------------------------------------------------------------------
# derived maps on triples


def derive_f(delta: Cocycle2) -> TriMap:
    """f(x,y,z) = delta([x,y], z)."""
    return TriMap(delta.parent, delta.Z, delta.values[delta.parent.comm_table],
                  name="f")


def derive_g(delta: Cocycle2) -> TriMap:
    """Cyclic symmetrization g(x,y,z) = f(x,y,z) f(y,z,x) f(z,x,y)."""
    F = derive_f(delta).values.astype(np.int32)
    g = (F + F.transpose(1, 2, 0) + F.transpose(2, 0, 1)) % delta.Z.m
    return TriMap(delta.parent, delta.Z, g, name="g")


def derive_h(G: GroupTable, Z: CentralCyclic) -> TriMap:
    """h(x,y,z) = [x, [y,z]]; requires [G, G'] <= Z."""
    cm = G.comm_table
    n = G.order
    elems = cm[np.arange(n, dtype=np.int32)[:, None, None], cm[None, :, :]]
    exps = Z.exp_of[elems]
    w = first_violation(exps < 0)
    if w is not None:
        raise FrameError(
            f"[x,[y,z]] lands outside Z at (x,y,z) = {w}; [G,G'] <= Z fails"
        )
    return TriMap(G, Z, exps, name="h")


# ---------------------------------------------------------------------------
# condition batteries


def restricted_multiplicativity_witness(G: GroupTable, D: np.ndarray, m: int,
                                        restrict_mask,
                                        slot: int) -> tuple | None:
    """Least triple (x, y, z) meeting the restriction mask where
    slot 1: D(xy, z) != D(x, z) + D(y, z), or
    slot 2: D(x, yz) != D(x, y) + D(x, z)   (exponents mod m).
    With restrict_mask=None the scan covers all triples."""
    if restrict_mask is None:
        meets = True
    else:
        sel = np.asarray(restrict_mask, dtype=bool)
        meets = sel[:, None, None] | sel[None, :, None] | sel[None, None, :]
    if slot == 1:
        lhs = D[G.mul].astype(np.int32)  # [x, y, z] = D[x*y, z]
        rhs = (D[:, None, :].astype(np.int32) + D[None, :, :]) % m
    elif slot == 2:
        lhs = D[:, G.mul].astype(np.int32)  # [x, y, z] = D[x, y*z]
        rhs = (D[:, :, None].astype(np.int32) + D[:, None, :]) % m
    else:
        raise ValueError("slot must be 1 or 2")
    return first_violation((lhs != rhs) & meets)


def condition_b4_witness(G: GroupTable, delta: Cocycle2) -> tuple | None:
    """Least (x, y, z) violating the conjugation-balance identity."""
    return first_violation(_b4_mask(G, delta))


def _b4_mask(G: GroupTable, delta: Cocycle2) -> np.ndarray:
    """Violations of z^{yx} delta([z,y],x) = z^{xy} delta([z,x],y)."""
    n = G.order
    X = np.arange(n, dtype=np.int32)[:, None, None]
    Y = np.arange(n, dtype=np.int32)[None, :, None]
    Zax = np.arange(n, dtype=np.int32)[None, None, :]
    cj, cm, D, zpow = G.conj_table, G.comm_table, delta.values, delta.Z.pow
    lhs = G.mul[cj[Zax, G.mul[Y, X]], zpow[D[cm[Zax, Y], X]]]
    rhs = G.mul[cj[Zax, G.mul[X, Y]], zpow[D[cm[Zax, X], Y]]]
    return lhs != rhs


def check_B(G: GroupTable, Z: CentralCyclic, delta: Cocycle2) -> Report:
    """The four defining conditions of a valid cocycle setup: alternating,
    skew-symmetric, multiplicative where a commutator is involved, and the
    conjugation-balance identity over all triples."""
    rep = Report("B conditions")
    D = delta.values
    m = Z.m
    w = first_violation(np.diag(D) != 0)
    rep.add("B1: delta(x,x) = 1", w is None, w)
    w = first_violation((D.astype(np.int32) + D.T) % m != 0)
    rep.add("B2: delta(x,y) = delta(y,x)^-1", w is None, w)
    Gp = derived(G)
    w = restricted_multiplicativity_witness(G, D, m, Gp.mask, slot=1)
    if w is None:
        w = restricted_multiplicativity_witness(G, D, m, Gp.mask, slot=2)
    rep.add("B3: multiplicative when {x,y,z} meets G'", w is None, w)
    w = first_violation(_b4_mask(G, delta))
    rep.add("B4: z^{yx} delta([z,y],x) = z^{xy} delta([z,x],y)", w is None, w)
    return rep


def _slotwise_multiplicative(rep: Report, G: GroupTable, V: np.ndarray,
                             m: int, name: str):
    """Exhaustive multiplicativity of a triple map in each slot (n^4 scans,
    chunked over the substituted element)."""
    n = G.order
    pow2 = m & (m - 1) == 0
    for slot in range(3):
        Vs = np.ascontiguousarray(np.moveaxis(V, slot, 0))
        bad = None
        rhs = np.empty_like(Vs)
        lhs = np.empty_like(Vs)
        for x2 in range(n):
            np.add(Vs, Vs[x2][None], out=rhs)
            if pow2:
                np.bitwise_and(rhs, m - 1, out=rhs)
            else:
                np.mod(rhs, m, out=rhs)
            np.take(Vs, G.mul[:, x2], axis=0, out=lhs)
            if not np.array_equal(lhs, rhs):
                i = np.argwhere(lhs != rhs)[0]
                cand = (int(i[0]), int(x2), int(i[1]), int(i[2]))
                bad = cand if bad is None or cand < bad else bad
        rep.add(f"{name} multiplicative in slot {slot + 1}", bad is None, bad)


def check_fgh(G: GroupTable, Z: CentralCyclic, delta: Cocycle2) -> Report:
    """Exhaustive identities tying f, g, h together.

    Covers multiplicativity of all three maps, the radical inclusions,
    skewness of f, cyclic invariance and transposition-inversion of g,
    skewness of h, g^2 = 1, elementary-abelian G/rad g, the triple
    commutator identity [x,[y,z]][y,[z,x]][z,[x,y]] = 1, and agreement of
    h with the difference of f values (both derivations are compared; the
    structural constraints on G come first).
    """
    rep = Report("f/g/h identities")
    m = Z.m
    rep.add("[G,G'] <= Z", commutator_sub(G, G.whole(), derived(G)) <= Z.Z)
    cls = nilpotency_class_group(G)
    rep.add("nilpotency class of G at most 3", cls is not None and cls <= 3)
    qz = quotient(G, Z.Z)
    clq = nilpotency_class_group(qz.quotient)
    rep.add("nilpotency class of G/Z at most 2", clq is not None and clq <= 2)

    F = derive_f(delta).values
    gmap = derive_g(delta)
    Gt = gmap.values
    H = derive_h(G, Z).values
    F32, G32, H32 = (t.astype(np.int32) for t in (F, Gt, H))

    _slotwise_multiplicative(rep, G, F, m, "f")
    w = first_violation((F32 + F32.transpose(1, 0, 2)) % m != 0)
    rep.add("f(x,y,z) = f(y,x,z)^-1", w is None, w)
    radf = radical3(TriMap(G, Z, F, name="f"))
    rep.add("mul delta <= rad f", mul_part(delta) <= radf)

    _slotwise_multiplicative(rep, G, Gt, m, "g")
    w = first_violation(G32 != G32.transpose(1, 2, 0))
    rep.add("g invariant under cyclic shift", w is None, w)
    w = first_violation((G32 + G32.transpose(1, 0, 2)) % m != 0)
    rep.add("g inverted by transpositions", w is None, w)
    w = first_violation((2 * G32) % m != 0)
    rep.add("g(x,y,z)^2 = 1", w is None, w)
    radg = radical3(gmap)
    rep.add("rad f <= rad g", radf <= radg)
    rep.add("G/rad g elementary abelian",
            is_elementary_abelian(quotient(G, radg).quotient))

    _slotwise_multiplicative(rep, G, H, m, "h")
    w = first_violation((H32 + H32.transpose(0, 2, 1)) % m != 0)
    rep.add("h(x,y,z) = h(x,z,y)^-1", w is None, w)
    radh = radical3(TriMap(G, Z, H, name="h"))
    rep.add("rad f <= rad h", radf <= radh)
    w = first_violation((H32 + H32.transpose(1, 2, 0) + H32.transpose(2, 0, 1)) % m != 0)
    rep.add("[x,[y,z]] [y,[z,x]] [z,[x,y]] = 1", w is None, w)
    w = first_violation((F32 - F32.transpose(0, 2, 1) - H32.transpose(0, 2, 1)) % m != 0)
    rep.add("f(z,x,y) = h(z,y,x) f(z,y,x)", w is None, w)
    return rep


def check_inclusion_chain(G: GroupTable, Z: CentralCyclic,
                          delta: Cocycle2) -> Report:
    """G >= rad g >= rad f >= mul delta >= rad delta >= Z, as bitsets."""
    rep = Report("inclusion chain")
    chain = [
        ("G", G.whole()),
        ("rad g", radical3(derive_g(delta))),
        ("rad f", radical3(derive_f(delta))),
        ("mul delta", mul_part(delta)),
        ("rad delta", radical(delta)),
        ("Z", Z.Z),
    ]
    for (name_hi, hi), (name_lo, lo) in zip(chain, chain[1:]):
        rep.add(f"{name_hi} >= {name_lo}", lo <= hi)
    return rep


def is_nontrivial(delta: Cocycle2) -> tuple[bool, tuple | None]:
    """Whether g is nonzero anywhere; returns the least witnessing triple."""
    w = first_violation(derive_g(delta).values != 0)
    return (w is not None), w


# ---------------------------------------------------------------------------
# scenario classification at order 128


@dataclass
class Classification:
    scenario: str  # "i", "ii", "iii", or "not-minimal-shape"
    failed_clause: str | None
    report: Report


def classify_scenario(G: GroupTable, Z: CentralCyclic,
                      delta: Cocycle2) -> Classification:
    """Decide which of the three minimal-setup scenarios a nontrivial
    order-128 setup falls into, checking the shared clauses first and then
    the scenario conjunctions; the first failed clause is reported."""
    if G.order != 128:
        raise ValueError("scenario classification is defined at order 128")
    nontriv, _ = is_nontrivial(delta)
    if not nontriv:
        raise ValueError("scenario classification requires a nontrivial setup")

    rep = Report("scenario classification")
    Gp = derived(G)
    radd = radical(delta)
    muld = mul_part(delta)
    radf = radical3(derive_f(delta))
    radg = radical3(derive_g(delta))
    GpZ = closure(G, list(Gp.gens) + [Z.gen])

    def clause(name, ok):
        rep.add(name, ok)
        return bool(ok)

    shared = (
        clause("|Z| = 2", Z.Z.order == 2)
        and clause("rad g = rad f", radg == radf)
        and clause("rad f = mul delta", radf == muld)
        and clause("mul delta = G'Z", muld == GpZ)
        and clause("mul delta / rad delta elementary abelian",
                   _quotient_elem_abelian(G, muld, radd))
        and clause("G/rad g elementary abelian of order 8",
                   quotient(G, radg).quotient.order == 8
                   and is_elementary_abelian(quotient(G, radg).quotient))
        and clause("K = G/Z has |K| = 64, |K'| = 8, K' = Z(K)",
                   _group_k_shape(G, Z.Z))
    )
    if not shared:
        return Classification("not-minimal-shape", rep.first_failure().name, rep)

    qr = quotient(G, radd)
    Gbar = qr.quotient
    zbar = center(Gbar)
    radf_bar = qr.image_of(radf)
    gbar_derived = derived(Gbar)
    cls = nilpotency_class_group(G)
    mr = muld.order // radd.order

    if cls == 2:
        ok = (
            clause("(i) G' < mul delta", Gp <= muld and Gp != muld)
            and clause("(i) mul delta = Z(G)", muld == center(G))
            and clause("(i) Z(G/rad delta) = rad f/rad delta", zbar == radf_bar)
            and clause("(i) rad f/rad delta = (G/rad delta)'",
                       radf_bar == gbar_derived)
            and clause("(i) |mul delta / rad delta| = 8", mr == 8)
            and clause("(i) rad delta = Z", radd == Z.Z)
            and clause("(i) f = g", np.array_equal(
                derive_f(delta).values, derive_g(delta).values))
        )
        if ok:
            return Classification("i", None, rep)
        return Classification("not-minimal-shape", rep.first_failure().name, rep)

    if not clause("class of G is 2 or 3", cls == 3):
        return Classification("not-minimal-shape", rep.first_failure().name, rep)
    if not clause("Z = [G,G']", commutator_sub(G, G.whole(), Gp) == Z.Z):
        return Classification("not-minimal-shape", rep.first_failure().name, rep)
    if not clause("G' = mul delta", Gp == muld):
        return Classification("not-minimal-shape", rep.first_failure().name, rep)

    if mr == 8:
        ok = (
            clause("(ii) Z(G/rad delta) = rad f/rad delta", zbar == radf_bar)
            and clause("(ii) rad f/rad delta = (G/rad delta)'",
                       radf_bar == gbar_derived)
            and clause("(ii) rad delta = Z", radd == Z.Z)
        )
        if ok:
            return Classification("ii", None, rep)
        return Classification("not-minimal-shape", rep.first_failure().name, rep)

    if mr == 2:
        ok = (
            clause("(iii) Z(G/rad delta) not inside rad f/rad delta",
                   not (zbar <= radf_bar))
            and clause("(iii) rad delta/Z is the Klein group",
                       _quotient_is_klein(G, radd, Z.Z))
        )
        if ok:
            return Classification("iii", None, rep)
        return Classification("not-minimal-shape", rep.first_failure().name, rep)

    clause("|mul delta / rad delta| is 8 or 2", False)
    return Classification("not-minimal-shape", rep.first_failure().name, rep)


def _quotient_elem_abelian(G, top: Subgroup, bottom: Subgroup) -> bool:
    from .groupalg import subgroup_as_group

    table, elems = subgroup_as_group(top)
    pos = {int(e): i for i, e in enumerate(elems)}
    mask = np.zeros(table.order, dtype=bool)
    for e in bottom.elements:
        mask[pos[int(e)]] = True
    sub = Subgroup(table, mask, _greedy=True)
    return is_elementary_abelian(quotient(table, sub).quotient)


def _quotient_is_klein(G, top: Subgroup, bottom: Subgroup) -> bool:
    from .groupalg import abelian_invariants, is_abelian, subgroup_as_group

    table, elems = subgroup_as_group(top)
    pos = {int(e): i for i, e in enumerate(elems)}
    mask = np.zeros(table.order, dtype=bool)
    for e in bottom.elements:
        mask[pos[int(e)]] = True
    q = quotient(table, Subgroup(table, mask, _greedy=True)).quotient
    return is_abelian(q) and abelian_invariants(q) == [2, 2]


def _group_k_shape(G: GroupTable, Z: Subgroup) -> bool:
    K = quotient(G, Z).quotient
    return (K.order == 64 and derived(K).order == 8
            and derived(K) == center(K))

"""The top-to-bottom construction of loop-defining data.

Starting from a group G with a frame of subgroups Z <= R <= M (Z central
of order 2, R the intended radical, M the intended multiplicative part):

    1. find a standard basis e1, e2, e3 whose cosets span G/M and whose
       pairwise commutators span M/Z;
    2. g on (G/M)^3 is forced to be the determinant form;
    3. f is forced on basis triples and extended trilinearly;
    4. delta is seeded by delta([ei,ej], ek) = f(ei,ej,ek), extended over
       M/R (where the seeds can conflict; the conflict detector is the
       point of this step), then over all of G/R via a transversal with
       free parameters;
    5. any compatible parameter set (psi, phi, tau) over a transversal of
       N/R in G/R turns delta into a full table mu, and x*y = xy mu(x,y)
       is then a loop.

The frame audit at the end (check_A) verifies the subgroup chain and the
defining conditions of mu and delta exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cocycle import (
    CentralCyclic,
    Cocycle2,
    Mu,
    TriMap,
    condition_b4_witness,
    derive_g,
    mul_part,
    radical,
    radical3,
    restricted_multiplicativity_witness,
)
from .errors import BasisError, FrameError, WellDefinednessError
from .groupalg import (
    GroupTable,
    QuotientMap,
    Subgroup,
    center,
    closure,
    derived,
    is_elementary_abelian,
    is_normal,
    quotient,
)
from .report import Report, first_violation


@dataclass
class StandardBasis:
    """A basis triple together with its frame subgroups."""

    e1: int
    e2: int
    e3: int
    M: Subgroup
    R: Subgroup
    Z: Subgroup

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.e1, self.e2, self.e3)


@dataclass
class FreeDeltaParams:
    """Free values delta(t_i, t_j) for 1 < i < j <= n, keyed by 1-based
    transversal positions; unset entries are trivial."""

    values: dict[tuple[int, int], int] = field(default_factory=dict)

    def get(self, i: int, j: int) -> int:
        return int(self.values.get((i, j), 0))


@dataclass
class ParamSet:
    """A compatible parameter set over the transversal of N/R in G/R.

    psi[k] is the value table of a homomorphism G/R -> Z for k in N/R
    (rows outside N/R are zero); phi[i] the table of a homomorphism
    N/R -> Z per transversal position; tau the constants for 1 <= i <= j.
    All indices are quotient-group labels; positions are 1-based.
    """

    psi: np.ndarray  # (q, q) exponents
    phi: np.ndarray  # (n, q) exponents
    tau: dict[tuple[int, int], int]

    def __eq__(self, other):
        return (isinstance(other, ParamSet)
                and np.array_equal(self.psi, other.psi)
                and np.array_equal(self.phi, other.phi)
                and self.tau == other.tau)


@dataclass
class SetupFrame:
    """Derived context shared by the parameter-set machinery."""

    G: GroupTable
    Z: CentralCyclic
    R: Subgroup
    N: Subgroup
    qr: QuotientMap
    nbar: Subgroup  # N/R inside G/R
    T: list[int]  # transversal of N/R in G/R, quotient labels, T[0] = 1
    tidx: np.ndarray  # quotient label -> 0-based transversal position
    kpart: np.ndarray  # quotient label -> its N/R part (quotient label)

    @property
    def n(self) -> int:
        return len(self.T)


def setup_frame(G: GroupTable, Z: CentralCyclic, delta: Cocycle2,
                R: Subgroup | None = None) -> SetupFrame:
    """R = rad delta and N = G'R, with the transversal decomposition."""
    if R is None:
        R = radical(delta)
    N = closure(G, list(derived(G).gens) + list(R.gens))
    qr = quotient(G, R)
    nbar = qr.image_of(N)
    qn = quotient(qr.quotient, nbar)
    T = [int(t) for t in qn.section]
    tidx = qn.coset_of.astype(np.int32)
    Tarr = np.asarray(T, dtype=np.int32)
    q = qr.quotient.order
    labels = np.arange(q, dtype=np.int32)
    kpart = qr.quotient.mul[labels, qr.quotient.inv[Tarr[tidx]]]
    if not nbar.mask[kpart].all():
        raise FrameError("transversal decomposition failed")
    return SetupFrame(G, Z, R, N, qr, nbar, T, tidx, kpart)


def _quotient_values(frame: SetupFrame, table: Cocycle2) -> np.ndarray:
    """Restrict a G-level table constant on R-cosets to quotient labels."""
    sec = frame.qr.section
    return table.values[np.ix_(sec, sec)].astype(np.int16)


# ---------------------------------------------------------------------------
# standard bases


def _span8(Q: GroupTable, labels) -> set[int]:
    out = {0}
    for a in labels:
        out |= {int(Q.mul[a, b]) for b in out}
    return out


def find_standard_basis(G: GroupTable, Z: CentralCyclic, R: Subgroup,
                        M: Subgroup, scenario: str,
                        basis: tuple[int, int, int] | None = None
                        ) -> StandardBasis:
    """Locate (or validate) a basis triple for the frame.

    Requirements: the cosets e1 M, e2 M, e3 M form a basis of G/M; the
    commutator cosets [e1,e2]Z, [e1,e3]Z, [e2,e3]Z form a basis of M/Z;
    and in scenario (iii) additionally [e1,e2]R = [e1,e3]R.  The search
    returns the lexicographically least qualifying ordered triple.
    """
    if not (Z.Z <= R and R <= M):
        raise BasisError("frame must satisfy Z <= R <= M")
    qm = quotient(G, M)
    if qm.quotient.order != 8 or not is_elementary_abelian(qm.quotient):
        raise BasisError("G/M is not elementary abelian of order 8")
    qz = quotient(G, Z.Z)
    mz = qz.image_of(M)
    if mz.order != 8 or not _subgroup_elem_abelian(mz):
        raise BasisError("M/Z is not elementary abelian of order 8")
    qr = quotient(G, R)

    def qualifies(e1, e2, e3) -> bool:
        c12, c13, c23 = (G.comm(e1, e2), G.comm(e1, e3), G.comm(e2, e3))
        labels = [int(qz.coset_of[c]) for c in (c12, c13, c23)]
        if len(_span8(qz.quotient, labels)) != 8:
            return False
        if scenario == "iii" and qr.coset_of[c12] != qr.coset_of[c13]:
            return False
        return True

    if basis is not None:
        e1, e2, e3 = (int(e) for e in basis)
        cosets = [int(qm.coset_of[e]) for e in (e1, e2, e3)]
        if len(_span8(qm.quotient, cosets)) != 8:
            raise BasisError("given cosets do not form a basis of G/M")
        if not qualifies(e1, e2, e3):
            raise BasisError("given triple fails the commutator-basis "
                             "or scenario normalization condition")
        return StandardBasis(e1, e2, e3, M, R, Z.Z)

    n = G.order
    cos = qm.coset_of
    Q8 = qm.quotient
    for e1 in range(n):
        c1 = int(cos[e1])
        if c1 == 0:
            continue
        for e2 in range(n):
            c2 = int(cos[e2])
            if c2 in (0, c1):
                continue
            if qz.coset_of[G.comm(e1, e2)] == 0:
                continue  # [e1,e2] must be nontrivial mod Z in any basis
            span12 = {0, c1, c2, int(Q8.mul[c1, c2])}
            for e3 in range(n):
                if int(cos[e3]) in span12:
                    continue
                if qualifies(e1, e2, e3):
                    return StandardBasis(e1, e2, e3, M, R, Z.Z)
    raise BasisError("no basis triple qualifies for this frame")


def _subgroup_elem_abelian(sub: Subgroup) -> bool:
    from .groupalg import subgroup_as_group

    return is_elementary_abelian(subgroup_as_group(sub)[0])


def _basis_coords(G: GroupTable, M: Subgroup, basis: StandardBasis) -> np.ndarray:
    """GF(2) coordinates of every element's G/M coset in the basis."""
    qm = quotient(G, M)
    combo_of = {}
    for a1 in range(2):
        for a2 in range(2):
            for a3 in range(2):
                x = 0
                if a1:
                    x = G.mul[x, basis.e1]
                if a2:
                    x = G.mul[x, basis.e2]
                if a3:
                    x = G.mul[x, basis.e3]
                combo_of[int(qm.coset_of[x])] = (a1, a2, a3)
    if len(combo_of) != 8:
        raise BasisError("basis cosets do not enumerate G/M")
    table = np.zeros((8, 3), dtype=np.int16)
    for label, combo in combo_of.items():
        table[label] = combo
    return table[qm.coset_of]


# ---------------------------------------------------------------------------
# forced forms g and f


def _require_involution(Z: CentralCyclic):
    if Z.Z.order != 2:
        raise FrameError("construction requires |Z| = 2")


def build_g_form(G: GroupTable, M: Subgroup, Z: CentralCyclic,
                 basis: StandardBasis) -> TriMap:
    """The determinant form on (G/M)^3: -1 exactly when the three
    arguments have independent cosets."""
    _require_involution(Z)
    C = _basis_coords(G, M, basis)
    cross = np.empty((G.order, G.order, 3), dtype=np.int16)
    cross[:, :, 0] = C[:, None, 1] * C[None, :, 2] + C[:, None, 2] * C[None, :, 1]
    cross[:, :, 1] = C[:, None, 0] * C[None, :, 2] + C[:, None, 2] * C[None, :, 0]
    cross[:, :, 2] = C[:, None, 0] * C[None, :, 1] + C[:, None, 1] * C[None, :, 0]
    det = np.einsum("xa,yza->xyz", C, cross) % 2
    return TriMap(G, Z, det, name="g")


def _h_exp(G: GroupTable, Z: CentralCyclic, a: int, b: int, c: int) -> int:
    """Exponent of [a, [b, c]] in Z; the frame must keep it central."""
    val = G.comm(a, G.comm(b, c))
    e = int(Z.exp_of[val])
    if e < 0:
        raise FrameError("[x,[y,z]] lands outside Z on the basis")
    return e


def build_f(G: GroupTable, M: Subgroup, Z: CentralCyclic,
            basis: StandardBasis) -> TriMap:
    """The unique multiplicative f on (G/M)^3 with the forced values on
    basis triples; satisfies rad f = M and the cyclic identity with g."""
    _require_involution(Z)
    e = basis.triple
    F0 = np.zeros((3, 3, 3), dtype=np.int16)
    for i in range(3):
        for j in range(3):
            if i != j:
                h = _h_exp(G, Z, e[i], e[i], e[j])
                F0[i, j, i] = F0[j, i, i] = h
    h123 = _h_exp(G, Z, e[0], e[1], e[2])
    h213 = _h_exp(G, Z, e[1], e[0], e[2])
    F0[0, 1, 2] = F0[1, 0, 2] = (1 + h123 + h213) % 2
    F0[0, 2, 1] = F0[2, 0, 1] = (1 + h213) % 2
    F0[1, 2, 0] = F0[2, 1, 0] = (1 + h123) % 2
    C = _basis_coords(G, M, basis)
    t1 = np.einsum("xa,abc->xbc", C, F0)
    t2 = np.einsum("yb,xbc->xyc", C, t1)
    F = np.einsum("zc,xyc->xyz", C, t2) % 2
    f = TriMap(G, Z, F, name="f")

    if radical3(f) != M:
        raise FrameError("forced f does not have radical M")
    g = build_g_form(G, M, Z, basis).values.astype(np.int32)
    cyc = (F.astype(np.int32) + F.transpose(1, 2, 0) + F.transpose(2, 0, 1)) % 2
    if not np.array_equal(cyc, g):
        raise FrameError("forced f does not symmetrize to the determinant form")
    return f


# ---------------------------------------------------------------------------
# delta from f


def build_delta(G: GroupTable, Z: CentralCyclic, R: Subgroup, M: Subgroup,
                basis: StandardBasis,
                params: FreeDeltaParams | None = None) -> Cocycle2:
    """Extend the seeded values delta([ei,ej], ek) = f(ei,ej,ek) to a full
    table on G/R x G/R.

    The seed extension over M/R can conflict when the commutator cosets
    are dependent modulo R; the conflict is detected during assignment and
    reported with the two colliding subset expressions.  The extension to
    all of G/R uses the deterministic transversal of M/R and the free
    parameters delta(t_i, t_j), 1 < i < j.
    """
    _require_involution(Z)
    params = params or FreeDeltaParams()
    f = build_f(G, M, Z, basis)
    m = Z.m
    qr = quotient(G, R)
    Ghat = qr.quotient
    mbar = qr.image_of(M)

    e = basis.triple
    pairs = ((0, 1), (0, 2), (1, 2))
    comms = {p: G.comm(e[p[0]], e[p[1]]) for p in pairs}
    seeds = {p: np.array([f.values[e[p[0]], e[p[1]], e[k]] for k in range(3)],
                         dtype=np.int32) for p in pairs}

    assigned: dict[int, tuple[np.ndarray, tuple]] = {}
    for bits in range(8):
        subset = tuple(p for b, p in enumerate(pairs) if bits >> b & 1)
        label = 0
        vec = np.zeros(3, dtype=np.int32)
        for p in subset:
            label = int(Ghat.mul[label, qr.coset_of[comms[p]]])
            vec = (vec + seeds[p]) % m
        if label in assigned:
            prev_vec, prev_subset = assigned[label]
            if not np.array_equal(prev_vec, vec):
                raise WellDefinednessError(
                    "seeded values conflict on a coset of the modulus: "
                    f"subsets {prev_subset} and {subset} both express coset "
                    f"{label} but carry values {tuple(int(v) for v in prev_vec)}"
                    f" vs {tuple(int(v) for v in vec)}",
                    conflict=(prev_subset, subset),
                )
        else:
            assigned[label] = (vec, subset)
    if set(assigned) != {int(c) for c in mbar.elements}:
        raise BasisError("seeded commutators do not span M/R")

    # step 2: delta(m, x) for m in M/R and every x, via the G/M coordinates
    coords = _basis_coords(G, M, basis)[qr.section]  # (q, 3), coords mod M
    mlist = [int(c) for c in mbar.elements]
    mpos = {c: i for i, c in enumerate(mlist)}
    W0 = np.zeros((len(mlist), 3), dtype=np.int32)
    for label, (vec, _) in assigned.items():
        W0[mpos[label]] = vec
    W2 = (W0 @ coords.T.astype(np.int32)) % m  # (|M/R|, q)

    # step 3: transversal of M/R with free parameters
    qm2 = quotient(Ghat, mbar)
    T = qm2.section.astype(np.int32)
    n = len(T)
    tidx = qm2.coset_of.astype(np.int32)
    labels = np.arange(Ghat.order, dtype=np.int32)
    mpart = Ghat.mul[labels, Ghat.inv[T[tidx]]]
    tau = np.zeros((n, n), dtype=np.int32)
    for (i, j), val in (params.values or {}).items():
        if not (1 < i < j <= n):
            raise ValueError(
                f"free parameter position ({i},{j}) out of range; "
                f"need 1 < i < j <= {n}"
            )
        tau[i - 1, j - 1] = val % m
        tau[j - 1, i - 1] = (-val) % m

    mp = np.array([mpos[int(c)] for c in mpart], dtype=np.int32)
    A = W2[mp[:, None], T[tidx][None, :]]  # [g, g'] = delta(m_g, t_{g'})
    Dq = (A - A.T + tau[tidx[:, None], tidx[None, :]]) % m
    return Cocycle2(G, Z, R, _lift_values_from(qr, Dq))


def _lift_values_from(qr: QuotientMap, qvalues: np.ndarray) -> np.ndarray:
    cos = qr.coset_of
    return qvalues[np.ix_(cos, cos)]


def delta_construction_report(G: GroupTable, Z: CentralCyclic, R: Subgroup,
                              M: Subgroup, basis: StandardBasis,
                              delta: Cocycle2) -> Report:
    """Post-hoc facts the construction promises: delta([x,y],z) agrees
    with f everywhere, rad delta = R, and mul delta = M."""
    rep = Report("delta construction")
    f = build_f(G, M, Z, basis)
    w = first_violation(delta.values[G.comm_table] != f.values)
    rep.add("delta([x,y], z) = f(x,y,z) for all triples", w is None, w)
    rep.add("rad delta = R", radical(delta) == R)
    rep.add("mul delta = M", mul_part(delta) == M)
    return rep


# ---------------------------------------------------------------------------
# compatible parameter sets and mu


def default_param_set(G: GroupTable, Z: CentralCyclic, delta: Cocycle2,
                      frame: SetupFrame | None = None) -> ParamSet:
    """psi_k = delta(k, -), phi_i = delta(-, t_i), tau_ij = delta(t_i, t_j)."""
    frame = frame or setup_frame(G, Z, delta)
    Dq = _quotient_values(frame, delta)
    q = frame.qr.quotient.order
    psi = np.zeros((q, q), dtype=np.int16)
    psi[frame.nbar.elements, :] = Dq[frame.nbar.elements, :]
    phi = np.zeros((frame.n, q), dtype=np.int16)
    for i, t in enumerate(frame.T):
        phi[i, frame.nbar.elements] = Dq[frame.nbar.elements, t]
    tau = {(i + 1, j + 1): int(Dq[frame.T[i], frame.T[j]])
           for i in range(frame.n) for j in range(i, frame.n)}
    return ParamSet(psi, phi, tau)


def check_param_set(G: GroupTable, Z: CentralCyclic, delta: Cocycle2,
                    P: ParamSet, frame: SetupFrame | None = None) -> Report:
    """The five compatibility conditions, exhaustively."""
    frame = frame or setup_frame(G, Z, delta)
    rep = Report("compatible parameter set")
    Ghat = frame.qr.quotient
    Dq = _quotient_values(frame, delta)
    m = Z.m
    nelems = frame.nbar.elements

    rows = P.psi[nelems].astype(np.int32)
    lhs = rows[:, Ghat.mul]
    rhs = (rows[:, :, None] + rows[:, None, :]) % m
    w = first_violation(lhs != rhs)
    rep.add("psi_k is a homomorphism on G/R for every k",
            w is None,
            None if w is None else (int(nelems[w[0]]), w[1], w[2]))

    sub = P.psi[np.ix_(nelems, nelems)].astype(np.int32)
    dsub = Dq[np.ix_(nelems, nelems)].astype(np.int32)
    w = first_violation(sub.T != (dsub.T + sub) % m)
    rep.add("psi_k'(k) = delta(k',k) psi_k(k')",
            w is None,
            None if w is None else (int(nelems[w[1]]), int(nelems[w[0]])))

    phin = P.phi[:, nelems].astype(np.int32)
    # products of N/R elements relabeled into N/R positions
    posn = np.full(Ghat.order, -1, dtype=np.int32)
    posn[nelems] = np.arange(len(nelems), dtype=np.int32)
    nmul = posn[Ghat.mul[np.ix_(nelems, nelems)]]
    lhs = phin[:, nmul]
    rhs = (phin[:, :, None] + phin[:, None, :]) % m
    w = first_violation(lhs != rhs)
    rep.add("phi_i is a homomorphism on N/R for every i",
            w is None,
            None if w is None else (w[0] + 1, int(nelems[w[1]]), int(nelems[w[2]])))

    Tarr = np.asarray(frame.T, dtype=np.int32)
    w = first_violation(P.psi[np.ix_(nelems, Tarr)] != P.phi[:, nelems].T)
    rep.add("psi_k(t_i) = phi_i(k)",
            w is None,
            None if w is None else (int(nelems[w[0]]), w[1] + 1))

    missing = [(i, j) for i in range(1, frame.n + 1)
               for j in range(i, frame.n + 1) if (i, j) not in P.tau]
    bad_first = [i for i in range(1, frame.n + 1) if P.tau.get((1, i), 0) % m != 0]
    rep.add("tau defined for 1 <= i <= j with tau_1i = 1",
            not missing and not bad_first,
            tuple(missing[0]) if missing else
            ((1, bad_first[0]) if bad_first else None))
    return rep


def build_mu(G: GroupTable, Z: CentralCyclic, delta: Cocycle2, P: ParamSet,
             frame: SetupFrame | None = None) -> Mu:
    """Assemble mu from a compatible parameter set and verify, at the
    quotient level, that the defining lines are consistent and that the
    three loop-construction conditions hold."""
    frame = frame or setup_frame(G, Z, delta)
    Ghat = frame.qr.quotient
    q = Ghat.order
    m = Z.m
    Dq = _quotient_values(frame, delta)
    Tarr = np.asarray(frame.T, dtype=np.int32)
    n = frame.n

    mu_kt = P.psi[:, Tarr]  # [k, i] = mu(k, t_i) = phi_i(k) = psi_k(t_i)
    mu_tk = (Dq[Tarr, :].astype(np.int32) + mu_kt.T) % m  # [i, k] = mu(t_i, k)
    mu_tt = np.zeros((n, n), dtype=np.int32)
    for i in range(n):
        for j in range(i, n):
            mu_tt[i, j] = P.tau[(i + 1, j + 1)] % m
            if j > i:
                mu_tt[j, i] = (Dq[Tarr[j], Tarr[i]] + mu_tt[i, j]) % m

    k = frame.kpart
    t = frame.tidx
    Mq = (P.psi[np.ix_(k, k)].astype(np.int32)
          + mu_kt[k[:, None], t[None, :]]
          + mu_tk[t[:, None], k[None, :]]
          + mu_tt[t[:, None], t[None, :]]) % m

    # the defining lines must be reproduced on the assembled table
    nelems = frame.nbar.elements
    if not np.array_equal(Mq[np.ix_(nelems, nelems)],
                          P.psi[np.ix_(nelems, nelems)] % m):
        raise ValueError("mu assembly violates mu(k,k') = psi_k(k')")
    if not np.array_equal(Mq[np.ix_(nelems, Tarr)],
                          P.phi[:, nelems].T.astype(np.int32) % m):
        raise ValueError("mu assembly violates mu(k,t_i) = phi_i(k)")
    if not np.array_equal(Mq[np.ix_(Tarr, nelems)],
                          (Dq[np.ix_(Tarr, nelems)].astype(np.int32)
                           + Mq[np.ix_(nelems, Tarr)].T) % m):
        raise ValueError("mu assembly violates mu(t_i,k) = delta(t_i,k) mu(k,t_i)")
    if not np.array_equal(Mq[np.ix_(Tarr, Tarr)], mu_tt):
        raise ValueError("mu assembly violates the transversal lines")
    if (Mq[0, :] != 0).any() or (Mq[:, 0] != 0).any():
        raise ValueError("mu is not normalized")

    # quotient-level loop-construction conditions
    if not np.array_equal(Dq.astype(np.int32) % m, (Mq - Mq.T) % m):
        raise ValueError("mu does not induce delta via mu(x,y) mu(y,x)^-1")
    for slot in (1, 2):
        w = restricted_multiplicativity_witness(
            Ghat, Mq.astype(np.int16), m, frame.nbar.mask, slot)
        if w is not None:
            raise ValueError(f"mu fails multiplicativity near N/R at {w}")

    return Cocycle2(G, Z, frame.R, _lift_values_from(frame.qr, Mq))


def extract_param_set(G: GroupTable, Z: CentralCyclic, delta: Cocycle2,
                      mu: Mu, frame: SetupFrame | None = None) -> ParamSet:
    """Read (psi, phi, tau) back off a table mu satisfying the
    loop-construction conditions; build_mu of the result is mu again."""
    frame = frame or setup_frame(G, Z, delta)
    rep = check_mu_conditions(G, Z, delta, mu, frame.N)
    if not rep.passed:
        fail = rep.first_failure()
        raise ValueError(f"mu is incompatible: {fail.name} at {fail.witness}")
    Mq = _quotient_values(frame, mu)
    q = frame.qr.quotient.order
    nelems = frame.nbar.elements
    psi = np.zeros((q, q), dtype=np.int16)
    psi[nelems, :] = Mq[nelems, :]
    phi = np.zeros((frame.n, q), dtype=np.int16)
    for i, t in enumerate(frame.T):
        phi[i, nelems] = Mq[nelems, t]
    tau = {(i + 1, j + 1): int(Mq[frame.T[i], frame.T[j]])
           for i in range(frame.n) for j in range(i, frame.n)}
    return ParamSet(psi, phi, tau)


def check_mu_conditions(G: GroupTable, Z: CentralCyclic, delta: Cocycle2,
                        mu: Mu, N: Subgroup) -> Report:
    """The three defining conditions of mu against delta, at full G level."""
    rep = Report("mu conditions")
    m = Z.m
    D = delta.values.astype(np.int32)
    MG = mu.values.astype(np.int32)
    w = first_violation(D % m != (MG - MG.T) % m)
    rep.add("A1: delta(x,y) = mu(x,y) mu(y,x)^-1", w is None, w)
    w = restricted_multiplicativity_witness(G, mu.values, m, N.mask, 1)
    rep.add("A2: mu(xy,z) = mu(x,z) mu(y,z) when {x,y,z} meets N",
            w is None, w)
    w = restricted_multiplicativity_witness(G, mu.values, m, N.mask, 2)
    rep.add("A3: mu(x,yz) = mu(x,y) mu(x,z) when {x,y,z} meets N",
            w is None, w)
    return rep


def check_A(G: GroupTable, Z: CentralCyclic, R: Subgroup, N: Subgroup,
            mu: Mu, delta: Cocycle2) -> Report:
    """Top-level audit: the subgroup frame, normalization and coset
    constancy of mu, the three mu conditions, and the conjugation-balance
    identity for delta."""
    rep = Report("A conditions")
    rep.add("Z central", Z.Z <= center(G))
    rep.add("Z <= R", Z.Z <= R)
    rep.add("R <= N", R <= N)
    rep.add("R normal", is_normal(G, R))
    rep.add("N normal", is_normal(G, N))
    rep.add("G' <= N", derived(G) <= N)
    qr = quotient(G, R)
    rep.add("N/R central in G/R", qr.image_of(N) <= center(qr.quotient))

    for c in mu.wellformedness_report().checks:
        rep.add("mu " + c.name, c.passed, c.witness)
    for c in check_mu_conditions(G, Z, delta, mu, N).checks:
        rep.add(c.name, c.passed, c.witness)
    w = condition_b4_witness(G, delta)
    rep.add("A4: z^{yx} delta([z,y],x) = z^{xy} delta([z,x],y)", w is None, w)
    return rep


# ---------------------------------------------------------------------------
# randomized compatible parameter sets (seed-fixed round-trip fodder)


def _involution_characters(Ghat: GroupTable) -> list[np.ndarray]:
    """All homomorphisms G/R -> {0,1} (exponents of the involution),
    via the largest elementary abelian 2-quotient."""
    sq = Ghat.mul[np.arange(Ghat.order), np.arange(Ghat.order)]
    gens = set(int(s) for s in sq) | set(int(c) for c in np.unique(Ghat.comm_table))
    K = closure(Ghat, [g for g in gens if g != 0])
    qv = quotient(Ghat, K)
    V = qv.quotient
    basis: list[int] = []
    span = {0}
    for v in range(V.order):
        if v not in span:
            basis.append(v)
            span = _span_all(V, basis)
    coords = np.zeros((V.order, len(basis)), dtype=np.int64)
    for bits in range(1 << len(basis)):
        x = 0
        for b, g in enumerate(basis):
            if bits >> b & 1:
                x = int(V.mul[x, g])
        coords[x] = [(bits >> b) & 1 for b in range(len(basis))]
    chars = []
    for w in range(1 << len(basis)):
        wvec = np.array([(w >> b) & 1 for b in range(len(basis))], dtype=np.int64)
        chi = (coords @ wvec) % 2
        chars.append(chi[qv.coset_of].astype(np.int16))
    return chars


def _span_all(Q: GroupTable, labels) -> set[int]:
    out = {0}
    changed = True
    while changed:
        changed = False
        for a in list(out):
            for g in labels:
                b = int(Q.mul[a, g])
                if b not in out:
                    out.add(b)
                    changed = True
    return out


def random_compatible_params(G: GroupTable, Z: CentralCyclic, delta: Cocycle2,
                             rng, frame: SetupFrame | None = None) -> ParamSet:
    """A random compatible parameter set: the default one twisted by a
    symmetric bilinear term gamma(k) gamma(x) (gamma a character) and by
    arbitrary tau values at the free positions."""
    frame = frame or setup_frame(G, Z, delta)
    P = default_param_set(G, Z, delta, frame)
    m = Z.m
    chars = _involution_characters(frame.qr.quotient)
    gamma = chars[rng.randrange(len(chars))].astype(np.int32) * (m // 2)
    psi = P.psi.astype(np.int32)
    nelems = frame.nbar.elements
    psi[nelems, :] = (psi[nelems, :] + gamma[nelems, None] * gamma[None, :]) % m
    phi = P.phi.astype(np.int32)
    Tarr = np.asarray(frame.T, dtype=np.int32)
    phi[:, nelems] = (phi[:, nelems]
                      + gamma[Tarr][:, None] * gamma[nelems][None, :]) % m
    tau = dict(P.tau)
    for i in range(2, frame.n + 1):
        for j in range(i, frame.n + 1):
            tau[(i, j)] = rng.randrange(m)
    return ParamSet(psi.astype(np.int16), phi.astype(np.int16), tau)

"""End-to-end runs: frame resolution, the construction, the verifier
battery, and machine-readable run reports.

A frame spec names the subgroups and basis by generator words:

    Z = g7; R = g5,g6,g7; M = derived; basis = g1,g2,g2*g3

A parameter file holds lines ``tau i j e`` (free delta values for
1 < i < j, CPS constants for i = j), ``psi k x e`` and ``phi i k e``
(overrides of the default compatible parameter set, quotient labels).
A sweep space file additionally allows ``vary tau i j`` or
``vary tau i j in 0,1`` lines.
"""

from __future__ import annotations

import hashlib
import re
import time
from dataclasses import dataclass, field

import numpy as np

from . import construct as cs
from . import loops as lp
from .cocycle import (
    CentralCyclic,
    Cocycle2,
    check_B,
    check_fgh,
    check_inclusion_chain,
    classify_scenario,
    is_nontrivial,
)
from .errors import CsloopsError, FrameError
from .groupalg import (
    GroupTable,
    Subgroup,
    abelian_invariants,
    closure,
    derived,
    is_abelian,
)
from .pcgroup import (
    PcPresentation,
    build_group,
    generator_index,
    index_vector,
    parse_pc,
)
from .report import Report


# ---------------------------------------------------------------------------
# words, frames, parameter files


def word_to_element(G: GroupTable, pres: PcPresentation, word: str) -> int:
    """Evaluate a product of generators like ``g2*g3`` to an element index."""
    word = word.strip()
    if word == "1":
        return 0
    x = 0
    for part in word.split("*"):
        m = re.fullmatch(r"g(\d+)", part.strip())
        if not m:
            raise FrameError(f"cannot parse generator word {word!r}")
        i = int(m.group(1))
        if not 1 <= i <= pres.ngens:
            raise FrameError(f"generator g{i} out of range in {word!r}")
        x = int(G.mul[x, generator_index(pres, i)])
    return x


def element_word(pres: PcPresentation, idx: int) -> str:
    """Canonical word of an element index, e.g. ``g4*g7`` (identity: 1)."""
    vec = index_vector(pres, idx)
    parts = []
    for i, a in enumerate(vec, start=1):
        parts.extend([f"g{i}"] * a)
    return "*".join(parts) if parts else "1"


@dataclass
class FrameSpec:
    z_words: list[str]
    r_words: list[str]
    m_words: list[str] | None  # None means "derived"
    basis_words: list[str] | None  # None means "auto"
    text: str = ""


def parse_frame_spec(text: str) -> FrameSpec:
    parts: dict[str, str] = {}
    for chunk in text.replace("\n", ";").split(";"):
        chunk = chunk.split("#", 1)[0].strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise FrameError(f"frame clause {chunk!r} is not 'key = value'")
        key, val = (s.strip() for s in chunk.split("=", 1))
        key = key.lower()
        if key in parts:
            raise FrameError(f"duplicate frame clause {key!r}")
        parts[key] = val
    for needed in ("z", "r", "m"):
        if needed not in parts:
            raise FrameError(f"frame spec is missing '{needed.upper()} = ...'")
    words = lambda v: [w.strip() for w in v.split(",") if w.strip()]
    m_val = parts["m"].strip().lower()
    basis_val = parts.get("basis", "auto").strip()
    return FrameSpec(
        z_words=words(parts["z"]),
        r_words=words(parts["r"]),
        m_words=None if m_val == "derived" else words(parts["m"]),
        basis_words=None if basis_val.lower() == "auto" else words(basis_val),
        text=text.strip(),
    )


@dataclass
class ResolvedFrame:
    Z: CentralCyclic
    R: Subgroup
    M: Subgroup
    basis_elems: tuple[int, int, int] | None
    scenario_hint: str

    def describe(self, pres: PcPresentation) -> dict[str, str]:
        out = {
            "Z": element_word(pres, self.Z.gen),
            "R": ",".join(element_word(pres, g) for g in self.R.gens),
            "M": ",".join(element_word(pres, g) for g in self.M.gens),
        }
        if self.basis_elems is not None:
            out["basis"] = ",".join(element_word(pres, e) for e in self.basis_elems)
        return out


def resolve_frame(G: GroupTable, pres: PcPresentation,
                  spec: FrameSpec) -> ResolvedFrame:
    zsub = closure(G, [word_to_element(G, pres, w) for w in spec.z_words])
    Z = CentralCyclic.from_subgroup(G, zsub)
    R = closure(G, [word_to_element(G, pres, w) for w in spec.r_words])
    if spec.m_words is None:
        M = derived(G)
    else:
        M = closure(G, [word_to_element(G, pres, w) for w in spec.m_words])
    if not (Z.Z <= R and R <= M):
        raise FrameError("frame must satisfy Z <= R <= M")
    basis = None
    if spec.basis_words is not None:
        if len(spec.basis_words) != 3:
            raise FrameError("basis must name exactly three elements")
        basis = tuple(word_to_element(G, pres, w) for w in spec.basis_words)
    hint = "iii" if R.order > Z.Z.order else "ii"
    return ResolvedFrame(Z, R, M, basis, hint)


@dataclass
class ParamFile:
    tau: dict[tuple[int, int], int] = field(default_factory=dict)
    psi: dict[tuple[int, int], int] = field(default_factory=dict)
    phi: dict[tuple[int, int], int] = field(default_factory=dict)
    vary: list[tuple[tuple[int, int], list[int]]] = field(default_factory=list)


def parse_params(text: str, zorder: int | None = None) -> ParamFile:
    out = ParamFile()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "tau" and len(parts) == 4:
                out.tau[(int(parts[1]), int(parts[2]))] = int(parts[3])
            elif parts[0] == "psi" and len(parts) == 4:
                out.psi[(int(parts[1]), int(parts[2]))] = int(parts[3])
            elif parts[0] == "phi" and len(parts) == 4:
                out.phi[(int(parts[1]), int(parts[2]))] = int(parts[3])
            elif parts[0] == "vary" and parts[1] == "tau":
                pos = (int(parts[2]), int(parts[3]))
                if len(parts) > 4:
                    if parts[4] != "in":
                        raise ValueError
                    rest = " ".join(parts[5:])
                    vals = [int(v) for v in rest.split(",") if v.strip() != ""]
                else:
                    if zorder is None:
                        raise ValueError("vary without explicit values needs |Z|")
                    vals = list(range(zorder))
                out.vary.append((pos, vals))
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise ValueError(f"parameter line {lineno}: cannot parse {raw!r}")
    return out


# ---------------------------------------------------------------------------
# cocycle table files


def cocycle_to_text(table: Cocycle2, pres: PcPresentation) -> str:
    gens = ",".join(element_word(pres, g) for g in table.modulus.gens) or "1"
    lines = [f"cocycle {table.parent.order} {table.Z.m} modulus={gens}"]
    xs, ys = np.nonzero(table.values)
    for x, y in zip(xs, ys):
        lines.append(f"{x} {y} {int(table.values[x, y])}")
    return "\n".join(lines) + "\n"


def cocycle_from_text(text: str, G: GroupTable, pres: PcPresentation,
                      Z: CentralCyclic) -> Cocycle2:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty cocycle file")
    m = re.fullmatch(r"cocycle\s+(\d+)\s+(\d+)\s+modulus=(\S+)", lines[0])
    if not m:
        raise ValueError("bad cocycle header; expected "
                         "'cocycle |G| |Z| modulus=<gens>'")
    n, zm = int(m.group(1)), int(m.group(2))
    if n != G.order:
        raise ValueError(f"cocycle table is for order {n}, group has {G.order}")
    if zm != Z.m:
        raise ValueError(f"cocycle values are mod {zm}, Z has order {Z.m}")
    mod_words = [w for w in m.group(3).split(",") if w]
    modulus = closure(G, [word_to_element(G, pres, w) for w in mod_words])
    values = np.zeros((n, n), dtype=np.int16)
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"bad cocycle row {ln!r}")
        x, y, e = int(parts[0]), int(parts[1]), int(parts[2])
        if not (0 <= x < n and 0 <= y < n):
            raise ValueError(f"cocycle row {ln!r} out of range")
        values[x, y] = e % Z.m
    return Cocycle2(G, Z, modulus, values)


# ---------------------------------------------------------------------------
# run reports


@dataclass
class RunReport:
    digest: str
    frame_desc: dict[str, str]
    scenario: str | None = None
    reports: list[Report] = field(default_factory=list)
    loop_stats: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    error_stage: str | None = None
    error_message: str | None = None

    @property
    def passed(self) -> bool:
        return self.error_stage is None and all(r.passed for r in self.reports)

    def first_failing_stage(self) -> str | None:
        if self.error_stage:
            return self.error_stage
        stage_of = {
            "cocycle wellformedness": "B",
            "B conditions": "B",
            "delta construction": "B",
            "delta modulus": "B",
            "f/g/h identities": "B",
            "inclusion chain": "B",
            "scenario classification": "B",
            "compatible parameter set": "A",
            "A conditions": "A",
            "mu conditions": "A",
            "loop facts": "loop",
            "conjugation-squared identity": "loop",
        }
        for r in self.reports:
            if not r.passed:
                return stage_of.get(r.title, "loop")
        return None

    def to_text(self) -> str:
        lines = [f"input sha256: {self.digest}"]
        for k, v in self.frame_desc.items():
            lines.append(f"frame {k} = {v}")
        if self.scenario is not None:
            lines.append(f"scenario: {self.scenario}")
        for k, v in sorted(self.loop_stats.items()):
            lines.append(f"loop {k} = {v}")
        for r in self.reports:
            lines.append(str(r))
        for k, v in sorted(self.timings.items()):
            lines.append(f"time {k} = {v:.3f} s")
        if self.error_stage:
            lines.append(f"ERROR at stage {self.error_stage}: {self.error_message}")
        lines.append("RESULT: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"

    def to_kv(self) -> str:
        pairs = [("input.sha256", self.digest)]
        pairs += [(f"frame.{k}", v) for k, v in self.frame_desc.items()]
        if self.scenario is not None:
            pairs.append(("scenario", self.scenario))
        for k, v in self.loop_stats.items():
            if isinstance(v, (list, tuple)):
                v = ",".join(str(x) for x in v)
            pairs.append((f"loop.{k}", str(v)))
        for r in self.reports:
            key = re.sub(r"[^A-Za-z0-9]+", "_", r.title).strip("_")
            pairs.append((f"check.{key}.passed", str(r.passed).lower()))
            for c in r.checks:
                ckey = re.sub(r"[^A-Za-z0-9]+", "_", c.name).strip("_")
                pairs.append((f"check.{key}.{ckey}",
                              "pass" if c.passed else "fail"))
        if self.error_stage:
            pairs.append(("error.stage", self.error_stage))
            pairs.append(("error.message", str(self.error_message)))
        pairs.append(("result", "pass" if self.passed else "fail"))
        pairs.sort()
        pairs += sorted((f"time.{k}", f"{v:.3f}") for k, v in self.timings.items())
        return "\n".join(f"{k} = {v}" for k, v in pairs) + "\n"


@dataclass
class Artifacts:
    pres: PcPresentation
    G: GroupTable
    frame: ResolvedFrame
    basis: cs.StandardBasis | None = None
    delta: Cocycle2 | None = None
    mu: Cocycle2 | None = None
    loop: lp.LoopTable | None = None


def _digest(*texts: str) -> str:
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode())
        h.update(b"\x00")
    return h.hexdigest()


def _loop_facts(Q: lp.LoopTable, nontrivial: bool) -> tuple[Report, dict]:
    rep = Report("loop facts")
    stats: dict = {"order": Q.order}
    cls = lp.nilpotency_class_loop(Q)
    stats["class"] = cls
    rep.add("nilpotency class at most 3", cls is not None and cls <= 3)
    rep.add("class 3 exactly when the setup is nontrivial",
            (cls == 3) == nontrivial)
    I = lp.inn(Q)
    rep.add("inner mapping group abelian", is_abelian(I))
    inv = abelian_invariants(I) if is_abelian(I) else None
    stats["inn_invariants"] = inv
    mltord = lp.mlt(Q).order()
    stats["mlt_order"] = mltord
    rep.add("|Mlt Q| = |Q| * |Inn Q|", mltord == Q.order * I.order)
    A = lp.associator_subloop(Q)
    stats["assoc_order"] = A.order
    K = lp.quotient_loop(Q, A)
    rep.add("Q/A(Q) is a group", K.is_associative())
    return rep, stats


def build_run(pres_text: str, frame_text: str, params_text: str = "",
              full_battery: bool = True) -> tuple[RunReport, Artifacts]:
    """Run the whole pipeline; verifier failures land in the report,
    structural errors set the report's error stage."""
    report = RunReport(_digest(pres_text, frame_text, params_text or ""), {})
    t_all = time.time()
    artifacts = None
    try:
        t0 = time.time()
        pres = parse_pc(pres_text)
        G = build_group(pres)
        report.timings["group"] = time.time() - t0

        frame = resolve_frame(G, pres, parse_frame_spec(frame_text))
        report.frame_desc = frame.describe(pres)
        artifacts = Artifacts(pres, G, frame)
        pf = parse_params(params_text or "", zorder=frame.Z.m)
        Z, R, M = frame.Z, frame.R, frame.M

        t0 = time.time()
        basis = cs.find_standard_basis(G, Z, R, M, frame.scenario_hint,
                                       basis=frame.basis_elems)
        artifacts.basis = basis
        report.frame_desc["basis"] = ",".join(
            element_word(pres, e) for e in basis.triple)
        free = cs.FreeDeltaParams(
            {k: v for k, v in pf.tau.items() if k[0] < k[1]})
        delta = cs.build_delta(G, Z, R, M, basis, free)
        artifacts.delta = delta
        report.timings["delta"] = time.time() - t0

        t0 = time.time()
        report.reports.append(delta.wellformedness_report())
        report.reports.append(cs.delta_construction_report(G, Z, R, M, basis, delta))
        report.reports.append(check_B(G, Z, delta))
        nontriv, _ = is_nontrivial(delta)
        if full_battery:
            report.reports.append(check_fgh(G, Z, delta))
            report.reports.append(check_inclusion_chain(G, Z, delta))
        if G.order == 128 and nontriv:
            clsf = classify_scenario(G, Z, delta)
            report.scenario = clsf.scenario
            report.reports.append(clsf.report)
        report.timings["delta_checks"] = time.time() - t0

        t0 = time.time()
        sframe = cs.setup_frame(G, Z, delta, R=R)
        P = cs.default_param_set(G, Z, delta, sframe)
        _apply_cps_overrides(P, pf, sframe)
        pset_report = cs.check_param_set(G, Z, delta, P, sframe)
        report.reports.append(pset_report)
        if pset_report.passed:
            mu = cs.build_mu(G, Z, delta, P, sframe)
            artifacts.mu = mu
            report.reports.append(cs.check_A(G, Z, sframe.R, sframe.N, mu, delta))
        report.timings["mu"] = time.time() - t0

        if pset_report.passed:
            t0 = time.time()
            Q = lp.loop_from_mu(G, mu)
            artifacts.loop = Q
            facts, stats = _loop_facts(Q, nontriv)
            report.reports.append(facts)
            report.loop_stats = stats
            if full_battery and Z.Z.order == 2:
                f = cs.build_f(G, M, Z, basis)
                report.reports.append(lp.check_T2(Q, G, mu, f))
            report.timings["loop"] = time.time() - t0
    except CsloopsError as exc:
        report.error_stage = exc.stage
        report.error_message = str(exc)
    report.timings["total"] = time.time() - t_all
    return report, artifacts


def _apply_cps_overrides(P: cs.ParamSet, pf: ParamFile, sframe: cs.SetupFrame):
    for (i, j), v in pf.tau.items():
        if i == j:
            if not 2 <= i <= sframe.n:
                raise ValueError(f"tau position ({i},{i}) out of range")
            P.tau[(i, j)] = v % sframe.Z.m
        elif i == 1:
            raise ValueError("tau_1j is fixed to the identity")
        # i < j free delta parameters already consumed by build_delta; the
        # CPS tau then inherits them through delta itself
    for (k, x), v in pf.psi.items():
        P.psi[k, x] = v % sframe.Z.m
    for (i, k), v in pf.phi.items():
        if not 1 <= i <= sframe.n:
            raise ValueError(f"phi position {i} out of range")
        P.phi[i - 1, k] = v % sframe.Z.m


def verify_run(pres_text: str, frame_text: str, table_text: str,
               kind: str) -> RunReport:
    """Verify a delta or mu table file against a presentation and frame."""
    report = RunReport(_digest(pres_text, frame_text, table_text), {})
    t_all = time.time()
    try:
        pres = parse_pc(pres_text)
        G = build_group(pres)
        frame = resolve_frame(G, pres, parse_frame_spec(frame_text))
        report.frame_desc = frame.describe(pres)
        Z = frame.Z
        table = cocycle_from_text(table_text, G, pres, Z)
        report.reports.append(table.wellformedness_report())
        if kind == "delta":
            delta = table
            rep = Report("delta modulus")
            rep.add("modulus equals frame R", delta.modulus == frame.R)
            report.reports.append(rep)
            report.reports.append(check_B(G, Z, delta))
            report.reports.append(check_fgh(G, Z, delta))
            report.reports.append(check_inclusion_chain(G, Z, delta))
            nontriv, _ = is_nontrivial(delta)
            if G.order == 128 and nontriv:
                clsf = classify_scenario(G, Z, delta)
                report.scenario = clsf.scenario
                report.reports.append(clsf.report)
        elif kind == "mu":
            mu = table
            m = Z.m
            dvals = (mu.values.astype(np.int32) - mu.values.T) % m
            delta = Cocycle2(G, Z, mu.modulus, dvals)
            R = frame.R
            N = closure(G, list(derived(G).gens) + list(R.gens))
            report.reports.append(cs.check_A(G, Z, R, N, mu, delta))
            Q = lp.loop_from_mu(G, mu)
            nontriv, _ = is_nontrivial(delta)
            facts, stats = _loop_facts(Q, nontriv)
            report.reports.append(facts)
            report.loop_stats = stats
            if G.order == 128 and nontriv:
                clsf = classify_scenario(G, Z, delta)
                report.scenario = clsf.scenario
                report.reports.append(clsf.report)
        else:
            raise ValueError(f"unknown table kind {kind!r}")
    except CsloopsError as exc:
        report.error_stage = exc.stage
        report.error_message = str(exc)
    report.timings["total"] = time.time() - t_all
    return report


# ---------------------------------------------------------------------------
# parameter sweeps


def sweep_vectors(pf: ParamFile, budget: int):
    """Enumerate parameter assignments in lexicographic rank order."""
    count = 1
    for _, vals in pf.vary:
        count *= len(vals)
    if count > budget:
        raise ValueError(f"parameter space of size {count} exceeds budget {budget}")
    vectors = []

    def rec(i, acc):
        if i == len(pf.vary):
            vectors.append(dict(acc))
            return
        (pos, vals) = pf.vary[i]
        for v in vals:
            rec(i + 1, acc + [(pos, v)])

    rec(0, [])
    return vectors


def _sweep_row(args):
    pres_text, frame_text, base_lines, vec = args
    lines = list(base_lines)
    for (i, j), v in vec.items():
        lines.append(f"tau {i} {j} {v}")
    rep, _ = build_run(pres_text, frame_text, "\n".join(lines),
                       full_battery=False)
    return rep


def sweep_run(pres_text: str, frame_text: str, space_text: str,
              budget: int = 4096, jobs: int = 1):
    """One reduced-battery run per parameter vector, plus summary buckets
    keyed by (scenario, Inn invariants, |Mlt|, |A(Q)|)."""
    probe = parse_frame_spec(frame_text)
    pres = parse_pc(pres_text)
    G = build_group(pres)
    frame = resolve_frame(G, pres, probe)
    pf = parse_params(space_text, zorder=frame.Z.m)
    base_lines = [f"tau {i} {j} {v}" for (i, j), v in pf.tau.items()]
    base_lines += [f"psi {k} {x} {v}" for (k, x), v in pf.psi.items()]
    base_lines += [f"phi {i} {k} {v}" for (i, k), v in pf.phi.items()]
    vectors = sweep_vectors(pf, budget)
    work = [(pres_text, frame_text, base_lines, vec) for vec in vectors]
    if jobs > 1 and len(work) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row, work))
    else:
        rows = [_sweep_row(w) for w in work]
    summary: dict[tuple, int] = {}
    for rep in rows:
        inv = rep.loop_stats.get("inn_invariants")
        key = (rep.scenario, tuple(inv) if inv else None,
               rep.loop_stats.get("mlt_order"), rep.loop_stats.get("assoc_order"))
        summary[key] = summary.get(key, 0) + 1
    return vectors, rows, summary

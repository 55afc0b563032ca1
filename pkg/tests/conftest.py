"""Shared fixtures: the two bundled order-128 setups, built once per
session with their full verifier batteries, plus small helper groups."""

import time
from dataclasses import dataclass, field

import pytest

from csloops import cocycle as cc
from csloops import construct as cs
from csloops import groupalg as ga
from csloops import loops as lp
from csloops import pcgroup as pc
from csloops.pipeline import parse_frame_spec, resolve_frame


def bundled_text(name: str) -> str:
    from csloops import bundled_data_path

    return bundled_data_path(name).read_text()


@dataclass
class GoldenSetup:
    name: str
    pres: pc.PcPresentation
    G: ga.GroupTable
    gen: dict  # 1-based generator -> element index
    Z: cc.CentralCyclic
    R: ga.Subgroup
    M: ga.Subgroup
    basis: cs.StandardBasis
    delta: cc.Cocycle2
    f: cc.TriMap
    sframe: cs.SetupFrame
    P: cs.ParamSet
    mu: cc.Cocycle2
    loop: lp.LoopTable
    scenario: str
    reports: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)


def _build_golden(name: str) -> GoldenSetup:
    pres = pc.parse_pc(bundled_text(f"{name}.pc"))
    G = pc.build_group(pres)
    gen = {i: pc.generator_index(pres, i) for i in range(1, pres.ngens + 1)}
    frame = resolve_frame(G, pres, parse_frame_spec(bundled_text(f"{name}.frame")))
    Z, R, M = frame.Z, frame.R, frame.M
    basis = cs.find_standard_basis(G, Z, R, M, frame.scenario_hint,
                                   basis=frame.basis_elems)
    delta = cs.build_delta(G, Z, R, M, basis)
    f = cs.build_f(G, M, Z, basis)
    sframe = cs.setup_frame(G, Z, delta, R=R)
    P = cs.default_param_set(G, Z, delta, sframe)
    mu = cs.build_mu(G, Z, delta, P, sframe)
    loop = lp.loop_from_mu(G, mu)

    reports = {}
    timings = {}

    def timed(key, fn):
        t0 = time.time()
        reports[key] = fn()
        timings[key] = time.time() - t0

    timed("wellformed", delta.wellformedness_report)
    timed("construction",
          lambda: cs.delta_construction_report(G, Z, R, M, basis, delta))
    timed("B", lambda: cc.check_B(G, Z, delta))
    timed("fgh", lambda: cc.check_fgh(G, Z, delta))
    timed("chain", lambda: cc.check_inclusion_chain(G, Z, delta))
    timed("params", lambda: cs.check_param_set(G, Z, delta, P, sframe))
    timed("A", lambda: cs.check_A(G, Z, sframe.R, sframe.N, mu, delta))
    timed("T2", lambda: lp.check_T2(loop, G, mu, f))
    clsf = cc.classify_scenario(G, Z, delta)
    reports["classification"] = clsf.report
    return GoldenSetup(name, pres, G, gen, Z, R, M, basis, delta, f, sframe,
                       P, mu, loop, clsf.scenario, reports, timings)


@pytest.fixture(scope="session")
def g731():
    return _build_golden("g128_731")


@pytest.fixture(scope="session")
def g742():
    return _build_golden("g128_742")


D4_PRES = """
gens 3
g1^2 = 1
g2^2 = g3
g3^2 = 1
[g2,g1] = g3
"""

C8_PRES = """
gens 3
g1^2 = g2
g2^2 = g3
g3^2 = 1
"""

ELEM8_PRES = "gens 3\n"

# order 32, class 2, H/Z(H) elementary abelian of order 8, |H'| = 4
H32_PRES = """
gens 5
[g2,g1] = g4
[g3,g1] = g4*g5
[g3,g2] = g5
"""


def build_from_text(text: str):
    pres = pc.parse_pc(text)
    return pres, pc.build_group(pres)


@pytest.fixture(scope="session")
def d4():
    return build_from_text(D4_PRES)


@pytest.fixture(scope="session")
def c8():
    return build_from_text(C8_PRES)


@pytest.fixture(scope="session")
def elem8():
    return build_from_text(ELEM8_PRES)


@pytest.fixture(scope="session")
def h32():
    return build_from_text(H32_PRES)


def trivial_cocycle(G, Z):
    import numpy as np

    return cc.Cocycle2(G, Z, G.whole(), np.zeros((G.order, G.order), dtype=np.int16))

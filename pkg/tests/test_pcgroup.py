"""Presentation parsing, collection, and group materialization."""

import random

import numpy as np
import pytest

from csloops import groupalg as ga
from csloops import pcgroup as pc
from csloops.errors import InconsistentPresentationError, PresentationError

from conftest import C8_PRES, D4_PRES, ELEM8_PRES, bundled_text


def vec(pres, **exps):
    out = [0] * pres.ngens
    for name, e in exps.items():
        out[int(name[1:]) - 1] = e
    return tuple(out)


class TestParse:
    def test_bundled_731(self):
        pres = pc.parse_pc(bundled_text("g128_731.pc"))
        assert pres.ngens == 7
        assert pres.rel_orders == (2,) * 7
        assert pres.power_rhs[4] == vec(pres, g7=1)
        assert pres.comm_rhs[(2, 1)] == vec(pres, g4=1)
        assert len(pres.power_rhs) + len(pres.comm_rhs) == 12
        assert pres.order == 128

    def test_bundled_742(self):
        pres = pc.parse_pc(bundled_text("g128_742.pc"))
        assert pres.ngens == 7
        assert pres.comm_rhs[(3, 2)] == vec(pres, g6=1)
        assert pres.power_rhs[4] == vec(pres, g7=1)
        assert len(pres.power_rhs) + len(pres.comm_rhs) == 21

    def test_single_generator(self):
        pres = pc.parse_pc("gens 1\ng1^2 = 1\n")
        assert pres.ngens == 1
        assert pres.order == 2

    def test_omitted_relations_default_to_identity(self):
        pres = pc.parse_pc(ELEM8_PRES)
        assert pres.power_rhs == {} and pres.comm_rhs == {}
        assert pres.order == 8

    def test_comments_and_orders_line(self):
        pres = pc.parse_pc("# c\ngens 2\norders 3 3\n[g2,g1] = 1  # t\n")
        assert pres.rel_orders == (3, 3)
        assert pres.order == 9

    @pytest.mark.parametrize("text,fragment", [
        ("gens 2\ng1*2 = 1\n", "relation"),
        ("nonsense\n", "gens"),
        ("gens 2\ng1^3 = 1\n", "order"),
        ("gens 2\n[g1,g2] = 1\n", "j > i"),
        ("gens 2\n[g2,g1] = g2\n", "indices > 2"),
        ("gens 3\ng1^2 = g1\n", "indices > 1"),
        ("gens 2\ng1^2 = 1\ng1^2 = g2\n", "duplicate"),
        ("gens 3\ng1^2 = g3*g2\n", "increasing"),
    ])
    def test_errors_carry_line_numbers(self, text, fragment):
        with pytest.raises(PresentationError) as err:
            pc.parse_pc(text)
        assert "line" in str(err.value)
        assert fragment in str(err.value)


class TestCollect:
    def test_single_swap_applies_commutator(self):
        # [g2,g1] = g4, so g2 g1 collects to g1 g2 g4
        pres = pc.parse_pc(bundled_text("g128_731.pc"))
        got = pc.collect(pres, pres.generator(2), pres.generator(1))
        assert got == (1, 1, 0, 1, 0, 0, 0)

    def test_identity_law(self):
        pres = pc.parse_pc(bundled_text("g128_731.pc"))
        rng = random.Random(5)
        for _ in range(20):
            v = pc.index_vector(pres, rng.randrange(pres.order))
            assert pc.collect(pres, pres.identity(), v) == v
            assert pc.collect(pres, v, pres.identity()) == v

    def test_power_relation(self):
        pres = pc.parse_pc(bundled_text("g128_731.pc"))
        assert pc.collect(pres, pres.generator(4), pres.generator(4)) \
            == pres.generator(7)

    def test_collect_matches_table(self):
        # chained table assembly agrees with direct two-word collection
        pres = pc.parse_pc(bundled_text("g128_731.pc"))
        G = pc.build_group(pres)
        rng = random.Random(11)
        for _ in range(300):
            x, y = rng.randrange(128), rng.randrange(128)
            prod = pc.collect(pres, pc.index_vector(pres, x),
                              pc.index_vector(pres, y))
            assert pc.vector_index(pres, prod) == G.mul[x, y]

    def test_collect_associative_small_group_exhaustive(self):
        pres = pc.parse_pc(D4_PRES)
        vecs = [pc.index_vector(pres, i) for i in range(pres.order)]
        for u in vecs:
            for v in vecs:
                uv = pc.collect(pres, u, v)
                for w in vecs:
                    assert pc.collect(pres, uv, w) \
                        == pc.collect(pres, u, pc.collect(pres, v, w))


class TestBuildGroup:
    def test_golden_731_structure(self):
        pres = pc.parse_pc(bundled_text("g128_731.pc"))
        G = pc.build_group(pres)
        assert G.order == 128
        assert ga.nilpotency_class_group(G) == 3
        assert ga.center(G).order == 8

    def test_golden_742_derived(self):
        pres = pc.parse_pc(bundled_text("g128_742.pc"))
        G = pc.build_group(pres)
        gi = [pc.generator_index(pres, i) for i in range(1, 8)]
        Gp = ga.derived(G)
        assert Gp.order == 16
        assert Gp == ga.closure(G, gi[3:])
        assert ga.nilpotency_class_group(G) == 3

    def test_trivial_relations_elementary_abelian(self):
        pres = pc.parse_pc(ELEM8_PRES)
        G = pc.build_group(pres)
        assert G.order == 8
        assert ga.is_elementary_abelian(G)

    def test_group_axioms_orders_up_to_256(self):
        for text in (D4_PRES, C8_PRES, ELEM8_PRES,
                     bundled_text("g128_731.pc"), bundled_text("g128_742.pc")):
            G = pc.build_group(pc.parse_pc(text))
            G.check_axioms(assoc=True)

    def test_order_is_product_of_rel_orders(self):
        pres = pc.parse_pc("gens 2\norders 3 2\n[g2,g1] = 1\n")
        assert pc.build_group(pres).order == 6

    def test_inconsistent_presentation_detected(self):
        # g2 = g1^2 must be central, but [g2,g1] = g3 forces otherwise
        text = "gens 3\ng1^2 = g2\ng2^2 = g3\n[g2,g1] = g3\n"
        with pytest.raises(InconsistentPresentationError):
            pc.build_group(pc.parse_pc(text))

    def test_lexicographic_indexing(self):
        pres = pc.parse_pc(bundled_text("g128_731.pc"))
        assert pc.generator_index(pres, 1) == 64
        assert pc.generator_index(pres, 7) == 1
        for idx in (0, 1, 37, 127):
            assert pc.vector_index(pres, pc.index_vector(pres, idx)) == idx

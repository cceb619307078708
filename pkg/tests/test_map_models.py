"""Branch structure, cylinders, itineraries, contraction metadata."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from schmidtlab.intervals import Interval
from schmidtlab.map_models import (
    CantorComplementMap,
    GaussMap,
    IntegerBaseMap,
    NoExpansion,
    PathologicalMap,
    check_condition_ii,
    gauss_two_step_expansion_check,
    model_from_spec,
)
from schmidtlab.numeric import scalar_compare

UNIT = Interval(Fraction(0), Fraction(1))


class TestEncode:
    def test_base3_example(self, f3):
        assert f3.encode(Fraction(5, 9), 2) == (1, 2)

    def test_gauss_terminating_orbit(self, gauss):
        got = gauss.encode(Fraction(2, 5), 3)
        assert isinstance(got, NoExpansion)
        assert got.digits == (2, 2)

    def test_gauss_fixed_point(self, gauss, inverse_golden_field):
        x = inverse_golden_field.generator()
        assert gauss.encode(x, 4) == (1, 1, 1, 1)

    @given(st.fractions(min_value=0, max_value=1, max_denominator=512).filter(lambda q: q < 1))
    @settings(max_examples=80, deadline=None)
    def test_encode_cylinder_consistency_base2(self, f2, x):
        word = f2.encode(x, 6)
        cyl = f2.cylinder(word)
        assert cyl.interval.contains_point(x)

    @given(st.fractions(min_value=0, max_value=1, max_denominator=997).filter(lambda q: 0 < q < 1))
    @settings(max_examples=80, deadline=None)
    def test_encode_cylinder_consistency_gauss(self, gauss, x):
        word = gauss.encode(x, 5)
        if isinstance(word, NoExpansion):
            word = word.digits
        if word:
            assert gauss.cylinder(word).interval.contains_point(x)

    def test_encode_within_matches_encode(self, f2, gauss, golden_map):
        for model, x in ((f2, Fraction(5, 7)), (gauss, Fraction(13, 29)), (golden_map, Fraction(2, 7))):
            full = model.encode(x, 8)
            if isinstance(full, NoExpansion):
                continue
            base = full[:3]
            assert model.encode_within(base, x, 5) == full


class TestCylinders:
    def test_base2_example(self, f2):
        cyl = f2.cylinder((0, 1))
        assert cyl.interval.lo == Fraction(1, 4) and cyl.interval.hi == Fraction(1, 2)

    def test_gauss_digit_one(self, gauss):
        cyl = gauss.cylinder((1,))
        assert (cyl.interval.lo, cyl.interval.hi) == (Fraction(1, 2), Fraction(1))

    def test_gauss_digit_one_one(self, gauss):
        cyl = gauss.cylinder((1, 1))
        assert (cyl.interval.lo, cyl.interval.hi) == (Fraction(1, 2), Fraction(2, 3))

    def test_nesting_and_tiling_finite_alphabet(self, f2, f3, golden_map):
        for model in (f2, f3, golden_map):
            for depth in range(1, 6):
                cyls = model.cylinders_meeting(UNIT, depth)
                total = Fraction(0)
                for c in cyls:
                    assert scalar_compare(c.interval.length(), 0) > 0
                for a, b in zip(cyls, cyls[1:]):
                    assert scalar_compare(a.interval.hi, b.interval.lo) == 0
                assert scalar_compare(cyls[0].interval.lo, 0) == 0
                assert scalar_compare(cyls[-1].interval.hi, 1) == 0
                for c in cyls:
                    parent = model.cylinder(c.word[:-1])
                    assert parent.interval.contains(c.interval)

    def test_gauss_same_generation_disjoint_to_digit_20(self, gauss):
        cyls = gauss.cylinders_meeting(Interval(Fraction(1, 21), Fraction(1)), 2, min_length=Fraction(1, 2000))
        seen = {}
        for c in cyls:
            assert c.word not in seen
            seen[c.word] = c
        items = sorted(seen.values(), key=lambda c: (c.interval.lo, c.interval.hi))
        for a, b in zip(items, items[1:]):
            assert scalar_compare(a.interval.hi, b.interval.lo) <= 0

    def test_containment_depth(self, f2, gauss, golden_map):
        for model, x in ((f2, Fraction(5, 7)), (gauss, Fraction(610, 987)), (golden_map, Fraction(2, 7))):
            word = model.encode(x, 9)
            if isinstance(word, NoExpansion):
                word = word.digits
            area = model.cylinder(word[:6]).interval
            d = model.containment_depth(word, area)
            assert d >= 6
            assert model.cylinder(word[:d]).interval.contains(area)
            if d < len(word):
                assert not model.cylinder(word[: d + 1]).interval.contains(area)


class TestContraction:
    def test_gauss_g_examples(self, gauss):
        assert gauss.contraction_bound(5) == Fraction(1, 4)
        assert gauss.contraction_bound(0) == 1

    def test_base2_uniform(self, f2):
        assert f2.contraction_bound(3) == Fraction(1, 8)

    def test_pathological_has_no_g(self):
        with pytest.raises(ValueError):
            PathologicalMap().contraction_bound(1)

    def test_condition_ii_gauss(self, gauss):
        report = check_condition_ii(gauss, 2, 4, 300, seed=11)
        assert report["ok"] and report["worst_ratio"] <= report["bound"]

    def test_condition_ii_base5_exact(self):
        report = check_condition_ii(IntegerBaseMap(5), 1, 1, 50, seed=3)
        assert report["worst_ratio"] == 0.2

    def test_condition_ii_golden(self, golden_map):
        report = check_condition_ii(golden_map, 3, 3, 150, seed=5)
        assert report["ok"]

    def test_two_step_expansion(self, gauss):
        report = gauss_two_step_expansion_check(200, seed=7)
        assert report["ok"] and report["worst"] >= 2.25

    def test_two_step_boundary_values(self, gauss):
        x = Fraction(2, 3)
        fx = gauss.step(x)
        assert fx == Fraction(1, 2)
        assert 1 / (x * x * fx * fx) == 9
        x = Fraction(3, 7)
        fx = gauss.step(x)
        assert fx == Fraction(1, 3)
        assert 1 / (x * x * fx * fx) == 49


class TestEndpoints:
    def test_base2_generation2(self, f2):
        rep = f2.endpoints_in(Interval(Fraction(0), Fraction(1)), 2)
        assert rep.is_finite()
        assert rep.points == [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]

    def test_gauss_away_from_zero(self, gauss):
        rep = gauss.endpoints_in(Interval(Fraction(1, 3), Fraction(1)), 1)
        assert rep.is_finite()
        assert rep.points == [Fraction(1, 3), Fraction(1, 2), Fraction(1)]

    def test_gauss_accumulation_at_zero(self, gauss):
        rep = gauss.endpoints_in(Interval(Fraction(0), Fraction(1, 10)), 1)
        assert not rep.is_finite()
        assert rep.acc == [Fraction(0)]
        assert all(p <= Fraction(1, 10) for p in rep.points)
        assert Fraction(1, 10) in rep.points and Fraction(1, 11) in rep.points

    def test_obstruction_points_base2(self, f2):
        pts = f2.obstruction_points(Interval(Fraction(0), Fraction(1)), 3, Fraction(1, 8))
        assert Fraction(1, 2) in pts and Fraction(1, 8) in pts

    def test_obstruction_points_gauss_include_zero(self, gauss):
        pts = gauss.obstruction_points(Interval(Fraction(0), Fraction(1, 2)), 2, Fraction(1, 64))
        assert Fraction(0) in pts


class TestPathological:
    def test_block_partition(self):
        pm = PathologicalMap()
        blk = pm.block(5)
        assert (blk.lo, blk.hi) == (Fraction(1, 32), Fraction(1, 16))
        parts = pm.parts(blk, 5)
        assert len(parts) == 20
        assert len(pm.defined_parts(blk, 5)) == 10
        assert len(pm.undefined_parts(blk, 5)) == 10
        widths = {p.length() for _, p in parts}
        assert widths == {blk.length() / 20}

    def test_recursion_every_second_defined(self):
        pm = PathologicalMap()
        cell = pm.undefined_parts(pm.block(2), 2)[0]
        assert len(pm.defined_parts(cell, 2)) == 4  # 2i of 4i parts at i=2

    def test_defined_branch_maps_onto_unit(self):
        pm = PathologicalMap()
        branch = pm.defined_parts(pm.block(1), 1)[0]
        x = branch.midpoint()
        y = pm.step(x)
        assert y == Fraction(1, 2)


class TestCantorComplement:
    def test_removed_intervals(self):
        cm = CantorComplementMap()
        first = cm.removed_intervals(1)
        assert (first[0].lo, first[0].hi) == (Fraction(1, 3), Fraction(2, 3))
        level2 = cm.removed_intervals(2)
        assert len(level2) == 3

    def test_step_is_linear_onto(self):
        cm = CantorComplementMap()
        assert cm.step(Fraction(1, 2)) == Fraction(1, 2)
        assert cm.step(Fraction(5, 12)) == Fraction(1, 4)

    def test_undefined_on_cantor_points(self):
        cm = CantorComplementMap()
        assert cm.step(Fraction(1, 3)) is None
        assert cm.step(Fraction(0)) is None


class TestOrbit:
    def test_doubling_period_four(self, f2):
        orb = f2.orbit(Fraction(1, 5), 4)
        assert orb == [Fraction(1, 5), Fraction(2, 5), Fraction(4, 5), Fraction(3, 5), Fraction(1, 5)]

    def test_gauss_truncates(self, gauss):
        orb = gauss.orbit(Fraction(2, 7), 5)
        assert orb == [Fraction(2, 7), Fraction(1, 2), Fraction(0)]

    def test_golden_orbit_hits_zero(self, golden_map):
        sysb = golden_map.system
        orb = golden_map.orbit(sysb.beta_inv, 3)
        assert scalar_compare(orb[1], 0) == 0


class TestModelSpec:
    @pytest.mark.parametrize(
        "spec,kind",
        [
            ({"kind": "integer_base", "b": 3}, "integer_base:3"),
            ({"kind": "gauss"}, "gauss"),
            ({"kind": "beta", "d1_word": "11"}, "beta:11"),
            ({"kind": "pathological"}, "pathological"),
            ({"kind": "cantor_complement"}, "cantor_complement"),
            ("integer_base:2", "integer_base:2"),
            ("beta:111", "beta:111"),
        ],
    )
    def test_round_trip(self, spec, kind):
        assert model_from_spec(spec).kind == kind

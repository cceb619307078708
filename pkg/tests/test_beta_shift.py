"""Greedy expansions, finite-type structure, exact cylinders, distortion."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from schmidtlab.beta_shift import BetaSystem, d_one
from schmidtlab.numeric import scalar_compare


def brute_force_cylinder_bracket(system, word, depth):
    """Enclose the cylinder of `word` by enumerating admissible extensions.

    Lower end: min pi over extensions; upper end: max pi plus the tail
    bound beta^-(n+m)/(1 - 1/beta).  Independent of the follower machinery.
    """
    n = len(word)
    lo = None
    hi = None
    for ext in itertools.product((0, 1), repeat=depth):
        full = tuple(word) + ext
        if not system.is_admissible(full):
            continue
        v = system.pi_value(full)
        lo = v if lo is None else (v if scalar_compare(v, lo) < 0 else lo)
        hi = v if hi is None else (v if scalar_compare(v, hi) > 0 else hi)
    tail = system.beta_inv ** (n + depth) / (system.field.one() - system.beta_inv)
    return lo, hi + tail


class TestExpansionOfOne:
    def test_golden(self, golden_system):
        assert d_one(golden_system.beta) == (1, 1)

    def test_tribonacci(self):
        system = BetaSystem("111")
        assert d_one(system.beta, 10) == (1, 1, 1)
        assert 1.83 < float(system.beta) < 1.84

    def test_rational_three_halves_does_not_terminate(self):
        assert d_one(Fraction(3, 2), 64) is None

    def test_degenerate_word_rejected(self):
        with pytest.raises(ValueError):
            BetaSystem("10")
        with pytest.raises(ValueError):
            BetaSystem("1")

    def test_non_greedy_word_rejected(self):
        # x^3 = x^2 + x has the golden root; "110" is not the greedy
        # expansion of 1 for it
        with pytest.raises(ValueError):
            BetaSystem("110")


class TestForbiddenWords:
    def test_golden(self, golden_system):
        assert golden_system.forbidden == {(1, 1)}

    def test_tribonacci(self):
        assert BetaSystem("111").forbidden == {(1, 1, 1)}

    def test_101_base(self):
        system = BetaSystem("101")
        assert system.forbidden == {(1, 0, 1), (1, 1, 0), (1, 1, 1)}

    @pytest.mark.parametrize("word", ["11", "111", "101", "1001"])
    def test_factor_test_matches_suffix_oracle_to_length_12(self, word):
        system = BetaSystem(word)
        for length in range(0, 13):
            for w in itertools.product((0, 1), repeat=length):
                assert system.is_admissible(w) == system.is_admissible_suffix_oracle(w), w


class TestExpansion:
    def test_digits_of_inverse_beta(self, golden_system):
        assert golden_system.d_expansion(golden_system.beta_inv, 4) == (1, 0, 0, 0)

    def test_digits_of_inverse_beta_squared(self, golden_system):
        x = golden_system.beta_inv * golden_system.beta_inv
        assert golden_system.d_expansion(x, 4) == (0, 1, 0, 0)

    def test_zero_is_fixed(self, golden_system):
        assert golden_system.d_expansion(Fraction(0), 6) == (0,) * 6

    @given(st.fractions(min_value=0, max_value=1, max_denominator=500).filter(lambda q: q < 1))
    @settings(max_examples=60, deadline=None)
    def test_expansion_brackets_the_point(self, golden_system, x):
        # pi(d(x)[:n] 0^inf) <= x < pi(...) + beta^-n
        n = 8
        word = golden_system.d_expansion(x, n)
        left = golden_system.pi_value(word)
        scale = golden_system.beta_inv**n
        assert scalar_compare(left, x) <= 0
        assert scalar_compare(x, left + scale) < 0

    @given(
        st.fractions(min_value=0, max_value=1, max_denominator=300).filter(lambda q: q < 1),
        st.fractions(min_value=0, max_value=1, max_denominator=300).filter(lambda q: q < 1),
    )
    @settings(max_examples=60, deadline=None)
    def test_expansion_monotone(self, golden_system, x, y):
        if x == y:
            return
        if x > y:
            x, y = y, x
        assert golden_system.d_expansion(x, 10) <= golden_system.d_expansion(y, 10)


class TestCylinders:
    def test_unit_cylinders(self, golden_system):
        c0 = golden_system.cylinder((0,))
        c1 = golden_system.cylinder((1,))
        binv = golden_system.beta_inv
        assert scalar_compare(c0.interval.lo, 0) == 0
        assert scalar_compare(c0.interval.hi, binv) == 0
        assert scalar_compare(c1.interval.lo, binv) == 0
        assert scalar_compare(c1.interval.hi, 1) == 0

    def test_digit_one_forces_zero(self, golden_system):
        # after digit 1 only digit 0 is admissible, so [10] = [1]
        c10 = golden_system.cylinder((1, 0))
        c1 = golden_system.cylinder((1,))
        assert scalar_compare(c10.interval.lo, c1.interval.lo) == 0
        assert scalar_compare(c10.interval.hi, c1.interval.hi) == 0

    def test_inadmissible_rejected(self, golden_system):
        with pytest.raises(ValueError):
            golden_system.cylinder((1, 1))

    @pytest.mark.parametrize("word", [(0,), (1,), (1, 0), (0, 1), (0, 0, 1), (1, 0, 1)])
    def test_against_brute_force_bracket(self, golden_system, word):
        cyl = golden_system.cylinder(word)
        lo, hi = brute_force_cylinder_bracket(golden_system, word, 8)
        assert scalar_compare(cyl.interval.lo, lo) == 0
        assert scalar_compare(lo, cyl.interval.hi) <= 0
        assert scalar_compare(cyl.interval.hi, hi) <= 0

    @pytest.mark.parametrize("d1", ["11", "111", "101"])
    def test_same_generation_cylinders_tile(self, d1):
        system = BetaSystem(d1)
        for n in range(1, 7):
            words = system.admissible_words(n)
            cyls = [system.cylinder(w) for w in words]
            assert scalar_compare(cyls[0].interval.lo, 0) == 0
            for a, b in zip(cyls, cyls[1:]):
                assert scalar_compare(a.interval.hi, b.interval.lo) == 0
            assert scalar_compare(cyls[-1].interval.hi, 1) == 0

    def test_nesting(self, golden_system):
        for w in golden_system.admissible_words(4):
            parent = golden_system.cylinder(w[:3])
            child = golden_system.cylinder(w)
            assert parent.interval.contains(child.interval)


class TestDistortion:
    def test_strict_bounds_to_depth_8(self, golden_system):
        lo, hi = golden_system.verify_distortion(8)
        assert scalar_compare(lo, 0) > 0

    def test_constant_at_least_one(self, golden_system):
        assert scalar_compare(golden_system.C_b, 1) > 0

    def test_111_base_certified(self):
        system = BetaSystem("111")
        system.verify_distortion(7)

    def test_contraction_bound_dominates(self, golden_system):
        g3 = golden_system.contraction_bound(3)
        for w in golden_system.admissible_words(6):
            num = golden_system.cylinder(w).interval.length()
            den = golden_system.cylinder(w[:3]).interval.length()
            ratio = num * den.inverse()
            assert scalar_compare(ratio, g3) <= 0

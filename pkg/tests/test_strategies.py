"""Sequence-game combinatorics, endpoint avoidance, phase machinery."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from schmidtlab.game_engine import GameConfig, run_game
from schmidtlab.intervals import Interval
from schmidtlab.map_models import CantorComplementMap, IntegerBaseMap
from schmidtlab.numeric import scalar_compare
from schmidtlab.strategies import (
    GenerationTrapper,
    GreedyTracker,
    InterleavedWhiteStrategy,
    MasterWhiteStrategy,
    PathologicalBlack,
    RandomBlack,
    SequenceGamePlan,
    avoid_finite_points,
    calibrate_plan,
    derive_generation_offset,
    plan_block_size,
    sequence_game_choose,
    theoretical_gap_bound,
)

UNIT = Interval(Fraction(0), Fraction(1))


class TestPlanBlockSize:
    @pytest.mark.parametrize("c,n", [(Fraction(1, 2), 6), (Fraction(1), 2), (Fraction(1, 4), 17)])
    def test_minimal_block_sizes(self, c, n):
        plan = plan_block_size(c, 0)
        assert plan.n == n
        # minimality: n-1 fails the exact inequality
        m = plan.n - 1
        assert not (2 ** (c.numerator * m) > (m + 1) ** c.denominator)

    def test_avoidance_length(self):
        plan = plan_block_size(Fraction(1, 2), 10)
        assert plan.N == 10 + 2 * plan.n

    def test_dangerous_window(self):
        plan = plan_block_size(Fraction(1), 0)  # n = 2
        plan.set_dangerous_from_window((0, 1, 0, 1))
        assert plan.dangerous_master == {(0, 1), (1, 0)}
        assert len(plan.dangerous_master) <= plan.n + 1


class TestSequenceGameChoose:
    def make_plan(self, dangerous):
        plan = plan_block_size(Fraction(1, 2), 0)
        plan.dangerous_master = frozenset(dangerous)
        plan.dangerous_words = set(dangerous)
        return plan

    def test_picks_smaller_intersection(self):
        w1, w2, w3, w4, w5 = (1, 0), (0, 1), (1, 1), (0, 0), (1, 2)
        plan = self.make_plan({w1, w2, w3})
        side = sequence_game_choose(plan, [w1, w2, w4], [w3, w5])
        assert side == "R"
        assert plan.dangerous_words == {w3}

    def test_empty_breaks_left(self):
        plan = self.make_plan(set())
        assert sequence_game_choose(plan, [(0, 0)], [(1, 1)]) == "L"

    def test_rejects_overlapping_offers(self):
        plan = self.make_plan({(0, 0)})
        with pytest.raises(ValueError):
            sequence_game_choose(plan, [(0, 0)], [(0, 0), (1, 1)])

    def test_halving_each_step(self):
        rng = random.Random(0)
        for _ in range(300):
            words = {tuple(rng.randrange(2) for _ in range(4)) for _ in range(rng.randrange(1, 9))}
            plan = self.make_plan(words)
            left = {w for w in words if rng.random() < 0.5}
            right = set(words) - left
            before = len(plan.dangerous_words)
            sequence_game_choose(plan, left, right)
            assert len(plan.dangerous_words) <= before // 2 + (before % 2)

    @given(st.integers(2, 10), st.data())
    @settings(max_examples=200, deadline=None)
    def test_random_offers_empty_within_budget(self, n, data):
        # adversarial splits of the dangerous set; White halves every turn,
        # so ceil(log2(n+2)) <= cn choices always suffice when 2^(cn) > n+1
        c = Fraction(1, 2)
        plan = plan_block_size(c, 0)
        plan.n = n
        universe = [tuple(data.draw(st.integers(0, 1)) for _ in range(n)) for _ in range(n + 1)]
        plan.dangerous_master = frozenset(universe)
        plan.dangerous_words = set(universe)
        cn = plan.choices_per_block()
        turns = 0
        while plan.dangerous_words and turns < 40:
            items = sorted(plan.dangerous_words)
            mask = [data.draw(st.booleans()) for _ in items]
            left = {w for w, m in zip(items, mask) if m}
            right = set(items) - left
            sequence_game_choose(plan, left, right)
            turns += 1
        assert not plan.dangerous_words
        import math

        assert turns <= max(cn, math.ceil(math.log2(len(universe) + 1)))


class TestAvoidFinitePoints:
    def test_single_midpoint(self):
        w = avoid_finite_points(UNIT, [Fraction(1, 2)], Fraction(1, 4))
        assert (w.lo, w.hi) == (Fraction(0), Fraction(1, 4))

    def test_no_points(self):
        w = avoid_finite_points(UNIT, [], Fraction(1, 4))
        assert (w.lo, w.hi) == (Fraction(0), Fraction(1, 4))

    def test_right_gap_hugs_right_end(self):
        w = avoid_finite_points(Interval(Fraction(0), Fraction(1)), [Fraction(1, 3)], Fraction(1, 4))
        # wider right gap wins; placement pulls away from the point
        assert w.lo > Fraction(1, 3)
        assert w.hi == Fraction(1)

    def test_interior_points_centered(self):
        w = avoid_finite_points(UNIT, [Fraction(1, 4), Fraction(3, 4)], Fraction(1, 4))
        assert w.lo == Fraction(3, 8) and w.hi == Fraction(5, 8)

    def test_avoids_all_points_when_gap_suffices(self):
        pts = [Fraction(k, 8) for k in range(1, 8)]
        w = avoid_finite_points(UNIT, pts, Fraction(1, 16))
        for p in pts:
            assert not w.contains_point_strictly(p)


class TestGenerationOffsets:
    def test_base2(self, f2):
        assert derive_generation_offset(f2)["k"] == 4  # 2^-(k-1) < 1/4

    def test_base3(self, f3):
        assert derive_generation_offset(f3)["k"] == 3

    def test_gauss(self, gauss):
        assert derive_generation_offset(gauss)["k"] == 7  # 2^-floor((k-1)/2) < 1/4

    def test_golden_records_both_thresholds(self, golden_map):
        info = derive_generation_offset(golden_map)
        assert info["k"] == info["k_operative"]
        # the cruder stated threshold is recorded for reference and implies
        # the operative condition
        assert info["k_stated_threshold"] >= info["k_operative"]

    def test_theoretical_gap_bound_monotone(self, f2):
        k = derive_generation_offset(f2)["k"]
        b1 = theoretical_gap_bound(f2, k, Fraction(1, 4), Fraction(1, 2))
        b2 = theoretical_gap_bound(f2, k, Fraction(1, 4), Fraction(1, 10))
        assert b2 > b1 > k


class TestMasterStrategy:
    def test_alpha_above_quarter_rejected(self, f2):
        with pytest.raises(ValueError):
            MasterWhiteStrategy(f2, Fraction(1, 3), Fraction(1, 3), Fraction(1, 2))

    def test_target_without_expansion_rejected(self, gauss):
        white = MasterWhiteStrategy(gauss, Fraction(2, 5), Fraction(1, 4), Fraction(1, 2), choice_density=Fraction(1, 20))
        black = RandomBlack(Fraction(1, 2), seed=1)
        config = GameConfig(alpha=Fraction(1, 4), beta_game=Fraction(1, 2))
        with pytest.raises(ValueError):
            run_game(config, black, white, 40)

    def test_phase1_geometry_and_annotations(self, f2):
        white = MasterWhiteStrategy(f2, Fraction(1, 3), Fraction(1, 4), Fraction(1, 2), choice_density=Fraction(1, 16))
        B = Interval(Fraction(0), Fraction(1))
        W, ann = white.move(B, 0)
        assert ann["ph"] == 1 and ann["mv"] == "choice"
        assert ann["ki"] == 0 and ann["gen"] == 4
        assert W.length() == Fraction(1, 4)
        assert B.contains(W)
        side = ann["side"]
        assert side in ("L", "R")

    def test_end_to_end_base2(self, f2):
        cal = calibrate_plan(f2, Fraction(1, 3), Fraction(1, 4), Fraction(1, 2), rounds=50, seeds=(7,))
        white = MasterWhiteStrategy(f2, Fraction(1, 3), Fraction(1, 4), Fraction(1, 2), choice_density=cal["c"])
        black = GreedyTracker(f2, Fraction(1, 3), Fraction(1, 2), seed=3)
        config = GameConfig(alpha=Fraction(1, 4), beta_game=Fraction(1, 2))
        run_game(config, black, white, 160)
        assert white.plan is not None
        assert len(white.fixed_word) >= white.plan.N
        fixed = "".join(map(str, white.fixed_word))
        prefix = "".join(map(str, white.target_prefix(white.plan.N)))
        assert prefix not in fixed
        assert all(t >= 1 for t in white.block_turns)

    def test_zero_run_avoidance_base3(self, f3):
        # target 0 codes as 000...; the fixed coding must not contain a
        # zero run of length N
        white = MasterWhiteStrategy(f3, Fraction(0), Fraction(1, 4), Fraction(1, 2), choice_density=Fraction(1, 14))
        black = GreedyTracker(f3, Fraction(0), Fraction(1, 2), seed=5)
        config = GameConfig(alpha=Fraction(1, 4), beta_game=Fraction(1, 2))
        run_game(config, black, white, 140)
        assert len(white.fixed_word) >= white.plan.N
        fixed = "".join(map(str, white.fixed_word))
        assert "0" * white.plan.N not in fixed


class TestTrapperAndPathological:
    def test_cantor_one_turn_with_alpha_one_ninth(self):
        # one move of length 1/9 fits inside the first removed third
        model = CantorComplementMap()
        trapper = GenerationTrapper(model, Fraction(1, 9))
        W, ann = trapper.move(UNIT, 0)
        assert ann["mv"] == "trap"
        assert scalar_compare(W.lo, Fraction(1, 3)) > 0
        assert scalar_compare(W.hi, Fraction(2, 3)) < 0
        assert W.length() == Fraction(1, 9)

    def test_avoid_finite_points_greedy_clearance(self):
        # with only the mid-third endpoints, the outer gaps offer the most
        # clearance and the leftmost tie wins
        w = avoid_finite_points(UNIT, [Fraction(1, 3), Fraction(2, 3)], Fraction(1, 9))
        assert (w.lo, w.hi) == (Fraction(0), Fraction(1, 9))
        # the full top-level obstruction layer centers the move on the
        # closure of a removed interval
        pts = [Fraction(0), Fraction(1, 3), Fraction(2, 3), Fraction(1)]
        w = avoid_finite_points(UNIT, pts, Fraction(1, 9))
        assert (w.lo, w.hi) == (Fraction(1, 9), Fraction(2, 9))

    def test_pathological_black_is_exactly_legal(self):
        i = 5
        alpha = Fraction(1, 4)
        beta = Fraction(1, 4 * i) / alpha
        model_white = GenerationTrapper(__import__("schmidtlab.map_models", fromlist=["PathologicalMap"]).PathologicalMap(), alpha, budget=30)
        black = PathologicalBlack(i, alpha, beta, seed=0)
        config = GameConfig(alpha=alpha, beta_game=beta)
        from schmidtlab.strategies import PhaseBudgetExceeded

        with pytest.raises(PhaseBudgetExceeded):
            run_game(config, black, model_white, 100)
        assert not model_white.trapped

    def test_pathological_black_requires_matching_ratios(self):
        with pytest.raises(ValueError):
            PathologicalBlack(5, Fraction(1, 4), Fraction(1, 2))


class TestInterleaver:
    def test_effective_beta(self):
        assert InterleavedWhiteStrategy.effective_beta(Fraction(1, 4), Fraction(1, 2), 1) == Fraction(1, 2)
        assert InterleavedWhiteStrategy.effective_beta(Fraction(1, 4), Fraction(1, 2), 3) == Fraction(1, 2) * Fraction(1, 64)

    def test_single_component_equals_plain_strategy(self, f2):
        alpha, beta = Fraction(1, 4), Fraction(1, 2)
        mk = lambda: MasterWhiteStrategy(f2, Fraction(1, 3), alpha, beta, choice_density=Fraction(1, 16))
        solo = mk()
        inter = InterleavedWhiteStrategy([mk()])
        black1 = RandomBlack(beta, seed=21)
        black2 = RandomBlack(beta, seed=21)
        config = GameConfig(alpha=alpha, beta_game=beta)
        t1 = run_game(config, black1, solo, 60)
        t2 = run_game(config, black2, inter, 60)
        for r1, r2 in zip(t1.rounds, t2.rounds):
            assert r1["W"] == r2["W"]

    def test_two_models_both_avoid(self, f2, f3):
        alpha, beta = Fraction(1, 4), Fraction(1, 2)
        beta_eff = InterleavedWhiteStrategy.effective_beta(alpha, beta, 2)
        c2 = MasterWhiteStrategy(f2, Fraction(1, 3), alpha, beta_eff, choice_density=Fraction(1, 30), name="c0")
        c3 = MasterWhiteStrategy(f3, Fraction(1, 2), alpha, beta_eff, choice_density=Fraction(1, 30), name="c1")
        white = InterleavedWhiteStrategy([c2, c3])
        black = RandomBlack(beta, seed=2)
        config = GameConfig(alpha=alpha, beta_game=beta)
        run_game(config, black, white, 320)
        for comp in (c2, c3):
            assert comp.plan is not None and len(comp.fixed_word) >= comp.plan.N
            fixed = "".join(map(str, comp.fixed_word))
            prefix = "".join(map(str, comp.target_prefix(comp.plan.N)))
            assert prefix not in fixed

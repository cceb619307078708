"""Referee: exact legality, nesting, the length law, determinism."""

from fractions import Fraction

import pytest

from schmidtlab.game_engine import Forfeit, GameConfig, IllegalMove, run_game, validate_move, winning_check
from schmidtlab.intervals import Interval
from schmidtlab.strategies import CooperativeBlack, RandomBlack


class LeftmostWhite:
    def move(self, B, k):
        want = B.length() * Fraction(1, 2)
        return Interval(B.lo, B.lo + want), {}


class FixedRatioWhite:
    def __init__(self, alpha):
        self.alpha = Fraction(alpha)

    def move(self, B, k):
        want = B.length() * self.alpha
        return Interval(B.lo, B.lo + want), {}


class TestValidateMove:
    def setup_method(self):
        self.config = GameConfig(alpha=Fraction(1, 4), beta_game=Fraction(1, 2))
        self.unit = Interval(Fraction(0), Fraction(1))

    def test_legal(self):
        ok = validate_move(self.config, self.unit, Interval(Fraction(1, 2), Fraction(3, 4)), "white")
        assert ok is None

    def test_containment_violation(self):
        v = validate_move(self.config, self.unit, Interval(Fraction(7, 8), Fraction(9, 8)), "white")
        assert v is not None and v.rule == "containment"

    def test_ratio_violation(self):
        v = validate_move(self.config, self.unit, Interval(Fraction(0), Fraction(1, 3)), "white")
        assert v is not None and v.rule == "ratio"

    def test_modified_ratio_below_floor(self):
        config = GameConfig(
            alpha=Fraction(1, 4), beta_game=Fraction(1, 2), variant="modified",
            alpha0=Fraction(1, 4), gamma0=Fraction(1, 2),
        )
        v = validate_move(config, self.unit, Interval(Fraction(0), Fraction(1, 5)), "white", ratio=Fraction(1, 5))
        assert v is not None and v.rule == "ratio-range"

    def test_modified_legal_varying_ratio(self):
        config = GameConfig(
            alpha=Fraction(1, 4), beta_game=Fraction(1, 2), variant="modified",
            alpha0=Fraction(1, 4), gamma0=Fraction(1, 2),
        )
        v = validate_move(config, self.unit, Interval(Fraction(0), Fraction(1, 2)), "white", ratio=Fraction(1, 2))
        assert v is None


class TestRunGame:
    def test_leftmost_geometric(self):
        config = GameConfig(alpha=Fraction(1, 2), beta_game=Fraction(1, 2))
        black = CooperativeBlack(Fraction(1, 2), Interval(Fraction(0), Fraction(1)))
        tr = run_game(config, black, LeftmostWhite(), 3)
        # |W_r| = alpha (alpha beta)^r |B0|: after r=3 rounds enclosure is [0, 4^-r / 2^... ]
        assert tr.limit_enclosure.lo == 0
        assert tr.limit_enclosure.length() == Fraction(1, 2) * Fraction(1, 4) ** 2

    def test_exact_length_law(self):
        alpha, beta = Fraction(1, 4), Fraction(1, 2)
        config = GameConfig(alpha=alpha, beta_game=beta)
        black = RandomBlack(beta, seed=5)
        tr = run_game(config, black, FixedRatioWhite(alpha), 6)
        b0 = tr.rounds[0]["B"].length()
        for r in tr.rounds:
            assert r["W"].length() == alpha * (alpha * beta) ** r["round"] * b0

    def test_nesting_chain(self):
        config = GameConfig(alpha=Fraction(1, 4), beta_game=Fraction(1, 3))
        black = RandomBlack(Fraction(1, 3), seed=9)
        tr = run_game(config, black, FixedRatioWhite(Fraction(1, 4)), 8)
        chain = tr.intervals()
        for outer, inner in zip(chain, chain[1:]):
            assert outer.contains(inner)

    def test_final_white_length_value(self):
        # alpha=1/4, beta=1/2, r=3 completed rounds: |W_2| = (1/4)(1/8)^2
        config = GameConfig(alpha=Fraction(1, 4), beta_game=Fraction(1, 2))
        black = CooperativeBlack(Fraction(1, 2), Interval(Fraction(0), Fraction(1)))
        tr = run_game(config, black, FixedRatioWhite(Fraction(1, 4)), 3)
        assert tr.limit_enclosure.length() == Fraction(1, 4) * Fraction(1, 8) ** 2

    def test_illegal_white_raises(self):
        class Cheat:
            def move(self, B, k):
                return Interval(B.lo, B.hi), {}

        config = GameConfig(alpha=Fraction(1, 4), beta_game=Fraction(1, 2))
        black = CooperativeBlack(Fraction(1, 2), Interval(Fraction(0), Fraction(1)))
        with pytest.raises(IllegalMove) as err:
            run_game(config, black, Cheat(), 2)
        assert err.value.role == "white"

    def test_forfeit_recorded(self):
        class Quitter:
            def move(self, B, k):
                raise Forfeit("white", "demo")

        config = GameConfig(alpha=Fraction(1, 4), beta_game=Fraction(1, 2))
        black = CooperativeBlack(Fraction(1, 2), Interval(Fraction(0), Fraction(1)))
        tr = run_game(config, black, Quitter(), 5)
        assert tr.summary["result"] == "forfeit" and tr.summary["by"] == "white"

    def test_deterministic_serialization(self):
        def play():
            config = GameConfig(alpha=Fraction(1, 4), beta_game=Fraction(1, 2))
            black = RandomBlack(Fraction(1, 2), seed=13)
            tr = run_game(config, black, FixedRatioWhite(Fraction(1, 4)), 10)
            tr.summary["note"] = "det"
            return tr.to_json_lines()

        assert play() == play()

    def test_modified_game_records_ratios(self):
        class VaryingBlack:
            def __init__(self):
                self.rng_state = 0

            def initial(self):
                return Interval(Fraction(0), Fraction(1)), {"ratio": None}

            def move(self, W, k):
                gamma = Fraction(1, 2) if k % 2 == 0 else Fraction(3, 4)
                want = W.length() * gamma
                return Interval(W.lo, W.lo + want), {"ratio": gamma}

        class VaryingWhite:
            def move(self, B, k):
                a = Fraction(1, 4) if k % 2 == 0 else Fraction(1, 2)
                want = B.length() * a
                return Interval(B.lo, B.lo + want), {"ratio": a}

        config = GameConfig(
            alpha=Fraction(1, 4), beta_game=Fraction(1, 2), variant="modified",
            alpha0=Fraction(1, 4), gamma0=Fraction(1, 2),
        )
        black = VaryingBlack()
        tr = run_game(config, black, VaryingWhite(), 6)
        ratios = [r["ann"]["white"]["ratio"] for r in tr.rounds]
        assert len(set(map(str, ratios))) == 2


class TestWinningCheck:
    def test_contained(self):
        def predicate(iv):
            half = Interval(Fraction(0), Fraction(1, 2))
            if half.contains(iv):
                return True
            if not half.intersects(iv):
                return False
            return None

        config = GameConfig(alpha=Fraction(1, 2), beta_game=Fraction(1, 2))
        black = CooperativeBlack(Fraction(1, 2), Interval(Fraction(0), Fraction(1)))
        tr = run_game(config, black, LeftmostWhite(), 3)
        assert winning_check(tr, predicate) is True

    def test_unknown_on_straddle(self):
        def predicate(iv):
            half = Interval(Fraction(0), Fraction(1, 2))
            if half.contains(iv):
                return True
            if not half.intersects(iv):
                return False
            return None

        config = GameConfig(alpha=Fraction(1, 2), beta_game=Fraction(1, 2))

        class Straddler:
            def initial(self):
                return Interval(Fraction(1, 4), Fraction(3, 4)), {}

            def move(self, W, k):
                want = W.length() * Fraction(1, 2)
                mid = W.midpoint()
                return Interval(mid - want / 2, mid + want / 2), {}

        class CenterWhite:
            def move(self, B, k):
                want = B.length() * Fraction(1, 2)
                mid = B.midpoint()
                return Interval(mid - want / 2, mid + want / 2), {}

        tr = run_game(config, Straddler(), CenterWhite(), 4)
        assert winning_check(tr, predicate) is None

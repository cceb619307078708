"""White's constructive strategy, its sequence-game bookkeeping, and the
Black adversaries.

The master White strategy alternates two phases per stage i:

* Phase 1: compute the maximal generation k_i for which some cylinder
  meeting Black's interval B is at least as long as B.  At generation
  L = k_i + k (k fixed so that g(k-1) < 1/4) every cylinder meeting B is
  shorter than |B|/4; the cylinder C' at B's center splits B into two
  sides longer than |B|/4, and placing W on one side selects between two
  disjoint families of codings.  The side is chosen to kill as many of the
  currently dangerous words as possible.

* Phase 2: play until W fits inside a single generation-L cylinder,
  alternating a squeeze move (avoid the two boundary cylinders that stick
  out of B) with an endpoint-avoidance move, trying the trap first every
  turn.  The trap pins the coding of the limit point up to position L.

Block bookkeeping realizes the abstract sequence-building game: the coding
positions after the first trap are split into blocks of n symbols, the
dangerous words are the length-n factors of the target's coding window,
and each in-block side choice provably discards at least half of the
dangerous words still achievable for the active block.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import cmp_to_key

from .game_engine import Forfeit
from .intervals import Cylinder, Interval
from .map_models import (
    CantorComplementMap,
    GaussMap,
    MapModel,
    NoExpansion,
    PathologicalMap,
)
from .numeric import (
    scalar_compare,
    scalar_mul,
    scalar_sub,
    scalar_to_float,
)

__all__ = [
    "SequenceGamePlan",
    "plan_block_size",
    "sequence_game_choose",
    "avoid_finite_points",
    "derive_generation_offset",
    "theoretical_gap_bound",
    "MasterWhiteStrategy",
    "GenerationTrapper",
    "calibrate_plan",
    "InterleavedWhiteStrategy",
    "GreedyTracker",
    "RandomBlack",
    "PathologicalBlack",
    "CooperativeBlack",
    "PhaseBudgetExceeded",
]


class PhaseBudgetExceeded(Exception):
    """Phase 2 failed to trap within its turn budget.

    Expected only on models without the trapping property; on the real
    backends this signals a bug.
    """

    def __init__(self, turns: int, generation: int):
        self.turns = turns
        self.generation = generation
        super().__init__(f"no generation-{generation} trap after {turns} phase-2 turns")


# ---------------------------------------------------------------------------
# the abstract sequence-building game


def plan_block_size(c, b0: int) -> "SequenceGamePlan":
    """Smallest block size n with 2^(c n) > n + 1, and the avoidance length.

    The inequality is checked exactly: for c = p/q it reads
    2^(p n) > (n+1)^q.
    """
    c = Fraction(c)
    if c <= 0:
        raise ValueError("choice density must be positive")
    n = 1
    while not (2 ** (c.numerator * n) > (n + 1) ** c.denominator):
        n += 1
    return SequenceGamePlan(c=c, n=n, b0=b0)


class SequenceGamePlan(object):
    """Block structure and dangerous-word bookkeeping.

    b0 is the prefix length the opponent controls; blocks of n symbols
    cover positions b0+1, b0+2, ...; the avoidance length is N = b0 + 2n.
    The dangerous words (at most n+1 of them) are the length-n factors of
    the target coding's window at positions b0+1 .. b0+2n.
    """

    def __init__(self, c: Fraction, n: int, b0: int):
        self.c = Fraction(c)
        self.n = n
        self.b0 = b0
        self.N = b0 + 2 * n
        self.dangerous_master: frozenset = frozenset()
        self.dangerous_words: set = set()

    def choices_per_block(self) -> int:
        # guaranteed number of effective choices cn, rounded up
        return -((-self.c.numerator * self.n) // self.c.denominator)

    def set_dangerous_from_window(self, window: tuple) -> None:
        if len(window) != 2 * self.n:
            raise ValueError(f"window must have length 2n = {2 * self.n}")
        words = {tuple(window[i : i + self.n]) for i in range(self.n + 1)}
        self.dangerous_master = frozenset(words)
        self.dangerous_words = set(words)

    def to_json(self) -> dict:
        return {
            "c": f"{self.c.numerator}/{self.c.denominator}",
            "n": self.n,
            "b0": self.b0,
            "N": self.N,
            "dangerous": sorted("".join(str(s) for s in w) for w in self.dangerous_master),
        }

    def __repr__(self):
        return f"SequenceGamePlan(c={self.c}, n={self.n}, b0={self.b0}, N={self.N})"


def sequence_game_choose(plan: SequenceGamePlan, offered_left, offered_right) -> str:
    """Pick the offered collection holding fewer dangerous words; ties go Left.

    The collections must be disjoint, so one of them contains at most half
    of the remaining dangerous words; the plan's active set is replaced by
    the intersection with the chosen collection.
    """
    left = set(map(tuple, offered_left))
    right = set(map(tuple, offered_right))
    if left & right:
        raise ValueError("offered collections must be disjoint")
    in_left = plan.dangerous_words & left
    in_right = plan.dangerous_words & right
    if len(in_left) <= len(in_right):
        plan.dangerous_words = in_left
        return "L"
    plan.dangerous_words = in_right
    return "R"


# ---------------------------------------------------------------------------
# endpoint avoidance


def avoid_finite_points(area: Interval, points, alpha) -> Interval:
    """A closed subinterval of length alpha*|area| clear of the given points.

    Picks the inter-point gap allowing the largest clearance; placement
    within the gap hugs the ends not bounded by avoided points, centers
    otherwise; ties break leftward.  Needs alpha <= 1/2 to be guaranteed a
    point-free placement for a single obstruction.
    """
    alpha = Fraction(alpha)
    want = scalar_mul(area.length(), alpha)
    pts = [p for p in points if area.contains_point(p)]
    pts.sort(key=cmp_to_key(scalar_compare))
    dedup = []
    for p in pts:
        if not dedup or scalar_compare(dedup[-1], p) != 0:
            dedup.append(p)
    pts = dedup
    if not pts:
        return Interval(area.lo, area.lo + want)

    stops = [area.lo] + pts + [area.hi]
    best = None  # (clearance, placement) pair, ties keep the first (leftmost)
    for idx in range(len(stops) - 1):
        g_lo, g_hi = stops[idx], stops[idx + 1]
        gap = scalar_sub(g_hi, g_lo)
        slack = scalar_sub(gap, want)
        if scalar_compare(slack, 0) < 0:
            continue
        lo_is_pt = idx > 0
        hi_is_pt = idx < len(stops) - 2
        if lo_is_pt and hi_is_pt:
            clearance = scalar_mul(slack, Fraction(1, 2))
            lo = g_lo + scalar_mul(slack, Fraction(1, 2))
        elif lo_is_pt:
            clearance = slack
            lo = scalar_sub(g_hi, want)
        elif hi_is_pt:
            clearance = slack
            lo = g_lo
        else:
            clearance = None  # no point adjacent at all: unbeatable
            lo = g_lo
        cand = Interval(lo, lo + want)
        if clearance is None:
            return cand
        if best is None or scalar_compare(clearance, best[0]) > 0:
            best = (clearance, cand)
    if best is not None:
        return best[1]
    # no gap fits: fall back to the placement covering fewest points
    best_cnt, best_iv = None, None
    step = scalar_mul(scalar_sub(area.length(), want), Fraction(1, 16))
    for j in range(17):
        lo = area.lo + scalar_mul(step, Fraction(j))
        iv = Interval(lo, lo + want)
        cnt = sum(1 for p in pts if iv.contains_point(p))
        if best_cnt is None or cnt < best_cnt:
            best_cnt, best_iv = cnt, iv
    return best_iv


# ---------------------------------------------------------------------------
# generation offset k and gap bounds


def derive_generation_offset(model: MapModel) -> dict:
    """The fixed offset k with g(k-1) < 1/4, the operative requirement.

    For finite-type beta models the much cruder sufficient threshold
    1 + 4*C^2/log(base) is recorded alongside for reference; enforcing it
    would only inflate every stage gap by its value, since consecutive
    maximal generations always differ by at least k.
    """
    if not model.has_contraction_bound:
        raise ValueError(f"{model.kind} has no contraction function")
    k_op = 1
    while scalar_compare(model.contraction_bound(k_op - 1), Fraction(1, 4)) >= 0:
        k_op += 1
        if k_op > 10000:
            raise ArithmeticError("contraction function does not fall below 1/4")
    info = {"k_operative": k_op, "k": k_op}
    if hasattr(model, "system"):
        c_b = float(model.system.C_b)
        base = float(model.system.beta)
        info["k_stated_threshold"] = math.ceil(1 + 4 * c_b * c_b / math.log(base))
    return info


def theoretical_gap_bound(model: MapModel, k: int, alpha, beta) -> int:
    """Largest possible k_{i+1} - k_i on completed transcripts.

    Multi-turn trapping gives g(k_{i+1} - k_i - k) >= (alpha*beta)^3, so the
    gap never exceeds k + max{m : g(m) >= (alpha*beta)^3}.
    """
    thresh = (Fraction(alpha) * Fraction(beta)) ** 3
    m = 0
    while scalar_compare(model.contraction_bound(m + 1), thresh) >= 0:
        m += 1
        if m > 100000:
            raise ArithmeticError("no gap bound: contraction function decays too slowly")
    return k + m + 1


# ---------------------------------------------------------------------------
# the master strategy


class MasterWhiteStrategy(object):
    """Forces the limit point's coding to avoid the target's coding prefix.

    Parameters
    ----------
    model : a backend with a contraction function
    target : the point whose orbit-coding prefix must never occur
    alpha : White's ratio, at most 1/4
    effective_beta : the shrink factor Black achieves between this
        strategy's consecutive turns (beta for a standalone game, larger
        when interleaved)
    choice_density : the sequence-game constant c; when None the strategy
        runs in tracking-only calibration mode (no block bookkeeping)
    phase2_budget : hard cap on phase-2 turns per stage
    """

    def __init__(
        self,
        model: MapModel,
        target,
        alpha,
        effective_beta,
        choice_density=None,
        phase2_budget: int = 500,
        name: str = "master",
    ):
        self.model = model
        self.target = target
        self.alpha = Fraction(alpha)
        if self.alpha > Fraction(1, 4):
            raise ValueError("the constructive strategy needs alpha <= 1/4")
        self.effective_beta = Fraction(effective_beta)
        kinfo = derive_generation_offset(model)
        self.k = kinfo["k"]
        self.k_info = kinfo
        self.phase2_budget = phase2_budget
        self.name = name

        self.choice_density = Fraction(choice_density) if choice_density is not None else None
        self.plan: SequenceGamePlan | None = None
        self._target_word: tuple = ()

        # evolving state
        self.fixed_word: tuple = ()
        self._anchor: tuple = ()  # deepest cylinder word known to contain B
        self.stage = 0
        self.phase = 1
        self.k_list: list = []
        self.j_list: list = []
        self.gap_list: list = []
        self.stage_B_history: list = []
        self.stage_gen: int | None = None
        self.stage_one_turn: bool | None = None
        self.turns = 0
        self.block_index = 0  # 0-based index of the active block
        self.remaining: set = set()
        self.blocks_completed = 0
        self.block_turns: list = []  # logged sequence turns per completed block
        self._block_turn_count = 0
        self.seq_log: list = []
        self.failures: list = []

    # -- coding helpers

    def target_prefix(self, n: int) -> tuple:
        if len(self._target_word) < n:
            got = self.model.encode(self.target, n)
            if isinstance(got, NoExpansion):
                raise ValueError(
                    f"target has no well-defined expansion to depth {n} (stopped at {len(got.digits)})"
                )
            self._target_word = tuple(got)
        return self._target_word[:n]

    # -- plan / block bookkeeping

    def _ensure_plan(self, b0: int) -> None:
        if self.plan is not None or self.choice_density is None:
            return
        plan = plan_block_size(self.choice_density, b0)
        window = self.target_prefix(b0 + 2 * plan.n)[b0:]
        plan.set_dangerous_from_window(window)
        self.plan = plan
        self.remaining = set(plan.dangerous_master)

    def _block_bounds(self, index: int) -> tuple:
        start = self.plan.b0 + index * self.plan.n + 1
        return start, start + self.plan.n - 1

    def _advance_blocks(self, new_len: int) -> None:
        """Consume newly fixed positions; finalize blocks that completed."""
        if self.plan is None:
            return
        while True:
            start, end = self._block_bounds(self.block_index)
            if new_len < end:
                break
            word = self.fixed_word[start - 1 : end]
            if word in self.plan.dangerous_master:
                raise AssertionError(
                    f"dangerous word fixed in block {self.block_index}: {word}"
                )
            self.blocks_completed += 1
            self.block_turns.append(self._block_turn_count)
            self._block_turn_count = 0
            self.block_index += 1
            nstart, nend = self._block_bounds(self.block_index)
            fixed_part = self.fixed_word[nstart - 1 : min(new_len, nend)]
            self.remaining = {
                d for d in self.plan.dangerous_master if d[: len(fixed_part)] == tuple(fixed_part)
            }
            self.plan.dangerous_words = set(self.remaining)

    # -- phase 1 machinery

    def _update_anchor(self, B: Interval) -> None:
        """Deepen the query anchor: the deepest cylinder containing B.

        Black's intervals are nested, so the previous anchor still contains
        the new B and only extensions need to be walked.  Queries answered
        relative to the anchor are exact because interior-overlap results
        never involve cylinders outside it.
        """
        a = self._anchor
        if len(a) < len(self.fixed_word):
            a = self.fixed_word
        step = 8
        while True:
            try:
                got = self.model.encode_within(a, B.midpoint(), step)
            except ValueError:
                break
            if isinstance(got, NoExpansion):
                got = tuple(got.digits)
                a = got[: self.model.containment_depth(got, B, base_word=a)]
                break
            got = tuple(got)
            deep = self.model.containment_depth(got, B, base_word=a)
            a = got[:deep]
            if deep < len(got):
                break
            step *= 2
        self._anchor = a

    def _maximal_generation(self, B: Interval) -> int:
        # every generation up to the anchor depth qualifies: the anchor
        # cylinder itself contains B
        g = max(self.k_list[-1] if self.k_list else 0, len(self._anchor))
        blen = B.length()
        while True:
            nxt = self.model.cylinders_meeting(
                B, g + 1, min_length=blen, max_count=4096, base_word=self._anchor
            )
            if not nxt:
                return g
            g += 1
            if g > 10**6:
                raise ArithmeticError("maximal generation search diverged")

    def _center_cylinder(self, B: Interval, gen: int):
        c = B.midpoint()
        try:
            cyl = self.model.cylinder_containing_point(c, gen, base_word=self.fixed_word)
        except ValueError:
            cyl = None
        if cyl is None:
            return None, c
        return cyl, c

    def _families_sides(self, B: Interval, cprime, center) -> tuple:
        if cprime is None:
            left = Interval(B.lo, center)
            right = Interval(center, B.hi)
        else:
            left = Interval(B.lo, cprime.interval.lo)
            right = Interval(cprime.interval.hi, B.hi)
        return left, right

    def _segment_survivors(self, side: Interval, seg_constraint: dict, gen: int):
        """Dangerous words still achievable on a side.

        seg_constraint maps dangerous word -> the exact segment symbols the
        word dictates at the newly decided positions; achievability is one
        cylinder lookup since the segment is fully pinned.
        """
        out = set()
        for d, seg in seg_constraint.items():
            word = self.fixed_word + seg
            try:
                cyl = self.model.cylinder(word)
            except ValueError:
                continue
            if cyl.interval.overlaps_interior(side):
                out.add(d)
        return out

    def _phase1(self, B: Interval, round_index: int):
        ki = self._maximal_generation(B)
        self.k_list.append(ki)
        if len(self.k_list) >= 2:
            self.gap_list.append(self.k_list[-1] - self.k_list[-2])
        gen = ki + self.k
        self.stage_gen = gen
        blen = B.length()
        quarter = scalar_mul(blen, Fraction(1, 4))
        oversized = self.model.cylinders_meeting(
            B, gen, min_length=quarter, max_count=4096, base_word=self._anchor
        )
        if oversized:
            raise AssertionError(
                f"generation {gen} cylinder of length >= |B|/4 meets B: {oversized[0].word}"
            )
        cprime, center = self._center_cylinder(B, gen)
        left_side, right_side = self._families_sides(B, cprime, center)
        for side in (left_side, right_side):
            if scalar_compare(side.length(), quarter) <= 0:
                raise AssertionError("side component not longer than |B|/4")

        ann = {
            "st": self.stage,
            "ph": 1,
            "mv": "choice",
            "ki": ki,
            "gen": gen,
            "cp": cprime.interval.to_json() if cprime is not None else None,
        }

        side_name = "L"
        if self.plan is not None:
            start, end = self._block_bounds(self.block_index)
            seg_lo, seg_hi = len(self.fixed_word) + 1, gen
            in_block = start <= seg_lo and seg_hi <= end
            seg_constraint = {}
            feasible = True
            for d in self.remaining:
                seg = tuple(
                    d[p - start] if start <= p <= end else None for p in range(seg_lo, seg_hi + 1)
                )
                if any(s is None for s in seg):
                    feasible = False
                    break
                seg_constraint[d] = seg
            if feasible:
                surv_l = self._segment_survivors(left_side, seg_constraint, gen)
                surv_r = self._segment_survivors(right_side, seg_constraint, gen)
                if surv_l & surv_r:
                    raise AssertionError("survivor sets must be disjoint on a pinned segment")
                before = len(self.remaining)
                if len(surv_l) <= len(surv_r):
                    side_name, chosen = "L", surv_l
                else:
                    side_name, chosen = "R", surv_r
                self.remaining = chosen
                self.plan.dangerous_words = set(chosen)
                after = len(chosen)
                # a turn counts for the block only when the whole segment
                # lies inside it; then the two survivor sets are disjoint
                # and the choice provably at least halves the danger
                if in_block:
                    if after > (before + 1) // 2:
                        raise AssertionError("halving failed on a logged sequence turn")
                    self._block_turn_count += 1
                    rec = {"blk": self.block_index, "bef": before, "aft": after}
                    ann["seq"] = rec
                    self.seq_log.append(rec)

        side = left_side if side_name == "L" else right_side
        ann["side"] = side_name

        # placement: prefer sitting inside one cylinder (quick trap), else center
        want = scalar_mul(blen, self.alpha)
        best = None
        for cyl in self.model.cylinders_meeting(
            side, gen, min_length=want, max_count=4096, base_word=self._anchor
        ):
            part = cyl.interval.intersection(side)
            if part is None:
                continue
            if scalar_compare(part.length(), want) >= 0:
                if best is None or scalar_compare(part.length(), best.length()) > 0:
                    best = part
        host = best if best is not None else side
        slack = scalar_mul(scalar_sub(host.length(), want), Fraction(1, 2))
        w_lo = host.lo + slack
        W = Interval(w_lo, w_lo + want)

        self.stage_B_history = [B]
        self.stage_one_turn = None
        self.phase = 2
        self._phase2_turns = 0
        return W, ann

    # -- phase 2 machinery

    def _try_trap(self, B: Interval, gen: int):
        want = scalar_mul(B.length(), self.alpha)
        best = None
        for cyl in self.model.cylinders_meeting(
            B, gen, min_length=want, max_count=4096, base_word=self._anchor
        ):
            part = cyl.interval.intersection(B)
            if part is None or scalar_compare(part.length(), want) < 0:
                continue
            if best is None or scalar_compare(part.length(), best[0].length()) > 0:
                best = (part, cyl)
        return best

    def _boundary_cylinder(self, x, gen: int):
        try:
            return self.model.cylinder_containing_point(x, gen, base_word=self.fixed_word)
        except ValueError:
            return None

    def _squeeze(self, B: Interval, gen: int) -> Interval:
        core_lo, core_hi = B.lo, B.hi
        left_cyl = self._boundary_cylinder(B.lo, gen)
        if left_cyl is not None and scalar_compare(left_cyl.interval.lo, B.lo) < 0:
            if scalar_compare(left_cyl.interval.hi, B.hi) < 0:
                core_lo = left_cyl.interval.hi
        right_cyl = self._boundary_cylinder(B.hi, gen)
        if right_cyl is not None and scalar_compare(right_cyl.interval.hi, B.hi) > 0:
            if scalar_compare(right_cyl.interval.lo, B.lo) > 0:
                core_hi = right_cyl.interval.lo
        core = Interval(core_lo, core_hi)
        want = scalar_mul(B.length(), self.alpha)
        if scalar_compare(core.length(), want) < 0:
            raise AssertionError("squeeze core shorter than the required move")
        slack = scalar_mul(scalar_sub(core.length(), want), Fraction(1, 2))
        lo = core.lo + slack
        return Interval(lo, lo + want)

    def _avoid(self, B: Interval, gen: int) -> tuple:
        cutoff = scalar_mul(B.length(), self.alpha * Fraction(1, 4))
        pts = self.model.obstruction_points(B, gen, cutoff, base_word=self.fixed_word)
        W = avoid_finite_points(B, pts, self.alpha)
        return W, len(pts)

    def _phase2(self, B: Interval, round_index: int):
        gen = self.stage_gen
        self.stage_B_history.append(B)
        self._phase2_turns += 1
        ann = {"st": self.stage, "ph": 2, "gen": gen}
        trap = self._try_trap(B, gen)
        if trap is not None:
            part, cyl = trap
            want = scalar_mul(B.length(), self.alpha)
            slack = scalar_mul(scalar_sub(part.length(), want), Fraction(1, 2))
            lo = part.lo + slack
            W = Interval(lo, lo + want)
            word = cyl.word
            if word[: len(self.fixed_word)] != self.fixed_word:
                raise AssertionError("trapped cylinder does not extend the fixed coding")
            turns = self._phase2_turns
            if turns > 1:
                b_prev = self.stage_B_history[turns - 2]
                if scalar_compare(cyl.interval.length(), b_prev.length()) > 0:
                    raise AssertionError("multi-turn trap cylinder exceeds |B_{j-2}|")
            seg = word[len(self.fixed_word) :]
            self.fixed_word = word
            self.j_list.append(round_index)
            self.stage_one_turn = turns == 1
            ann.update({"mv": "trap", "seg": list(seg), "t2": turns})
            if self.plan is None:
                self._ensure_plan(len(word))
                if self.plan is not None:
                    ann["plan"] = self.plan.to_json()
            else:
                self._filter_remaining_after_fix(len(word))
            self._advance_blocks(len(self.fixed_word))
            self.stage += 1
            self.phase = 1
            return W, ann
        if self._phase2_turns > self.phase2_budget:
            raise PhaseBudgetExceeded(self._phase2_turns, gen)
        if self._phase2_turns % 2 == 1:
            W = self._squeeze(B, gen)
            ann["mv"] = "squeeze"
        else:
            W, npts = self._avoid(B, gen)
            ann["mv"] = "avoid"
            ann["pts"] = npts
        return W, ann

    def _filter_remaining_after_fix(self, new_len: int) -> None:
        """Drop dangerous words inconsistent with the freshly fixed block part."""
        if self.plan is None or not self.remaining:
            return
        start, end = self._block_bounds(self.block_index)
        fixed_part = self.fixed_word[start - 1 : min(new_len, end)]
        self.remaining = {d for d in self.remaining if d[: len(fixed_part)] == tuple(fixed_part)}
        self.plan.dangerous_words = set(self.remaining)

    # -- public strategy interface

    def move(self, B: Interval, round_index: int):
        self.turns += 1
        self._update_anchor(B)
        if self.phase == 1:
            return self._phase1(B, round_index)
        return self._phase2(B, round_index)

    def report(self) -> dict:
        out = {
            "strategy": self.name,
            "alpha": f"{self.alpha.numerator}/{self.alpha.denominator}",
            "effective_beta": f"{self.effective_beta.numerator}/{self.effective_beta.denominator}",
            "k": self.k,
            "k_info": self.k_info,
            "stages": self.stage,
            "k_list": self.k_list,
            "fixed_len": len(self.fixed_word),
            "K_observed": max(self.gap_list) if self.gap_list else 0,
            "blocks_completed": self.blocks_completed,
            "block_turns": self.block_turns,
            "seq_turns": len(self.seq_log),
        }
        if self.plan is not None:
            out["plan"] = self.plan.to_json()
            out["active_remaining"] = len(self.remaining)
        return out


# ---------------------------------------------------------------------------
# simple trapping strategy (pathological demo, one-shot avoidance)


class GenerationTrapper(object):
    """Tries to fit W inside a defined branch; squeeze/avoid otherwise.

    The pathological map never grants the trap, which is the point of the
    demo; on honest models the trap lands within a few turns.
    """

    def __init__(self, model, alpha, budget: int = 500, name: str = "trapper"):
        self.model = model
        self.alpha = Fraction(alpha)
        self.budget = budget
        self.turns = 0
        self.trapped = False
        self.name = name

    def _branches(self, B: Interval, min_len):
        if isinstance(self.model, (PathologicalMap, CantorComplementMap)):
            return self.model.branches_meeting(B, min_len)
        return [c.interval for c in self.model.cylinders_meeting(B, 1, min_length=min_len, max_count=4096)]

    def move(self, B: Interval, round_index: int):
        self.turns += 1
        want = scalar_mul(B.length(), self.alpha)
        best = None
        for iv in self._branches(B, want):
            part = iv.intersection(B)
            if part is None or scalar_compare(part.length(), want) < 0:
                continue
            if best is None or scalar_compare(part.length(), best.length()) > 0:
                best = part
        ann = {"mv": "trap-seek", "turn": self.turns}
        if best is not None:
            slack = scalar_mul(scalar_sub(best.length(), want), Fraction(1, 2))
            lo = best.lo + slack
            self.trapped = True
            ann["mv"] = "trap"
            return Interval(lo, lo + want), ann
        if self.turns > self.budget:
            raise PhaseBudgetExceeded(self.turns, 1)
        # no branch hosts the move: center W to keep options open
        slack = scalar_mul(scalar_sub(B.length(), want), Fraction(1, 2))
        lo = B.lo + slack
        return Interval(lo, lo + want), ann

    def report(self) -> dict:
        return {"strategy": self.name, "turns": self.turns, "trapped": self.trapped}


# ---------------------------------------------------------------------------
# calibration and interleaving


def calibrate_plan(model, target, alpha, effective_beta, rounds: int = 80, seeds=(101, 102, 103)) -> dict:
    """Measure the stage gap distribution and derive the choice density.

    Runs tracking-only games against the greedy adversary, takes the worst
    observed k_{i+1} - k_i with a half-again margin, caps it with the
    provable bound, and returns c = 1 / (2 K).
    """
    from .game_engine import GameConfig, run_game

    k = derive_generation_offset(model)["k"]
    cap = theoretical_gap_bound(model, k, alpha, effective_beta)
    worst = 0
    for seed in seeds:
        white = MasterWhiteStrategy(model, target, alpha, effective_beta, choice_density=None)
        black = GreedyTracker(model, target, effective_beta, seed=seed)
        config = GameConfig(alpha=Fraction(alpha), beta_game=Fraction(effective_beta))
        run_game(config, black, white, rounds)
        if white.gap_list:
            worst = max(worst, max(white.gap_list))
    observed = max(worst, k + 1)
    # modest slack: a later gap above the pad only eats into the (large)
    # density margin, it cannot break soundness
    padded = min(cap, observed + 2 + observed // 4)
    c = Fraction(1, 2 * padded)
    return {"K_observed": worst, "K_padded": padded, "K_cap": cap, "c": c}


class InterleavedWhiteStrategy(object):
    """Round-robin over component strategies, one target set each.

    Component i sees Black shrink by beta * (alpha*beta)^(m-1) between its
    own consecutive turns; every component must tolerate arbitrary
    opponent ratios, which the master strategy does.
    """

    def __init__(self, components: list):
        if not components:
            raise ValueError("need at least one component")
        self.components = components
        self.turns = 0

    @staticmethod
    def effective_beta(alpha, beta, m: int) -> Fraction:
        return Fraction(beta) * (Fraction(alpha) * Fraction(beta)) ** (m - 1)

    def move(self, B: Interval, round_index: int):
        i = self.turns % len(self.components)
        self.turns += 1
        W, ann = self.components[i].move(B, round_index)
        ann = {"comp": i, **ann}
        return W, ann

    def report(self) -> dict:
        return {
            "strategy": "interleaved",
            "components": [c.report() for c in self.components],
        }


# ---------------------------------------------------------------------------
# Black adversaries


def _dyadic(rng: random.Random, bits: int = 40) -> Fraction:
    return Fraction(rng.getrandbits(bits), 1 << bits)


class GreedyTracker(object):
    """Zooms toward the point whose coding re-enters the target's prefix.

    While the target point itself is reachable the tracker chases it;
    once White has pushed the game away, it retargets the point inside the
    current window whose continuation repeats the target's digits.
    """

    def __init__(self, model, target, beta, seed: int = 0, lookahead: int = 24):
        self.model = model
        self.target = target
        self.beta = Fraction(beta)
        self.rng = random.Random(seed)
        self.seed = seed
        self.lookahead = lookahead
        self._z = target
        self._target_word = None
        self._anchor: tuple = ()

    def initial(self):
        width = Fraction(1, 2) + _dyadic(self.rng, 20) / 2  # in [1/2, 1)
        lo = _dyadic(self.rng, 30) * (1 - width)
        return Interval(lo, lo + width), {"name": "greedy", "seed": self.seed}

    def _target_digits(self, n: int) -> tuple:
        if self._target_word is None or len(self._target_word) < n:
            got = self.model.encode(self.target, n)
            if isinstance(got, NoExpansion):
                got = got.digits
            self._target_word = tuple(got)
        return self._target_word[:n]

    def _retarget(self, W: Interval) -> None:
        # deepest cylinder containing the window's midpoint that still
        # contains W, extended by the target's digits; the previous anchor
        # word is reused so the walk stays proportional to the new depth
        mid = W.midpoint()
        anchor = self._anchor
        while anchor and not self.model.cylinder(anchor).interval.contains(W):
            anchor = anchor[: len(anchor) // 2]
        step = 8
        word = anchor
        while True:
            try:
                got = self.model.encode_within(word, mid, step)
            except ValueError:
                break
            if isinstance(got, NoExpansion):
                word = tuple(got.digits)
                break
            word = tuple(got)
            if not self.model.cylinder(word).interval.contains(W):
                break
            if len(word) > 200000:
                break
            step *= 2
        # largest prefix whose cylinder still contains the window
        word = word[: self.model.containment_depth(word, W, base_word=anchor)]
        self._anchor = word
        probe = word
        for d in self._target_digits(self.lookahead):
            try:
                self.model.cylinder(probe + (d,))
            except ValueError:
                break
            probe = probe + (d,)
        try:
            self._z = self.model.cylinder(probe).interval.midpoint()
        except ValueError:
            self._z = mid

    def move(self, W: Interval, round_index: int):
        want = scalar_mul(W.length(), self.beta)
        if self._z is None or not W.contains_point(self._z):
            self._retarget(W)
        z = self._z
        half = scalar_mul(want, Fraction(1, 2))
        lo = scalar_sub(z, half)
        if scalar_compare(lo, W.lo) < 0:
            lo = W.lo
        hi_cap = scalar_sub(W.hi, want)
        if scalar_compare(lo, hi_cap) > 0:
            lo = hi_cap
        return Interval(lo, lo + want), {}


class RandomBlack(object):
    """Uniform legal placements at the fixed ratio; fully seed-determined."""

    def __init__(self, beta, seed: int = 0):
        self.beta = Fraction(beta)
        self.rng = random.Random(seed)
        self.seed = seed

    def initial(self):
        width = Fraction(1, 2) + _dyadic(self.rng, 20) / 2
        lo = _dyadic(self.rng, 30) * (1 - width)
        return Interval(lo, lo + width), {"name": "random", "seed": self.seed}

    def move(self, W: Interval, round_index: int):
        want = scalar_mul(W.length(), self.beta)
        slack = scalar_sub(W.length(), want)
        lo = W.lo + scalar_mul(slack, _dyadic(self.rng, 30))
        return Interval(lo, lo + want), {}


class PathologicalBlack(object):
    """Reproduces the trap on the everywhere-recursing map.

    Opens on the dyadic block with index i and, every round, moves into an
    entire undefined part of the current cell; with alpha*beta = 1/(4i)
    that part has exactly the required length, and White's window always
    contains at least one whole undefined part.
    """

    def __init__(self, i: int, alpha, beta, seed: int = 0):
        self.i = i
        self.alpha = Fraction(alpha)
        self.beta = Fraction(beta)
        if self.alpha * self.beta != Fraction(1, 4 * i):
            raise ValueError("the trap needs alpha*beta = 1/(4i)")
        self.model = PathologicalMap()
        self.rng = random.Random(seed)
        self.seed = seed
        self.cell = None

    def initial(self):
        self.cell = self.model.block(self.i)
        return self.cell, {"name": "pathological", "i": self.i, "seed": self.seed}

    def move(self, W: Interval, round_index: int):
        want = scalar_mul(W.length(), self.beta)
        candidates = [
            part
            for part in self.model.undefined_parts(self.cell, self.i)
            if W.contains(part)
        ]
        if not candidates:
            raise Forfeit("black", "no undefined part fits inside White's window")
        pick = candidates[self.rng.randrange(len(candidates))]
        if scalar_compare(pick.length(), want) != 0:
            raise Forfeit("black", "part width does not match the required ratio")
        self.cell = pick
        return pick, {}


class CooperativeBlack(object):
    """Concedes: always the leftmost legal placement inside White's window."""

    def __init__(self, beta, b0: Interval | None = None):
        self.beta = Fraction(beta)
        self.b0 = b0 if b0 is not None else Interval(Fraction(0), Fraction(1))

    def initial(self):
        return self.b0, {"name": "cooperative"}

    def move(self, W: Interval, round_index: int):
        want = scalar_mul(W.length(), self.beta)
        return Interval(W.lo, W.lo + want), {}

"""Greedy beta-expansions for bases in (1,2) whose expansion of 1 terminates.

For such a base the set of admissible digit sequences is a subshift of
finite type over {0,1}: writing the terminating expansion of 1 as the word
j_0 ... j_{k-1}, a sequence is admissible exactly when none of its length-k
factors is lexicographically >= that word.  The base itself is the unique
root in (1,2) of

    x^k = j_0 x^{k-1} + j_1 x^{k-2} + ... + j_{k-1}

and all cylinder endpoints live in Q(beta), so everything here is exact.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .intervals import Cylinder, Interval
from .numeric import (
    AlgebraicField,
    AlgebraicNumber,
    Scalar,
    scalar_compare,
    scalar_max,
    scalar_min,
    scalar_mul,
    scalar_sub,
)

__all__ = [
    "BetaSystem",
    "d_one",
    "greedy_digits",
    "word_from_string",
]


def word_from_string(s) -> tuple:
    if isinstance(s, str):
        return tuple(int(c) for c in s)
    return tuple(int(c) for c in s)


def greedy_digits(beta, x, n: int) -> tuple:
    """First n greedy digits of x in base beta, for beta in (1,2).

    Works for any exact scalar beta (rational or algebraic); the digit at
    each step is 1 exactly when beta * t >= 1.
    """
    digits = []
    t = x
    for _ in range(n):
        bt = scalar_mul(beta, t)
        if scalar_compare(bt, 1) >= 0:
            digits.append(1)
            t = scalar_sub(bt, 1)
        else:
            digits.append(0)
            t = bt
    return tuple(digits)


def d_one(beta, max_steps: int = 64):
    """Greedy expansion of 1 in base beta, if it terminates.

    Returns the word j_0 ... j_{k-1} when some iterate hits 0 exactly within
    max_steps, else None.
    """
    digits = []
    if isinstance(beta, (int, Fraction)):
        t = Fraction(1)
    else:
        t = beta.field.one()
    for _ in range(max_steps):
        bt = scalar_mul(beta, t)
        if scalar_compare(bt, 1) >= 0:
            digits.append(1)
            t = scalar_sub(bt, 1)
        else:
            digits.append(0)
            t = bt
        if scalar_compare(t, 0) == 0:
            return tuple(digits)
    return None


class BetaSystem(object):
    """A terminating-expansion base together with its finite-type structure.

    Immutable after construction.  Exposes the defining field, the forbidden
    words, admissibility tests, exact cylinders and a certified distortion
    constant bounding |cylinder| * beta^n strictly away from 0 and infinity.
    """

    def __init__(self, d1_word, budget: int = 64):
        word = word_from_string(d1_word)
        if not word or any(c not in (0, 1) for c in word):
            raise ValueError("expansion word must be a nonempty binary word")
        if word[0] != 1:
            raise ValueError("expansion of 1 must start with digit 1 for a base in (1,2)")
        if word[-1] != 1:
            raise ValueError(f"word {word} is not a terminating expansion (trailing zero)")
        if len(word) == 1:
            raise ValueError("word '1' forces base 1, outside (1,2)")
        self.d1_word = word
        self.k = len(word)

        # x^k - sum j_i x^(k-1-i), coefficients lowest degree first
        coeffs = [0] * (self.k + 1)
        coeffs[self.k] = 1
        for i, j in enumerate(word):
            coeffs[self.k - 1 - i] -= j
        self.field = AlgebraicField.from_root_in(coeffs, Fraction(1), Fraction(2), budget=budget)
        self.beta = self.field.generator()
        self.beta_inv = self.beta.inverse()

        # self-consistency: the given word must be the greedy expansion of 1
        recomputed = d_one(self.beta, max_steps=self.k + 1)
        if recomputed != word:
            raise ValueError(
                f"word {word} is not the greedy expansion of 1 for its base (got {recomputed})"
            )

        self.forbidden = frozenset(
            w for w in product((0, 1), repeat=self.k) if w >= word
        )
        self._build_followers()
        self.C_b = self._certify_distortion()

    # -- admissibility ------------------------------------------------------

    def is_admissible(self, word) -> bool:
        """True when the finite word is a prefix of some admissible sequence.

        Equivalent to the lexicographic test: every shifted suffix of the
        zero-padded word stays strictly below the expansion of 1.
        """
        w = word_from_string(word)
        if any(c not in (0, 1) for c in w):
            return False
        padded = w + (0,) * (self.k - 1)
        for i in range(len(w)):
            if padded[i : i + self.k] >= self.d1_word:
                return False
        return True

    def is_admissible_suffix_oracle(self, word) -> bool:
        """Direct lexicographic suffix check against d(1, beta), brute force.

        Compares every shift of word * 0^inf with the infinite expansion of 1
        padded with zeros; kept independent of the factor test so the two
        can cross-check each other.
        """
        w = word_from_string(word)
        if any(c not in (0, 1) for c in w):
            return False
        d_inf = self.d1_word + (0,) * (len(w) + self.k)
        padded = w + (0,) * (len(w) + 2 * self.k)
        for n in range(len(w)):
            shifted = padded[n : n + len(w) + self.k]
            if tuple(shifted) >= tuple(d_inf[: len(shifted)]):
                return False
        return True

    def state_of(self, word) -> tuple:
        """Follower class of a word: its last min(len, k-1) symbols."""
        w = tuple(word)
        if len(w) >= self.k - 1:
            return w[len(w) - (self.k - 1) :]
        return w

    def legal_extensions(self, word) -> list:
        return [a for a in (0, 1) if self.is_admissible(tuple(word) + (a,))]

    def _pad_ok(self, state: tuple) -> bool:
        padded = state + (0,) * (self.k - 1)
        for i in range(len(state)):
            if padded[i : i + self.k] >= self.d1_word:
                return False
        return True

    def _build_followers(self):
        states = []
        for n in range(self.k):
            for s in product((0, 1), repeat=n):
                if self._pad_ok(s):
                    states.append(s)
        self._states = states
        self._moves = {}
        for s in states:
            out = {}
            for a in (0, 1):
                if len(s) == self.k - 1 and s + (a,) in self.forbidden:
                    continue
                nxt = self.state_of(s + (a,))
                if self._pad_ok(nxt):
                    out[a] = nxt
            self._moves[s] = out
        self._sup = {}
        for s in states:
            self._sup[s] = self._sup_value(s)

    def _sup_value(self, state: tuple) -> AlgebraicNumber:
        """sup of pi over infinite admissible continuations from a state.

        Attained along the lexicographically maximal path, which is
        eventually periodic over the finite state set; solve the cycle
        exactly in the field.
        """
        path_digits = []
        seen = {}
        s = state
        while s not in seen:
            seen[s] = len(path_digits)
            moves = self._moves[s]
            a = 1 if 1 in moves else 0
            if a not in moves:
                raise ArithmeticError(f"dead follower state {s}")
            path_digits.append(a)
            s = moves[a]
        start = seen[s]
        pre, cyc = path_digits[:start], path_digits[start:]
        binv = self.beta_inv
        # value of the periodic tail: sum cyc_i beta^-(i+1) / (1 - beta^-|cyc|)
        cyc_val = self.field.zero()
        for d in reversed(cyc):
            cyc_val = (cyc_val + d) * binv
        tail = cyc_val / (self.field.one() - binv ** len(cyc))
        val = tail
        for d in reversed(pre):
            val = (val + d) * binv
        return val

    def sup_of_state(self, state: tuple) -> AlgebraicNumber:
        return self._sup[tuple(state)]

    # -- expansion and cylinders -------------------------------------------

    def d_expansion(self, x, n: int) -> tuple:
        """First n greedy digits of x in this base; x in [0, 1]."""
        x = self.field.lift(x)
        if x < 0 or x > 1:
            raise ValueError("expansion input must lie in [0, 1]")
        return greedy_digits(self.beta, x, n)

    def pi_value(self, word) -> AlgebraicNumber:
        """pi(word 0^inf) = sum of word_i beta^-(i+1)."""
        val = self.field.zero()
        for d in reversed(word_from_string(word)):
            val = (val + d) * self.beta_inv
        return val

    def cylinder(self, word) -> Cylinder:
        """Exact interval of all points whose expansion starts with word."""
        w = word_from_string(word)
        if not self.is_admissible(w):
            raise ValueError(f"inadmissible word {w}")
        left = self.pi_value(w)
        scale = self.beta_inv ** len(w)
        right = left + scale * self._sup[self.state_of(w)]
        return Cylinder(w, Interval(left, right))

    def cylinder_length_times_beta_n(self, word) -> AlgebraicNumber:
        w = word_from_string(word)
        if not self.is_admissible(w):
            raise ValueError(f"inadmissible word {w}")
        return self._sup[self.state_of(w)]

    def admissible_words(self, n: int):
        """All admissible words of length n, lexicographic order."""
        out = []

        def rec(prefix):
            if len(prefix) == n:
                out.append(prefix)
                return
            for a in (0, 1):
                cand = prefix + (a,)
                if self.is_admissible(cand):
                    rec(cand)

        rec(())
        return out

    # -- distortion ----------------------------------------------------------

    def _certify_distortion(self) -> AlgebraicNumber:
        """A constant with 1/C < |cylinder| * beta^n < C for all words, strictly.

        |C_w| * beta^n equals the sup value of w's follower state, so it
        suffices to clear the extremes over reachable states by a margin.
        """
        reachable = set()
        frontier = [()]
        while frontier:
            s = frontier.pop()
            if s in reachable:
                continue
            reachable.add(s)
            for a, nxt in self._moves[s].items():
                if nxt not in reachable:
                    frontier.append(nxt)
        sups = [self._sup[s] for s in reachable]
        worst_hi = sups[0]
        worst_lo = sups[0]
        for v in sups[1:]:
            worst_hi = scalar_max(worst_hi, v)
            worst_lo = scalar_min(worst_lo, v)
        bound = scalar_max(worst_hi, worst_lo.inverse())
        return scalar_mul(bound, Fraction(9, 8))

    def contraction_bound(self, m: int) -> Scalar:
        """g(m) = C_b^2 * beta^-m, dominating all cylinder extension ratios."""
        if m < 0:
            raise ValueError("extension length must be >= 0")
        return self.C_b * self.C_b * self.beta_inv**m

    def verify_distortion(self, depth: int) -> tuple:
        """Exhaustively check the strict C_b inequality for words up to depth.

        Returns (worst_low, worst_high) observed values of |C| * beta^n.
        """
        inv_C = self.C_b.inverse()
        worst_lo = None
        worst_hi = None
        for n in range(1, depth + 1):
            for w in self.admissible_words(n):
                v = self.cylinder_length_times_beta_n(w)
                if scalar_compare(v, inv_C) <= 0 or scalar_compare(v, self.C_b) >= 0:
                    raise AssertionError(f"distortion bound violated at word {w}: {float(v)}")
                worst_lo = v if worst_lo is None else scalar_min(worst_lo, v)
                worst_hi = v if worst_hi is None else scalar_max(worst_hi, v)
        return worst_lo, worst_hi

    def to_json(self) -> dict:
        from .numeric import scalar_to_json

        return {
            "d1_word": "".join(str(c) for c in self.d1_word),
            "beta_enclosure": [str(self.field.lo), str(self.field.hi)],
            "poly": [int(c) for c in self.field.poly],
            "forbidden_words": sorted("".join(str(c) for c in w) for w in self.forbidden),
            "C_b": scalar_to_json(self.C_b),
        }

    def __repr__(self):
        return f"BetaSystem({''.join(str(c) for c in self.d1_word)}, beta~{float(self.beta):.6f})"

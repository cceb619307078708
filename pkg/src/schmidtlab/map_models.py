"""Expanding interval maps presented by their generation-1 branch structure.

Five backends:

* ``IntegerBaseMap(b)``    -- x -> b*x mod 1, finite alphabet {0..b-1};
* ``GaussMap()``           -- x -> 1/x mod 1, countable digit alphabet;
* ``BetaMap(word)``        -- x -> beta*x mod 1 for a terminating base, with
                              cylinders from the finite-type structure;
* ``PathologicalMap(i)``   -- the everywhere-recursing example on which the
                              interval game cannot be won (demo adversary);
* ``CantorComplementMap()``-- linear branches on the removed middle thirds.

A model answers exact geometric queries: the cylinder of a word, the
itinerary of a point, which generation-g cylinders of at least a given
length meet an interval, which cylinder endpoints (and accumulation
anchors) obstruct a region.  Countable alphabets are materialized lazily;
queries carry explicit length cutoffs or budgets so every call terminates.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import cmp_to_key

from .beta_shift import BetaSystem
from .intervals import Cylinder, Interval
from .numeric import (
    Scalar,
    scalar_compare,
    scalar_div,
    scalar_floor,
    scalar_mul,
    scalar_sub,
    scalar_to_float,
)

__all__ = [
    "NoExpansion",
    "EndpointReport",
    "MapModel",
    "IntegerBaseMap",
    "GaussMap",
    "BetaMap",
    "PathologicalMap",
    "CantorComplementMap",
    "model_from_spec",
    "check_condition_ii",
    "gauss_two_step_expansion_check",
]


class NoExpansion(object):
    """Marker for a point whose itinerary leaves the branch domains.

    Carries the digits that were produced before the orbit hit an
    undefined point.
    """

    __slots__ = ("digits",)

    def __init__(self, digits=()):
        self.digits = tuple(digits)

    def __repr__(self):
        return f"NoExpansion(after={self.digits})"


class EndpointReport(object):
    """Endpoints of generation-k cylinders inside a query interval.

    When the interval contains accumulation points of the endpoint set the
    enumeration is necessarily partial: ``acc`` lists the accumulation
    anchors found, ``points`` the finitely many endpoints above the cutoff,
    and ``truncated`` is set.  ``tail_note`` describes the generating rule
    for the omitted endpoints.
    """

    __slots__ = ("points", "acc", "truncated", "tail_note")

    def __init__(self, points, acc=(), truncated=False, tail_note=""):
        self.points = list(points)
        self.acc = list(acc)
        self.truncated = truncated
        self.tail_note = tail_note

    def is_finite(self) -> bool:
        return not self.truncated and not self.acc

    def __repr__(self):
        return (
            f"EndpointReport({len(self.points)} pts, acc={[scalar_to_float(a) for a in self.acc]},"
            f" truncated={self.truncated})"
        )


class MapModel(object):
    """Common interface; concrete backends override everything that matters.

    Queries accept a ``base_word`` anchor: the word of a cylinder already
    known to contain the area of interest.  Anchoring keeps the work per
    query proportional to the depth below the anchor instead of the full
    generation, which is what makes thousand-generation games tractable.
    """

    kind = "abstract"
    has_contraction_bound = False
    finite_alphabet = False
    # smallest n with Acc^n(generation-1 endpoints) empty, None when no such n
    endpoint_accumulation_depth: int | None = None

    def encode(self, x, n: int):
        raise NotImplementedError

    def encode_within(self, base_word, x, extra: int):
        """Digits of x past a cylinder known to contain it (closure).

        Returns the full word (base + continuation) or NoExpansion carrying
        whatever was determined.
        """
        raise NotImplementedError

    def step(self, x):
        """One application of the map, or None when undefined at x."""
        raise NotImplementedError

    def cylinder(self, word) -> Cylinder:
        raise NotImplementedError

    def contraction_bound(self, m: int) -> Scalar:
        raise ValueError(f"{self.kind} has no uniform contraction function")

    def cylinders_meeting(
        self, area: Interval, generation: int, min_length=None, max_count=100000, base_word=()
    ):
        """Generation-g cylinders overlapping the area's interior.

        Interior overlap (positive-length intersection) makes the result
        independent of the anchor: every such cylinder automatically
        extends any word whose cylinder contains the area.  ``min_length``
        prunes to cylinders at least that long; it must be given for
        countable-alphabet models whenever the area touches an accumulation
        point, otherwise the enumeration could not terminate.
        """
        raise NotImplementedError

    def cylinder_containing_point(self, x, generation: int, base_word=()):
        """The generation-g cylinder whose half-open branch chain contains x."""
        if base_word:
            word = self.encode_within(base_word, x, generation - len(base_word))
        else:
            word = self.encode(x, generation)
        if isinstance(word, NoExpansion):
            return None
        return self.cylinder(word)

    def endpoints_in(self, area: Interval, generation: int, min_length=None, max_points=4096) -> EndpointReport:
        """Endpoints of generation-k cylinders inside the area."""
        raise NotImplementedError

    def obstruction_points(self, area: Interval, generation: int, cutoff, base_word=()) -> list:
        """Finite layer of endpoint obstructions inside the area.

        Endpoints, inside the area, of cylinders of generation <= g and
        length >= cutoff (only extensions of the anchor are relevant when
        the area lies inside the anchor's cylinder), plus accumulation
        anchors; avoiding these is one induction step of endpoint avoidance
        at the current scale.
        """
        raise NotImplementedError

    def containment_depth(self, word, area: Interval, base_word=()) -> int:
        """Largest d with cylinder(word[:d]) containing the area.

        The area must already lie inside the base word's cylinder; models
        override this with an incremental walk.
        """
        d = len(base_word)
        while d < len(word) and self.cylinder(word[: d + 1]).interval.contains(area):
            d += 1
        return d

    def orbit(self, y, steps: int) -> list:
        """Exact forward orbit [y, f(y), ...], truncated where undefined."""
        out = [y]
        for _ in range(steps):
            nxt = self.step(out[-1])
            if nxt is None:
                break
            out.append(nxt)
        return out

    def spec(self) -> dict:
        return {"kind": self.kind}

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec()}>"

    @staticmethod
    def _dedup_sorted(pts) -> list:
        # exact sort; float keys collapse at deep generations
        uniq = []
        for p in sorted(pts, key=cmp_to_key(scalar_compare)):
            if not uniq or scalar_compare(uniq[-1], p) != 0:
                uniq.append(p)
        return uniq


# ---------------------------------------------------------------------------


class IntegerBaseMap(MapModel):
    """x -> b*x mod 1 on [0,1) with the full shift on b symbols."""

    has_contraction_bound = True
    finite_alphabet = True
    endpoint_accumulation_depth = 1

    def __init__(self, b: int):
        if b < 2:
            raise ValueError("base must be an integer >= 2")
        self.b = b
        self.kind = f"integer_base:{b}"

    def spec(self):
        return {"kind": "integer_base", "b": self.b}

    def alphabet(self):
        return range(self.b)

    def step(self, x):
        bx = scalar_mul(x, Fraction(self.b))
        return scalar_sub(bx, scalar_floor(bx))

    def encode(self, x, n: int):
        digits = []
        t = x
        for _ in range(n):
            bt = scalar_mul(t, Fraction(self.b))
            d = scalar_floor(bt)
            d = max(0, min(self.b - 1, d))
            digits.append(d)
            t = scalar_sub(bt, d)
        return tuple(digits)

    def encode_within(self, base_word, x, extra: int):
        base_word = tuple(base_word)
        if extra <= 0:
            return base_word
        scale = Fraction(self.b ** len(base_word))
        t = scalar_mul(x, scale)
        t = scalar_sub(t, scalar_floor(t))
        return base_word + self.encode(t, extra)

    def cylinder(self, word) -> Cylinder:
        word = tuple(word)
        if any(not (0 <= s < self.b) for s in word):
            raise ValueError(f"symbol out of range for base {self.b}: {word}")
        num = 0
        for s in word:
            num = num * self.b + s
        scale = Fraction(1, self.b ** len(word))
        lo = num * scale
        return Cylinder(word, Interval(lo, lo + scale))

    def contraction_bound(self, m: int) -> Fraction:
        if m < 0:
            raise ValueError("extension length must be >= 0")
        return Fraction(1, self.b**m)

    def _index_range(self, area: Interval, generation: int):
        """Indices j whose cylinder (j, j+1)/b^g overlaps the area's interior."""
        scale = self.b**generation
        j_lo = scalar_floor(scalar_mul(area.lo, Fraction(scale)))
        w = scalar_mul(area.hi, Fraction(scale))
        fw = scalar_floor(w)
        j_hi = fw - 1 if scalar_compare(fw, w) == 0 else fw
        return max(0, j_lo), min(scale - 1, j_hi)

    def _word_of_index(self, j: int, generation: int) -> tuple:
        word = []
        for _ in range(generation):
            j, r = divmod(j, self.b)
            word.append(r)
        return tuple(reversed(word))

    @staticmethod
    def _index_of_word(word, b: int) -> int:
        idx = 0
        for s in word:
            idx = idx * b + s
        return idx

    def cylinders_meeting(self, area, generation, min_length=None, max_count=100000, base_word=()):
        if generation == 0:
            return [Cylinder((), Interval(Fraction(0), Fraction(1)))]
        base_word = tuple(base_word)
        if generation <= len(base_word):
            # the prefix cylinder contains the area; it is the only
            # interior-overlap cylinder at this generation
            cyl = self.cylinder(base_word[:generation])
            if min_length is not None and scalar_compare(cyl.interval.length(), min_length) < 0:
                return []
            return [cyl]
        scale = Fraction(1, self.b**generation)
        if min_length is not None and scalar_compare(scale, min_length) < 0:
            return []
        j_lo, j_hi = self._index_range(area, generation)
        if base_word:
            span = self.b ** (generation - len(base_word))
            idx_b = self._index_of_word(base_word, self.b)
            j_lo = max(j_lo, idx_b * span)
            j_hi = min(j_hi, (idx_b + 1) * span - 1)
        out = []
        for j in range(j_lo, j_hi + 1):
            lo = j * scale
            iv = Interval(lo, lo + scale)
            if iv.overlaps_interior(area):
                out.append(Cylinder(self._word_of_index(j, generation), iv))
            if len(out) > max_count:
                raise RuntimeError("cylinder enumeration exceeded budget")
        return out

    def endpoints_in(self, area, generation, min_length=None, max_points=4096) -> EndpointReport:
        scale = Fraction(1, self.b**generation)
        if min_length is not None and scalar_compare(scale, min_length) < 0:
            return EndpointReport([])
        j_lo, j_hi = self._index_range(area, generation)
        pts = []
        for j in range(j_lo, j_hi + 2):
            p = j * scale
            if area.contains_point(p) and 0 <= p <= 1:
                pts.append(p)
            if len(pts) > max_points:
                raise RuntimeError("endpoint enumeration exceeded budget")
        return EndpointReport(pts)

    def obstruction_points(self, area, generation, cutoff, base_word=()) -> list:
        # only a narrow band of generations has cylinders above the cutoff;
        # their endpoints are nested so the finest passing generation covers
        # coarser ones, but collect the whole band for clarity
        pts = []
        g = max(1, len(base_word))
        while g <= generation and scalar_compare(Fraction(1, self.b**g), cutoff) >= 0:
            rep = self.endpoints_in(area, g)
            pts.extend(rep.points)
            g += 1
        return self._dedup_sorted(pts)

    def containment_depth(self, word, area, base_word=()) -> int:
        word = tuple(word)
        d = len(base_word)
        lo, hi = area.lo, area.hi
        if d:
            scale = Fraction(self.b**d)
            lo = scalar_sub(scalar_mul(lo, scale), Fraction(self._index_of_word(word[:d], self.b)))
            hi = scalar_sub(scalar_mul(hi, scale), Fraction(self._index_of_word(word[:d], self.b)))
        while d < len(word):
            s = word[d]
            lo2 = scalar_sub(scalar_mul(lo, Fraction(self.b)), s)
            hi2 = scalar_sub(scalar_mul(hi, Fraction(self.b)), s)
            if scalar_compare(lo2, 0) < 0 or scalar_compare(hi2, 1) > 0:
                break
            lo, hi = lo2, hi2
            d += 1
        return d


# ---------------------------------------------------------------------------


class GaussMap(MapModel):
    """x -> 1/x mod 1; digit a branch is (1/(a+1), 1/a], decreasing onto [0,1).

    Cylinders are tracked through continued-fraction convergents, so all
    endpoint arithmetic stays in integers until an interval is built.
    """

    has_contraction_bound = True
    finite_alphabet = False
    endpoint_accumulation_depth = 2
    kind = "gauss"

    def spec(self):
        return {"kind": "gauss"}

    def step(self, x):
        if scalar_compare(x, 0) == 0:
            return None
        inv = 1 / x if isinstance(x, Fraction) else x.inverse()
        return scalar_sub(inv, scalar_floor(inv))

    def digit_of(self, x) -> int | None:
        """Digit of the branch containing x, per the (1/(a+1), 1/a] convention."""
        if scalar_compare(x, 0) <= 0 or scalar_compare(x, 1) > 0:
            return None
        inv = 1 / x if isinstance(x, Fraction) else x.inverse()
        d = scalar_floor(inv)
        # x = 1/d exactly belongs to digit d, floor already agrees there
        return d

    def encode(self, x, n: int):
        digits = []
        t = x
        for _ in range(n):
            d = self.digit_of(t)
            if d is None:
                return NoExpansion(digits)
            digits.append(d)
            inv = 1 / t if isinstance(t, Fraction) else t.inverse()
            t = scalar_sub(inv, d)
        return tuple(digits)

    def __init__(self):
        self._conv_cache = {}

    def _convergents(self, word):
        word = tuple(word)
        hit = self._conv_cache.get(word)
        if hit is not None:
            return hit
        # extend from the nearest cached prefix when possible
        p0, q0, p1, q1 = 1, 0, 0, 1  # empty word: identity section
        start = 0
        j = len(word) - 1
        while j > 0 and j > len(word) - 80:
            pref = self._conv_cache.get(word[:j])
            if pref is not None:
                p0, q0, p1, q1 = pref
                start = j
                break
            j -= 1
        for a in word[start:]:
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if len(self._conv_cache) > 256:
            self._conv_cache.clear()
        self._conv_cache[word] = (p0, q0, p1, q1)
        return p0, q0, p1, q1

    def encode_within(self, base_word, x, extra: int):
        base_word = tuple(base_word)
        if extra <= 0:
            return base_word
        if not base_word:
            got = self.encode(x, extra)
            return got if not isinstance(got, NoExpansion) else got
        p0, q0, p1, q1 = self._convergents(base_word)
        den = scalar_sub(scalar_mul(x, Fraction(q0)), Fraction(p0))
        num = scalar_sub(Fraction(p1), scalar_mul(x, Fraction(q1)))
        if scalar_compare(den, 0) == 0:
            return NoExpansion(base_word)
        t = scalar_div(num, den)
        if scalar_compare(t, 0) < 0 or scalar_compare(t, 1) > 0:
            raise ValueError("point not inside the anchor cylinder")
        got = self.encode(t, extra)
        if isinstance(got, NoExpansion):
            return NoExpansion(base_word + got.digits)
        return base_word + got

    def cylinder(self, word) -> Cylinder:
        word = tuple(word)
        if any(a < 1 for a in word):
            raise ValueError(f"continued fraction digits must be >= 1: {word}")
        p0, q0, p1, q1 = self._convergents(word)
        if not word:
            return Cylinder((), Interval(Fraction(0), Fraction(1)))
        e0 = Fraction(p1, q1)
        e1 = Fraction(p0 + p1, q0 + q1)
        lo, hi = (e0, e1) if e0 <= e1 else (e1, e0)
        return Cylinder(word, Interval(lo, hi))

    def contraction_bound(self, m: int) -> Fraction:
        if m < 0:
            raise ValueError("extension length must be >= 0")
        return Fraction(1, 2 ** (m // 2))

    def _walk(self, area, generation, min_length, collect, max_count, base_word=(), visit=None, interior=False):
        """Depth-first walk over cylinders meeting the area, digit-lazy.

        Starts at ``base_word`` (the area must lie inside its cylinder for
        the result to be exhaustive).  ``collect`` receives generation-g
        cylinders; ``visit`` (optional) receives every intermediate node as
        a Cylinder too, which is how obstruction scans grab the whole band
        in one pass.  ``interior`` switches the meet predicate from closure
        intersection to positive-length overlap.
        """

        def child_interval(p0, q0, p1, q1, a):
            pn, qn = a * p1 + p0, a * q1 + q0
            e0 = Fraction(pn, qn)
            e1 = Fraction(pn + p1, qn + q1)
            return (e0, e1) if e0 <= e1 else (e1, e0)

        budget = [max_count]

        def rec(word, p0, q0, p1, q1):
            depth = len(word)
            if depth == generation:
                a_ = Fraction(p1, q1)
                b_ = Fraction(p0 + p1, q0 + q1)
                iv = Interval(min(a_, b_), max(a_, b_))
                collect(Cylinder(word, iv))
                budget[0] -= 1
                if budget[0] <= 0:
                    raise RuntimeError("cylinder walk exceeded budget")
                return
            if visit is not None and depth > len(base_word):
                a_ = Fraction(p1, q1)
                b_ = Fraction(p0 + p1, q0 + q1)
                visit(Cylinder(word, Interval(min(a_, b_), max(a_, b_))))
            # skip ahead: pull the area back through t -> (p0 t + p1)/(q0 t + q1)
            # to find the first digit whose child can meet it
            start = 1
            ts = []
            for x in (area.lo, area.hi):
                if not isinstance(x, (int, Fraction)):
                    continue
                den = q0 * Fraction(x) - p0
                if den != 0:
                    ts.append((p1 - q1 * Fraction(x)) / den)
            ts = [t for t in ts if t > 0]
            if ts:
                start = max(1, (1 / max(ts)).__floor__())
            acc_end = Fraction(p1, q1) if q1 else None  # children accumulate here
            a = start
            while True:
                lo_c, hi_c = child_interval(p0, q0, p1, q1, a)
                clen = hi_c - lo_c
                if interior:
                    meets = scalar_compare(area.hi, lo_c) > 0 and scalar_compare(area.lo, hi_c) < 0
                else:
                    meets = not (
                        scalar_compare(area.hi, lo_c) < 0 or scalar_compare(area.lo, hi_c) > 0
                    )
                if meets and (min_length is None or scalar_compare(clen, min_length) >= 0):
                    rec(word + (a,), p1, q1, a * p1 + p0, a * q1 + q0)
                if min_length is not None and scalar_compare(clen, min_length) < 0:
                    break
                if not meets and acc_end is not None:
                    # children march monotonically toward the accumulation end
                    if scalar_compare(acc_end, area.lo) < 0 and scalar_compare(hi_c, area.lo) <= 0:
                        break
                    if scalar_compare(acc_end, area.hi) > 0 and scalar_compare(lo_c, area.hi) >= 0:
                        break
                if min_length is None and a > start + 100000:
                    raise RuntimeError("unbounded digit enumeration; pass min_length")
                a += 1

        base_word = tuple(base_word)
        if generation <= len(base_word):
            cyl = self.cylinder(base_word[:generation])
            if min_length is None or scalar_compare(cyl.interval.length(), min_length) >= 0:
                collect(cyl)
            return
        p0, q0, p1, q1 = self._convergents(base_word)
        rec(base_word, p0, q0, p1, q1)

    def cylinders_meeting(self, area, generation, min_length=None, max_count=100000, base_word=()):
        out = []
        self._walk(area, generation, min_length, out.append, max_count, base_word=base_word, interior=True)
        return out

    def obstruction_points(self, area, generation, cutoff, base_word=()) -> list:
        pts = []

        def grab(cyl):
            for p in (cyl.interval.lo, cyl.interval.hi):
                if area.contains_point(p):
                    pts.append(p)

        self._walk(area, generation, cutoff, grab, 100000, base_word=base_word, visit=grab)
        if base_word:
            grab(self.cylinder(base_word))
        if area.contains_point(Fraction(0)):
            pts.append(Fraction(0))
        return self._dedup_sorted(pts)

    def containment_depth(self, word, area, base_word=()) -> int:
        word = tuple(word)
        d = len(base_word)
        p0, q0, p1, q1 = self._convergents(word[:d]) if d else (1, 0, 0, 1)
        while d < len(word):
            a = word[d]
            pn, qn = a * p1 + p0, a * q1 + q0
            e0 = Fraction(pn, qn)
            e1 = Fraction(pn + p1, qn + q1)
            lo, hi = (e0, e1) if e0 <= e1 else (e1, e0)
            if scalar_compare(lo, area.lo) > 0 or scalar_compare(hi, area.hi) < 0:
                break
            p0, q0, p1, q1 = p1, q1, pn, qn
            d += 1
        # remember the walked node; anchored queries extend from here
        if len(self._conv_cache) > 256:
            self._conv_cache.clear()
        self._conv_cache[word[:d]] = (p0, q0, p1, q1)
        return d

    def endpoints_in(self, area, generation, min_length=None, max_points=4096) -> EndpointReport:
        cutoff = min_length
        truncated = False
        acc = []
        if cutoff is None:
            # enumeration is finite iff the area avoids every accumulation
            # anchor; apply a defensive cutoff and report truncation if the
            # area touches an anchor (0 at the very least)
            cutoff = Fraction(1, 4096)
            truncated_probe = True
        else:
            truncated_probe = False
        pts = []
        seen = set()

        def collect(cyl):
            for p in (cyl.interval.lo, cyl.interval.hi):
                if area.contains_point(p) and p not in seen:
                    seen.add(p)
                    pts.append(p)

        self._walk(area, generation, cutoff, collect, max_points * 8)
        if area.contains_point(Fraction(0)):
            acc.append(Fraction(0))
            truncated = True
        if generation > 1:
            # anchors of deeper accumulation: endpoints of shorter cylinders
            anchor_seen = set()

            def collect_anchor(cyl):
                for p in (cyl.interval.lo, cyl.interval.hi):
                    if area.contains_point(p) and p not in anchor_seen:
                        anchor_seen.add(p)
                        if p not in seen:
                            acc.append(p)

            for g in range(1, generation):
                self._walk(area, g, cutoff, collect_anchor, max_points * 8)
            if acc:
                truncated = True
        if truncated_probe and truncated:
            note = "countably many further endpoints accumulate at the listed anchors"
        else:
            note = ""
        pts.sort()
        return EndpointReport(pts, acc=sorted(acc), truncated=truncated, tail_note=note)


# ---------------------------------------------------------------------------


class BetaMap(MapModel):
    """x -> beta*x mod 1 for a terminating base; cylinders are finite type."""

    has_contraction_bound = True
    finite_alphabet = True
    endpoint_accumulation_depth = 1

    def __init__(self, d1_word):
        self.system = BetaSystem(d1_word)
        self.kind = f"beta:{''.join(str(c) for c in self.system.d1_word)}"
        self._node_cache = {}

    def spec(self):
        return {"kind": "beta", "d1_word": "".join(str(c) for c in self.system.d1_word)}

    def alphabet(self):
        return (0, 1)

    def step(self, x):
        sysb = self.system
        bx = sysb.field.lift(x) * sysb.beta
        if scalar_compare(bx, 1) >= 0:
            return bx - 1
        return bx

    def encode(self, x, n: int):
        return self.system.d_expansion(x, n)

    def _node(self, word) -> tuple:
        """(left endpoint value, beta^-n, follower state) for a word.

        Extends from the nearest cached prefix; deep games only ever ask
        for words a few symbols past something already walked.
        """
        word = tuple(word)
        hit = self._node_cache.get(word)
        if hit is not None:
            return hit
        sysb = self.system
        left, scale, state = sysb.field.zero(), sysb.field.one(), ()
        start = 0
        j = len(word) - 1
        while j > 0 and j > len(word) - 80:
            pref = self._node_cache.get(word[:j])
            if pref is not None:
                left, scale, state = pref
                start = j
                break
            j -= 1
        for a in word[start:]:
            left, scale, state = self._child_node(left, scale, state, a)
        if len(self._node_cache) > 256:
            self._node_cache.clear()
        self._node_cache[word] = (left, scale, state)
        return left, scale, state

    def _child_node(self, left, scale, state, a):
        sysb = self.system
        moves = sysb._moves[state]
        if a not in moves:
            raise ValueError(f"inadmissible extension by {a}")
        scale2 = scale * sysb.beta_inv
        left2 = left + scale2 * a if a else left
        return left2, scale2, moves[a]

    def encode_within(self, base_word, x, extra: int):
        base_word = tuple(base_word)
        if extra <= 0:
            return base_word
        left, scale, state = self._node(base_word)
        t = scalar_div(scalar_sub(self.system.field.lift(x), left), scale)
        if scalar_compare(t, 0) < 0:
            raise ValueError("point not inside the anchor cylinder")
        if scalar_compare(t, 1) > 0:
            t = self.system.field.one()
        # greedy digits of t constrained to the follower automaton: symbols
        # beyond the admissible range cannot occur for in-cylinder points
        digits = []
        sysb = self.system
        for _ in range(extra):
            bt = t * sysb.beta
            d = 1 if scalar_compare(bt, 1) >= 0 else 0
            moves = sysb._moves[state]
            if d not in moves:
                d = 1 - d
                if d not in moves:
                    raise ValueError("dead follower state while descending")
            digits.append(d)
            t = bt - d if d else bt
            state = moves[d]
        return base_word + tuple(digits)

    def cylinder(self, word) -> Cylinder:
        # node-cache backed; agrees with the system's direct computation,
        # raising ValueError on inadmissible words via the follower walk
        word = tuple(word)
        left, scale, state = self._node(word)
        return Cylinder(word, Interval(left, left + scale * self.system.sup_of_state(state)))

    def contraction_bound(self, m: int):
        return self.system.contraction_bound(m)

    def containment_depth(self, word, area, base_word=()) -> int:
        word = tuple(word)
        d = len(base_word)
        node = self._node(word[:d])
        while d < len(word):
            cand = self._child_node(*node, word[d])
            left, scale, state = cand
            hi = left + scale * self.system.sup_of_state(state)
            if scalar_compare(left, area.lo) > 0 or scalar_compare(hi, area.hi) < 0:
                break
            node = cand
            d += 1
        # remember the walked node; anchored queries extend from here
        if len(self._node_cache) > 256:
            self._node_cache.clear()
        self._node_cache[word[:d]] = node
        return d

    def cylinders_meeting(self, area, generation, min_length=None, max_count=100000, base_word=()):
        sysb = self.system
        out = []
        budget = [max_count]

        def rec(word, left, scale, state):
            if len(word) == generation:
                right = left + scale * sysb.sup_of_state(state)
                iv = Interval(left, right)
                if iv.overlaps_interior(area) and (
                    min_length is None or scalar_compare(iv.length(), min_length) >= 0
                ):
                    out.append(Cylinder(word, iv))
                    budget[0] -= 1
                    if budget[0] <= 0:
                        raise RuntimeError("cylinder walk exceeded budget")
                return
            scale2 = scale * sysb.beta_inv
            for a, nxt in sorted(sysb._moves[state].items()):
                left2 = left + scale2 * a if a else left
                sup2 = sysb.sup_of_state(nxt)
                length2 = scale2 * sup2
                if scalar_compare(left2 + length2, area.lo) <= 0 or scalar_compare(left2, area.hi) >= 0:
                    continue
                # nested cylinders only shrink: prune whole subtrees early
                if min_length is not None and scalar_compare(length2, min_length) < 0:
                    continue
                rec(word + (a,), left2, scale2, nxt)

        base_word = tuple(base_word)
        if generation == 0:
            return [Cylinder((), Interval(Fraction(0), Fraction(1)))]
        if generation <= len(base_word):
            cyl = self.cylinder(base_word[:generation])
            if min_length is not None and scalar_compare(cyl.interval.length(), min_length) < 0:
                return []
            return [cyl]
        left, scale, state = self._node(base_word)
        rec(base_word, left, scale, state)
        return out

    def obstruction_points(self, area, generation, cutoff, base_word=()) -> list:
        sysb = self.system
        pts = []

        def grab_iv(left, scale, state):
            right = left + scale * sysb.sup_of_state(state)
            for p in (left, right):
                if area.contains_point(p):
                    pts.append(p)

        def rec(word, left, scale, state):
            grab_iv(left, scale, state)
            if len(word) == generation:
                return
            scale2 = scale * sysb.beta_inv
            for a, nxt in sorted(sysb._moves[state].items()):
                left2 = left + scale2 * a if a else left
                sup2 = sysb.sup_of_state(nxt)
                right2 = left2 + scale2 * sup2
                if scalar_compare(right2, area.lo) < 0 or scalar_compare(left2, area.hi) > 0:
                    continue
                if scalar_compare(scale2 * sup2, cutoff) < 0:
                    continue
                rec(word + (a,), left2, scale2, nxt)

        base_word = tuple(base_word)
        left, scale, state = self._node(base_word)
        rec(base_word, left, scale, state)
        return self._dedup_sorted(pts)

    def endpoints_in(self, area, generation, min_length=None, max_points=4096) -> EndpointReport:
        pts = []
        for cyl in self.cylinders_meeting(area, generation, min_length=min_length, max_count=max_points * 4):
            for p in (cyl.interval.lo, cyl.interval.hi):
                if area.contains_point(p) and all(scalar_compare(p, q) != 0 for q in pts):
                    pts.append(p)
        pts.sort(key=cmp_to_key(scalar_compare))
        return EndpointReport(pts)


# ---------------------------------------------------------------------------


class PathologicalMap(MapModel):
    """The recursive example defeating the interval game.

    (0,1) is split into blocks [2^-i, 2^-i+1); a block with index i is cut
    into 4i equal parts, every second part (odd positions) carries a linear
    branch onto [0,1), the remaining parts are cut into 4i parts again, and
    so on forever.  There is no uniform contraction function and no
    generation at which the endpoint set stops accumulating, so the model
    carries no condition metadata at all.
    """

    has_contraction_bound = False
    finite_alphabet = False
    endpoint_accumulation_depth = None
    kind = "pathological"

    def spec(self):
        return {"kind": "pathological"}

    @staticmethod
    def block(i: int) -> Interval:
        return Interval(Fraction(1, 2**i), Fraction(1, 2 ** (i - 1)))

    @staticmethod
    def parts(cell: Interval, i: int) -> list:
        """The 4i equal parts of a cell, as (index, Interval) pairs."""
        n = 4 * i
        width = scalar_mul(cell.length(), Fraction(1, n))
        out = []
        lo = cell.lo
        for idx in range(n):
            hi = lo + width if not isinstance(lo, Fraction) else lo + width
            out.append((idx, Interval(lo, hi)))
            lo = hi
        return out

    @classmethod
    def defined_parts(cls, cell: Interval, i: int) -> list:
        return [iv for idx, iv in cls.parts(cell, i) if idx % 2 == 1]

    @classmethod
    def undefined_parts(cls, cell: Interval, i: int) -> list:
        return [iv for idx, iv in cls.parts(cell, i) if idx % 2 == 0]

    def branches_meeting(self, area: Interval, min_length, max_depth: int = 12) -> list:
        """Defined linear branches meeting the area, down to a depth budget."""
        out = []
        for i in range(1, 64):
            blk = self.block(i)
            if scalar_compare(blk.hi, area.lo) < 0:
                break
            if not blk.intersects(area):
                continue
            stack = [(blk, 0)]
            while stack:
                cell, depth = stack.pop()
                if depth >= max_depth:
                    continue
                if scalar_compare(scalar_mul(cell.length(), Fraction(1, 4 * i)), min_length) < 0:
                    continue
                for idx, part in self.parts(cell, i):
                    if not part.intersects(area):
                        continue
                    if idx % 2 == 1:
                        out.append(part)
                    else:
                        stack.append((part, depth + 1))
        return out

    def step(self, x):
        branch = self._branch_containing(x, max_depth=48)
        if branch is None:
            return None
        return scalar_mul(scalar_sub(x, branch.lo), 1 / (branch.hi - branch.lo))

    def _branch_containing(self, x, max_depth: int):
        if scalar_compare(x, 0) <= 0 or scalar_compare(x, 1) >= 0:
            return None
        i = 1
        while scalar_compare(x, Fraction(1, 2**i)) < 0:
            i += 1
            if i > 256:
                return None
        cell = self.block(i)
        for _ in range(max_depth):
            found = None
            for idx, part in self.parts(cell, i):
                if part.contains_point(x) and (
                    idx % 2 == 1 or part.contains_point_strictly(x) or scalar_compare(part.lo, x) == 0
                ):
                    found = (idx, part)
                    if idx % 2 == 1:
                        return part
                    break
            if found is None:
                return None
            cell = found[1]
        return None

    def encode(self, x, n: int):
        # symbols are opaque here; the demo only needs definedness
        digits = []
        t = x
        for _ in range(n):
            nxt = self.step(t)
            if nxt is None:
                return NoExpansion(digits)
            digits.append(0)
            t = nxt
        return tuple(digits)


# ---------------------------------------------------------------------------


class CantorComplementMap(MapModel):
    """Linear branches on the removed middle thirds of the Cantor set.

    Undefined exactly on the middle-third Cantor set, a perfect set: the
    endpoint accumulation criterion fails at every depth, yet one move of
    size 1/9 lands inside the first removed interval.
    """

    has_contraction_bound = False
    finite_alphabet = False
    endpoint_accumulation_depth = None
    kind = "cantor_complement"

    def spec(self):
        return {"kind": "cantor_complement"}

    def removed_intervals(self, max_level: int) -> list:
        """Removed middle thirds by level: level L has 2^(L-1) intervals of length 3^-L."""
        out = []
        cantor_cells = [Interval(Fraction(0), Fraction(1))]
        for level in range(1, max_level + 1):
            next_cells = []
            for cell in cantor_cells:
                third = scalar_mul(cell.length(), Fraction(1, 3))
                a = cell.lo + third
                b = a + third
                out.append(Interval(a, b))
                next_cells.append(Interval(cell.lo, a))
                next_cells.append(Interval(b, cell.hi))
            cantor_cells = next_cells
        return out

    def branches_meeting(self, area: Interval, min_length, max_level: int = 20) -> list:
        out = []
        for level in range(1, max_level + 1):
            if scalar_compare(Fraction(1, 3**level), min_length) < 0:
                break
            for iv in self.removed_intervals(level)[-(2 ** (level - 1)) :]:
                if iv.intersects(area):
                    out.append(iv)
        return out

    def step(self, x):
        br = self._branch_containing(x, 48)
        if br is None:
            return None
        return scalar_mul(scalar_sub(x, br.lo), 1 / (br.hi - br.lo))

    def _branch_containing(self, x, max_level: int):
        if scalar_compare(x, 0) < 0 or scalar_compare(x, 1) > 0:
            return None
        cell = Interval(Fraction(0), Fraction(1))
        for _ in range(max_level):
            third = scalar_mul(cell.length(), Fraction(1, 3))
            a = cell.lo + third
            b = a + third
            mid = Interval(a, b)
            if mid.contains_point_strictly(x):
                return mid
            if scalar_compare(x, a) <= 0:
                cell = Interval(cell.lo, a)
            elif scalar_compare(x, b) >= 0:
                cell = Interval(b, cell.hi)
            else:
                return mid
        return None

    def encode(self, x, n: int):
        digits = []
        t = x
        for _ in range(n):
            nxt = self.step(t)
            if nxt is None:
                return NoExpansion(digits)
            digits.append(0)
            t = nxt
        return tuple(digits)


# ---------------------------------------------------------------------------


def model_from_spec(spec) -> MapModel:
    """Build a model from a config mapping or a compact string form."""
    if isinstance(spec, str):
        if ":" in spec:
            kind, _, arg = spec.partition(":")
        else:
            kind, arg = spec, ""
        spec = {"kind": kind}
        if kind == "integer_base":
            spec["b"] = int(arg)
        elif kind == "beta":
            spec["d1_word"] = arg
    kind = spec["kind"]
    if kind == "integer_base":
        return IntegerBaseMap(int(spec["b"]))
    if kind == "gauss":
        return GaussMap()
    if kind == "beta":
        return BetaMap(spec["d1_word"])
    if kind == "pathological":
        return PathologicalMap()
    if kind == "cantor_complement":
        return CantorComplementMap()
    raise ValueError(f"unknown model kind {kind!r}")


# ---------------------------------------------------------------------------
# condition (ii) checks


def _random_word(model: MapModel, length: int, rng: random.Random) -> tuple:
    if isinstance(model, IntegerBaseMap):
        return tuple(rng.randrange(model.b) for _ in range(length))
    if isinstance(model, GaussMap):
        return tuple(rng.randint(1, 12) if rng.random() < 0.8 else rng.randint(1, 120) for _ in range(length))
    if isinstance(model, BetaMap):
        word = ()
        for _ in range(length):
            options = model.system.legal_extensions(word)
            word = word + (rng.choice(options),)
        return word
    raise ValueError(f"cannot sample words for {model.kind}")


def check_condition_ii(model: MapModel, depth_n: int, extension_m: int, samples: int, seed: int) -> dict:
    """Sample words of length n+m and compare the cylinder ratio to g(m), exactly.

    Raises AssertionError naming the first violating word; returns a report
    with the worst (largest) observed ratio.
    """
    rng = random.Random(seed)
    g = model.contraction_bound(extension_m)
    worst = None
    worst_word = None
    for _ in range(samples):
        w = _random_word(model, depth_n + extension_m, rng)
        big = model.cylinder(w).length()
        small = model.cylinder(w[:depth_n]).length()
        ratio = scalar_mul(big, 1 / small if isinstance(small, Fraction) else small.inverse())
        if scalar_compare(ratio, g) > 0:
            raise AssertionError(
                f"condition (ii) violated at word {w}: ratio {scalar_to_float(ratio)} > g({extension_m})"
            )
        if worst is None or scalar_compare(ratio, worst) > 0:
            worst = ratio
            worst_word = w
    return {
        "model": model.kind,
        "n": depth_n,
        "m": extension_m,
        "samples": samples,
        "bound": scalar_to_float(g),
        "worst_ratio": scalar_to_float(worst) if worst is not None else None,
        "worst_word": list(worst_word) if worst_word else None,
        "ok": True,
    }


def gauss_two_step_expansion_check(samples: int, seed: int) -> dict:
    """Exact |(f^2)'(x)| = 1/(x^2 f(x)^2) >= 9/4 on sampled valid points."""
    model = GaussMap()
    rng = random.Random(seed)
    bound = Fraction(9, 4)
    worst = None
    checked = 0
    while checked < samples:
        x = Fraction(rng.getrandbits(40) + 1, 2**40 + 1)
        fx = model.step(x)
        if fx is None or scalar_compare(fx, 0) == 0:
            continue
        f2x = model.step(fx)
        if f2x is None:
            continue
        deriv = 1 / (x * x * fx * fx)
        assert deriv >= bound, f"two-step expansion below 9/4 at x={x}: {float(deriv)}"
        worst = deriv if worst is None else min(worst, deriv)
        checked += 1
    return {"samples": checked, "bound": "9/4", "worst": float(worst), "ok": True}

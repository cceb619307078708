"""Certification and cross-checking machinery.

Nothing here trusts the strategy that produced a transcript: codings are
re-derived from the recorded intervals and the model, block bookkeeping is
replayed from the plan, and the gap bounds are re-checked with exact
arithmetic.  The dimension estimators are deliberately independent of the
game code: a transfer-matrix spectral radius with certified bracketing,
and a plain cylinder-counting bound to play against it.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .intervals import Interval
from .map_models import MapModel, NoExpansion
from .numeric import (
    scalar_compare,
    scalar_min,
    scalar_mul,
    scalar_sub,
    scalar_to_float,
    scalar_to_json,
)
from .strategies import plan_block_size

__all__ = [
    "AvoidanceCertificate",
    "CannotCertify",
    "AuditFailure",
    "certified_coding",
    "certify_avoidance",
    "orbit",
    "subshift_dimension_oracle",
    "box_count_lower_bound",
    "transcript_audit",
]


class AvoidanceCertificate(object):
    """Finite-data witness that the limit point's orbit avoids the target.

    ``epsilon`` is an exact positive lower bound on the distance from every
    certified orbit point (and, through the block guarantee, every future
    one) to the target.
    """

    ok = True

    def __init__(self, model_kind, target, prefix, coding_len, epsilon, detail):
        self.model_kind = model_kind
        self.target = target
        self.prefix = tuple(prefix)
        self.coding_len = coding_len
        self.epsilon = epsilon
        self.detail = detail

    def to_json(self) -> dict:
        return {
            "certified": True,
            "model": self.model_kind,
            "target": scalar_to_json(self.target),
            "N": len(self.prefix),
            "coding_len": self.coding_len,
            "epsilon": scalar_to_json(self.epsilon),
            "epsilon_float": scalar_to_float(self.epsilon),
            **self.detail,
        }

    def __repr__(self):
        return f"AvoidanceCertificate(N={len(self.prefix)}, L={self.coding_len}, eps~{scalar_to_float(self.epsilon):.3g})"


class CannotCertify(object):
    ok = False

    def __init__(self, reason: str, detail=None):
        self.reason = reason
        self.detail = detail or {}

    def to_json(self) -> dict:
        return {"certified": False, "reason": self.reason, **self.detail}

    def __repr__(self):
        return f"CannotCertify({self.reason})"


class AuditFailure(Exception):
    def __init__(self, round_index, what):
        self.round_index = round_index
        self.what = what
        super().__init__(f"audit failed at round {round_index}: {what}")


# ---------------------------------------------------------------------------
# coding extraction and certificates


def certified_coding(model: MapModel, enclosure: Interval) -> tuple:
    """The deepest symbol word whose cylinder closure contains the enclosure.

    Independent of any strategy annotations: derived from the enclosure's
    midpoint expansion plus an exact containment walk.
    """
    mid = enclosure.midpoint()
    word: tuple = ()
    step = 16
    while True:
        try:
            got = model.encode_within(word, mid, step)
        except ValueError:
            break
        if isinstance(got, NoExpansion):
            word = tuple(got.digits)
            break
        word = tuple(got)
        if not model.cylinder(word).interval.contains(enclosure):
            break
        if len(word) > 500000:
            break
        step *= 2
    return word[: model.containment_depth(word, enclosure)]


def _window_intervals(model: MapModel, word: tuple, N: int):
    """Exact cylinder intervals of all length-N windows of the word."""
    if hasattr(model, "system"):
        sysb = model.system
        out = []
        val = sysb.pi_value(word[:N])
        scale = sysb.beta_inv**N
        for k in range(len(word) - N + 1):
            win = word[k : k + N]
            state = sysb.state_of(win)
            out.append(Interval(val, val + scale * sysb.sup_of_state(state)))
            if k + N < len(word):
                val = val * sysb.beta - win[0] + scale * word[k + N]
        return out
    return [model.cylinder(word[k : k + N]).interval for k in range(len(word) - N + 1)]


def _plan_from_header(transcript, component: int | None = None) -> dict | None:
    if component is not None:
        plans = transcript.header.get("plans")
        if plans is not None:
            return plans[component]
    return transcript.header.get("plan")


def certify_avoidance(
    model: MapModel, transcript, target, N: int = None, audit: dict | None = None, component: int | None = None
):
    """Check a finished transcript against the symbolic avoidance contract.

    Requirements: the limit enclosure sits inside a certified coding of
    length L >= N; the target's length-N coding prefix occurs nowhere in
    the certified coding; the block bookkeeping guarantees the prefix
    cannot appear later either (plan arithmetic rechecked, completed
    blocks clean, block turn density as audited); and the exact distance
    from every certified shift cylinder to the target is positive.
    """
    plan = _plan_from_header(transcript, component)
    if plan is None:
        return CannotCertify("no block plan recorded with the transcript")
    b0, n = plan["b0"], plan["n"]
    c = Fraction(plan["c"])
    if N is None:
        N = plan["N"]
    if N != b0 + 2 * n:
        return CannotCertify("avoidance length inconsistent with the plan")
    if not (2 ** (c.numerator * n) > (n + 1) ** c.denominator):
        return CannotCertify("plan block size too small for the halving argument")

    prefix = model.encode(target, N)
    if isinstance(prefix, NoExpansion):
        return CannotCertify("target expansion undefined at the required depth")
    dangerous = {tuple(prefix[b0 + i : b0 + i + n]) for i in range(n + 1)}
    recorded = {tuple(int(ch) for ch in w) for w in plan["dangerous"]}
    if dangerous != recorded:
        return CannotCertify("recorded dangerous words disagree with the target coding")

    enclosure = transcript.limit_enclosure
    word = certified_coding(model, enclosure)
    L = len(word)
    if L < N:
        return CannotCertify(f"certified coding too shallow: {L} < {N}", {"coding_len": L})

    prefix = tuple(prefix)
    for k in range(L - N + 1):
        if word[k : k + N] == prefix:
            return CannotCertify(f"target prefix occurs at shift {k}", {"coding_len": L})

    completed = 0
    j = 0
    while b0 + (j + 1) * n <= L:
        block = word[b0 + j * n : b0 + (j + 1) * n]
        if block in dangerous:
            return CannotCertify(f"dangerous word fixed in completed block {j}")
        completed += 1
        j += 1
    if completed == 0:
        return CannotCertify("no block completed yet; future guarantee not established")
    if audit is not None and not audit.get("ok", False):
        return CannotCertify("transcript audit failed")

    # exact geometric margin
    prefix_iv = model.cylinder(prefix).interval
    if not prefix_iv.contains_point(target):
        return CannotCertify("target not inside its own coding cylinder")
    boundary = scalar_min(
        scalar_sub(target, prefix_iv.lo), scalar_sub(prefix_iv.hi, target)
    )
    if scalar_compare(boundary, 0) <= 0:
        return CannotCertify("target sits on a cylinder boundary; no positive margin")
    eps = boundary
    shift_min = None
    for iv in _window_intervals(model, word, N):
        d = iv.distance_to_point(target)
        if shift_min is None or scalar_compare(d, shift_min) < 0:
            shift_min = d
    if shift_min is not None and scalar_compare(shift_min, 0) <= 0:
        return CannotCertify("a certified shift cylinder touches the target")
    if shift_min is not None:
        eps = scalar_min(eps, shift_min)

    return AvoidanceCertificate(
        model.kind,
        target,
        prefix,
        L,
        eps,
        {
            "blocks_completed": completed,
            "boundary_margin": scalar_to_float(boundary),
            "min_shift_distance": scalar_to_float(shift_min) if shift_min is not None else None,
            "plan": plan,
        },
    )


def orbit(model: MapModel, y, steps: int) -> dict:
    """Exact forward orbit with truncation reporting."""
    pts = model.orbit(y, steps)
    return {
        "points": pts,
        "truncated": len(pts) < steps + 1,
        "length": len(pts),
    }


# ---------------------------------------------------------------------------
# dimension estimators


def _tarjan_scc(n_states: int, succ) -> list:
    """Iterative Tarjan strongly-connected components."""
    index = [None] * n_states
    low = [0] * n_states
    on_stack = [False] * n_states
    stack = []
    sccs = []
    counter = [0]
    for root in range(n_states):
        if index[root] is not None:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] is None:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


def _spectral_radius_certified(matrix: np.ndarray, rel_tol: float = 1e-12, max_iter: int = 100000):
    """Perron root of a nonnegative matrix with Collatz-Wielandt brackets.

    Decomposes into strongly connected components and brackets the root of
    each; adding the identity makes irreducible blocks primitive so the
    bounds close monotonically.
    """
    n = matrix.shape[0]
    succ = [list(np.nonzero(matrix[i])[0]) for i in range(n)]
    best = (0.0, 0.0)
    for comp in _tarjan_scc(n, succ):
        sub = matrix[np.ix_(comp, comp)]
        if len(comp) == 1 and sub[0, 0] == 0:
            continue
        m = sub + np.eye(len(comp))
        v = np.ones(len(comp))
        lo, hi = 0.0, float("inf")
        for _ in range(max_iter):
            w = m @ v
            ratios = w / v
            lo_new, hi_new = float(ratios.min()), float(ratios.max())
            lo, hi = max(lo, lo_new), min(hi, hi_new)
            if hi - lo <= rel_tol * max(lo, 1.0):
                break
            v = w / w.max()
        lam = (max(lo - 1.0, 0.0), max(hi - 1.0, 0.0))
        if lam[0] > best[0]:
            best = lam
    return best


def subshift_dimension_oracle(alphabet_size: int, forbidden_words, rel_tol: float = 1e-12) -> dict:
    """dim = log(spectral radius) / log(alphabet size) for factor avoidance.

    Builds the de Bruijn transfer graph on (l-1)-grams, l the longest
    forbidden word; a transition is allowed when no forbidden word is a
    suffix of the extended gram.  The estimate is rounded toward zero
    (certified lower bound).
    """
    words = [tuple(int(c) for c in w) for w in forbidden_words]
    if any(any(not (0 <= c < alphabet_size) for c in w) for w in words):
        raise ValueError("forbidden word symbol outside the alphabet")
    if not words:
        return {"estimate": 1.0, "lambda": float(alphabet_size), "states": 0, "empty": False,
                "method": "transfer-matrix", "certified_direction": "lower"}
    wordset = set(words)
    ell = max(len(w) for w in words)
    if ell == 1:
        live = alphabet_size - len(wordset)
        lam = float(live)
        est = math.log(lam) / math.log(alphabet_size) if live > 0 else 0.0
        return {"estimate": est, "lambda": lam, "states": live, "empty": live == 0,
                "method": "transfer-matrix", "certified_direction": "lower"}

    def contains_forbidden(gram) -> bool:
        for w in wordset:
            lw = len(w)
            for i in range(len(gram) - lw + 1):
                if gram[i : i + lw] == w:
                    return True
        return False

    def bad_transition(gram_ext) -> bool:
        for w in wordset:
            if len(gram_ext) >= len(w) and gram_ext[-len(w) :] == w:
                return True
        return False

    from itertools import product as iproduct

    states = [g for g in iproduct(range(alphabet_size), repeat=ell - 1) if not contains_forbidden(g)]
    idx = {g: i for i, g in enumerate(states)}
    n = len(states)
    if n == 0:
        return {"estimate": 0.0, "lambda": 0.0, "states": 0, "empty": True,
                "method": "transfer-matrix", "certified_direction": "lower"}
    mat = np.zeros((n, n))
    for g, i in idx.items():
        for a in range(alphabet_size):
            ext = g + (a,)
            if bad_transition(ext):
                continue
            nxt = ext[1:]
            j = idx.get(nxt)
            if j is not None:
                mat[i, j] += 1.0
    lam_lo, lam_hi = _spectral_radius_certified(mat, rel_tol)
    if lam_lo < 1.0:
        # no cycle survives: at most polynomially many words, dimension zero
        return {"estimate": 0.0, "lambda": lam_lo, "states": n, "empty": True,
                "method": "transfer-matrix", "certified_direction": "lower"}
    est = math.log(lam_lo) / math.log(alphabet_size)
    return {
        "estimate": est,
        "lambda": lam_lo,
        "lambda_bracket": [lam_lo, lam_hi],
        "states": n,
        "empty": False,
        "method": "transfer-matrix",
        "certified_direction": "lower",
    }


def box_count_lower_bound(model: MapModel, forbidden_words, depth: int, digit_bound: int = 20) -> dict:
    """log(#surviving depth-g cylinders) / -log(covering scale).

    Counts cylinder words avoiding the forbidden factors with an exact
    integer transfer recursion.  The covering scale is the smallest
    cylinder at that depth, which keeps the quotient a genuine lower-bound
    proxy when cylinder lengths are nonuniform; on integer bases all
    cylinders agree, so the scale is just b^-depth.
    """
    words = [tuple(int(c) for c in w) for w in forbidden_words]
    from .map_models import BetaMap, GaussMap, IntegerBaseMap

    if isinstance(model, IntegerBaseMap):
        symbols = list(range(model.b))
        legal = None
        scale_log = depth * math.log(model.b)
        truncated = False
    elif isinstance(model, GaussMap):
        symbols = list(range(1, digit_bound + 1))
        legal = None
        c = model.cylinder(tuple([digit_bound] * depth))
        scale_log = -math.log(scalar_to_float(c.interval.length()))
        truncated = True
    elif isinstance(model, BetaMap):
        symbols = [0, 1]
        legal = model.system
        lengths = [scalar_to_float(model.cylinder(w).interval.length()) for w in model.system.admissible_words(depth)]
        scale_log = -math.log(min(lengths))
        truncated = False
    else:
        raise ValueError(f"box counting unsupported for {model.kind}")

    ell = max((len(w) for w in words), default=1)
    wordset = set(words)

    def ok(word) -> bool:
        for w in wordset:
            lw = len(w)
            if lw <= len(word) and word[-lw:] == w:
                return False
        return True

    # exact DP over bounded-memory suffixes
    from collections import defaultdict

    memory = max(ell - 1, legal.k - 1 if legal is not None else 0, 1)
    frontier = {(): 1}
    for _ in range(depth):
        nxt = defaultdict(int)
        for suffix, cnt in frontier.items():
            for a in symbols:
                cand = suffix + (a,)
                if legal is not None and not legal.is_admissible(cand):
                    # suffix admissibility is the right Markov condition:
                    # beta constraints only look back k-1 symbols
                    continue
                if not ok(cand):
                    continue
                nxt[cand[max(0, len(cand) - memory) :]] += cnt
        frontier = dict(nxt)
    count = sum(frontier.values())
    if count == 0:
        return {"estimate": 0.0, "count": 0, "depth": depth, "truncated": truncated,
                "method": "box-count", "certified_direction": "lower"}
    return {
        "estimate": math.log(count) / scale_log,
        "count": count,
        "depth": depth,
        "truncated": truncated,
        "method": "box-count",
        "certified_direction": "lower",
    }


# ---------------------------------------------------------------------------
# transcript audit


def _audit_game_legality(transcript) -> None:
    """Nesting, exact ratios and the classical length law, re-derived."""
    header = transcript.header["config"]
    alpha = Fraction(header["alpha"])
    beta = Fraction(header["beta_game"])
    variant = header.get("variant", "classical")
    prev_w = None
    b0_len = None
    for r in transcript.rounds:
        i, B, W = r["round"], r["B"], r["W"]
        if prev_w is not None and not prev_w.contains(B):
            raise AuditFailure(i, "black interval escapes the previous white interval")
        if not B.contains(W):
            raise AuditFailure(i, "white interval escapes black's interval")
        if variant == "classical":
            if prev_w is not None and scalar_compare(B.length(), scalar_mul(prev_w.length(), beta)) != 0:
                raise AuditFailure(i, "black ratio violated")
            if scalar_compare(W.length(), scalar_mul(B.length(), alpha)) != 0:
                raise AuditFailure(i, "white ratio violated")
            if b0_len is None:
                b0_len = B.length()
            expect = scalar_mul(b0_len, alpha * (alpha * beta) ** i)
            if scalar_compare(W.length(), expect) != 0:
                raise AuditFailure(i, "length law |W_k| = a(ab)^k |B_0| violated")
        prev_w = W


def _recompute_max_generation(model, B, fixed, k_floor) -> int:
    g = max(k_floor, len(fixed))
    blen = B.length()
    while True:
        nxt = model.cylinders_meeting(B, g + 1, min_length=blen, max_count=4096, base_word=fixed)
        if not nxt:
            return g
        g += 1
        if g > 10**6:
            raise ArithmeticError("audit generation search diverged")


def _survivors(model, fixed, side, seg_constraint) -> set:
    out = set()
    for d, seg in seg_constraint.items():
        try:
            cyl = model.cylinder(fixed + seg)
        except ValueError:
            continue
        if cyl.interval.overlaps_interior(side):
            out.add(d)
    return out


def transcript_audit(model: MapModel, transcript, component: int | None = None, n_components: int = 1) -> dict:
    """Re-verify the strategy invariants from the raw transcript.

    Everything is recomputed from the recorded intervals, the model and
    the plan: maximal generations, the center cylinder and side geometry,
    trap containment, the multi-turn |C| <= |B_{j-2}| relation, the
    dangerous-word evolution with its per-turn halving, per-block turn
    density, and the stage gap dichotomy

        one White turn in phase 2   =>  g(k_{i+1}-k_i-k) >  (a b_eff)^2
        several White turns         =>  g(k_{i+1}-k_i-k) >= (a b_eff)^3

    (whenever k_{i+1}-k_i > k), which is what bounds the gaps.  Any
    mismatch raises :class:`AuditFailure` naming the round.
    """
    _audit_game_legality(transcript)
    header = transcript.header["config"]
    alpha = Fraction(header["alpha"])
    # in the modified game Black's guaranteed shrink factor is gamma0
    beta = Fraction(header.get("gamma0") or header["beta_game"])
    beta_eff = beta * (alpha * beta) ** (n_components - 1)
    from .strategies import derive_generation_offset

    k = derive_generation_offset(model)["k"]
    plan = _plan_from_header(transcript, component)
    dangerous = set()
    b0 = n = None
    cn = 0
    if plan is not None:
        b0, n = plan["b0"], plan["n"]
        c = Fraction(plan["c"])
        cn = -((-c.numerator * n) // c.denominator)
        dangerous = {tuple(int(ch) for ch in w) for w in plan["dangerous"]}

    rounds = []
    for r in transcript.rounds:
        ann = r["ann"].get("white", {})
        if component is None or ann.get("comp", 0) == component:
            rounds.append((r["round"], r["B"], r["W"], ann))

    fixed: tuple = ()
    k_prev = 0
    stages = []  # (k_i, phase2_turns)
    gen = None
    stage_hist = []
    phase2_t = 0
    block_index = 0
    remaining = set(dangerous)
    block_turn_counts = []
    cur_block_turns = 0
    blocks_done = 0

    def block_bounds(idx):
        start = b0 + idx * n + 1
        return start, start + n - 1

    for rnd, B, W, ann in rounds:
        mv = ann.get("mv")
        if ann.get("ph") == 1:
            if mv != "choice":
                raise AuditFailure(rnd, f"phase-1 move must be a choice, got {mv}")
            ki = _recompute_max_generation(model, B, fixed, k_prev)
            if ki != ann.get("ki"):
                raise AuditFailure(rnd, f"recomputed k_i={ki} disagrees with annotation {ann.get('ki')}")
            gen = ki + k
            if gen != ann.get("gen"):
                raise AuditFailure(rnd, "generation annotation mismatch")
            blen = B.length()
            quarter = scalar_mul(blen, Fraction(1, 4))
            oversized = model.cylinders_meeting(B, gen, min_length=quarter, max_count=4096, base_word=fixed)
            if oversized:
                raise AuditFailure(rnd, "a generation cylinder of length >= |B|/4 meets B")
            center = B.midpoint()
            try:
                cyl = model.cylinder_containing_point(center, gen, base_word=fixed)
            except ValueError:
                cyl = None
            if cyl is None:
                left = Interval(B.lo, center)
                right = Interval(center, B.hi)
                if ann.get("cp") is not None:
                    raise AuditFailure(rnd, "annotation claims a center cylinder where none exists")
            else:
                left = Interval(B.lo, cyl.interval.lo)
                right = Interval(cyl.interval.hi, B.hi)
                if ann.get("cp") is None:
                    raise AuditFailure(rnd, "center cylinder exists but annotation says otherwise")
            for side in (left, right):
                if scalar_compare(side.length(), quarter) <= 0:
                    raise AuditFailure(rnd, "side component not longer than |B|/4")
            in_left = left.contains(W)
            in_right = right.contains(W)
            if not (in_left or in_right):
                raise AuditFailure(rnd, "white interval not inside either side family")
            side_name = "L" if in_left else "R"
            if side_name != ann.get("side"):
                raise AuditFailure(rnd, "side annotation mismatch")
            if plan is not None and fixed:
                start, end = block_bounds(block_index)
                seg_lo, seg_hi = len(fixed) + 1, gen
                if start <= seg_lo and seg_hi <= end:
                    seg_constraint = {
                        d: tuple(d[p - start] for p in range(seg_lo, seg_hi + 1)) for d in remaining
                    }
                    surv_l = _survivors(model, fixed, left, seg_constraint)
                    surv_r = _survivors(model, fixed, right, seg_constraint)
                    if surv_l & surv_r:
                        raise AuditFailure(rnd, "survivor sets overlap on a pinned segment")
                    chosen = surv_l if side_name == "L" else surv_r
                    other = surv_r if side_name == "L" else surv_l
                    if len(chosen) > len(other) or (len(chosen) == len(other) and side_name == "R"):
                        raise AuditFailure(rnd, "side choice not optimal for the dangerous words")
                    seq = ann.get("seq")
                    if seq is None:
                        raise AuditFailure(rnd, "in-block choice missing its sequence-turn record")
                    if seq.get("bef") != len(remaining) or seq.get("aft") != len(chosen):
                        raise AuditFailure(rnd, "sequence-turn bookkeeping mismatch")
                    if len(chosen) > (len(remaining) + 1) // 2:
                        raise AuditFailure(rnd, "halving violated on a logged sequence turn")
                    remaining = chosen
                    cur_block_turns += 1
            stage_hist = [B]
            phase2_t = 0
            continue

        # phase 2
        if gen is None:
            raise AuditFailure(rnd, "phase-2 move before any phase-1 choice")
        stage_hist.append(B)
        phase2_t += 1
        if mv == "trap":
            seg = tuple(ann.get("seg", ()))
            word = fixed + seg
            if len(word) != gen:
                raise AuditFailure(rnd, "trap word length disagrees with the generation")
            try:
                cyl = model.cylinder(word)
            except ValueError:
                raise AuditFailure(rnd, "trap word is not a valid cylinder")
            if not cyl.interval.contains(W):
                raise AuditFailure(rnd, "white interval not inside the trapped cylinder")
            if ann.get("t2") != phase2_t:
                raise AuditFailure(rnd, "phase-2 turn count mismatch")
            if phase2_t >= 2:
                b_ref = stage_hist[phase2_t - 2]
                if scalar_compare(cyl.interval.length(), b_ref.length()) > 0:
                    raise AuditFailure(rnd, "multi-turn trap cylinder exceeds |B_{j-2}|")
            stages.append((gen - k, phase2_t))
            k_prev = gen - k
            fixed = word
            new_len = len(word)
            if plan is not None and new_len >= b0:
                while True:
                    start, end = block_bounds(block_index)
                    if new_len < end:
                        break
                    block_word = fixed[start - 1 : end]
                    if block_word in dangerous:
                        raise AuditFailure(rnd, f"dangerous word fixed in block {block_index}")
                    blocks_done += 1
                    block_turn_counts.append(cur_block_turns)
                    cur_block_turns = 0
                    block_index += 1
                start, end = block_bounds(block_index)
                fixed_part = fixed[start - 1 : min(new_len, end)]
                remaining = {d for d in dangerous if d[: len(fixed_part)] == tuple(fixed_part)}
        elif mv == "squeeze":
            # the squeeze property: W only meets generation cylinders that
            # lie inside B; check the two boundary overhangs directly
            for endpoint in (B.lo, B.hi):
                try:
                    cyl = model.cylinder_containing_point(endpoint, gen, base_word=fixed)
                except ValueError:
                    cyl = None
                if cyl is None:
                    continue
                if not B.contains(cyl.interval) and cyl.interval.overlaps_interior(W):
                    raise AuditFailure(rnd, "squeeze move meets a cylinder not contained in B")
        elif mv == "avoid":
            # endpoint avoidance makes no per-turn emptiness promise; replay
            # the documented greedy placement and demand an exact match
            from .strategies import avoid_finite_points

            cutoff = scalar_mul(B.length(), alpha * Fraction(1, 4))
            pts = model.obstruction_points(B, gen, cutoff, base_word=fixed)
            expected = avoid_finite_points(B, pts, alpha)
            if not (scalar_compare(expected.lo, W.lo) == 0 and scalar_compare(expected.hi, W.hi) == 0):
                raise AuditFailure(rnd, "avoid move differs from the greedy endpoint-avoidance placement")
        else:
            raise AuditFailure(rnd, f"unknown phase-2 move {mv!r}")

    # gap dichotomy, exact; the bound on k_{i+1}-k_i is governed by how many
    # phase-2 turns stage i itself needed
    thresh2 = (alpha * beta_eff) ** 2
    thresh3 = (alpha * beta_eff) ** 3
    max_gap = 0
    for (ki, turns), (kj, _) in zip(stages, stages[1:]):
        gap = kj - ki
        max_gap = max(max_gap, gap)
        m = gap - k
        if m >= 1:
            g = model.contraction_bound(m)
            if turns == 1:
                if scalar_compare(g, thresh2) <= 0:
                    raise AuditFailure(-1, f"one-turn gap bound violated: g({m}) <= (ab)^2")
            else:
                if scalar_compare(g, thresh3) < 0:
                    raise AuditFailure(-1, f"multi-turn gap bound violated: g({m}) < (ab)^3")

    for idx, turns in enumerate(block_turn_counts):
        if turns < cn:
            raise AuditFailure(-1, f"block {idx} got {turns} sequence turns, density requires {cn}")

    return {
        "ok": True,
        "rounds_audited": len(rounds),
        "stages": len(stages),
        "max_gap": max_gap,
        "blocks_completed": blocks_done,
        "block_turns": block_turn_counts,
        "gap_bound_ok": True,
        "k": k,
        "component": component,
    }

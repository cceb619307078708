"""Referee for the nested-interval game between Black and White.

Classical rules: Black opens with any closed interval B0 inside [0,1];
thereafter White picks W_k inside B_k with |W_k| = alpha |B_k| and Black
answers with B_{k+1} inside W_k with |B_{k+1}| = beta |W_k|.  The modified
variant lets each player pick the round's ratio from [alpha0, 1] resp.
[gamma0, 1].  All containment and ratio checks are exact.

Transcripts are JSON-lines documents with exact endpoints, reproducible
byte for byte under a fixed seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .intervals import Interval
from .numeric import as_fraction, scalar_compare, scalar_mul, scalar_to_json

__all__ = [
    "GameConfig",
    "GameTranscript",
    "IllegalMove",
    "Forfeit",
    "MoveViolation",
    "validate_move",
    "run_game",
    "winning_check",
    "UNIT",
]

UNIT = Interval(Fraction(0), Fraction(1))


@dataclass(frozen=True)
class GameConfig:
    alpha: Fraction
    beta_game: Fraction
    variant: str = "classical"  # or "modified"
    alpha0: Fraction | None = None  # modified: White ratio lower bound
    gamma0: Fraction | None = None  # modified: Black ratio lower bound
    max_rounds: int = 10000

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "beta_game", as_fraction(self.beta_game))
        if not (0 < self.alpha < 1) or not (0 < self.beta_game < 1):
            raise ValueError("ratios must lie in (0,1)")
        if self.variant not in ("classical", "modified"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "modified":
            a0 = as_fraction(self.alpha0 if self.alpha0 is not None else self.alpha)
            g0 = as_fraction(self.gamma0 if self.gamma0 is not None else self.beta_game)
            object.__setattr__(self, "alpha0", a0)
            object.__setattr__(self, "gamma0", g0)

    def to_json(self) -> dict:
        out = {
            "alpha": scalar_to_json(self.alpha),
            "beta_game": scalar_to_json(self.beta_game),
            "variant": self.variant,
        }
        if self.variant == "modified":
            out["alpha0"] = scalar_to_json(self.alpha0)
            out["gamma0"] = scalar_to_json(self.gamma0)
        return out


class MoveViolation(object):
    """Which rule a proposed move breaks."""

    def __init__(self, rule: str, detail: str = ""):
        self.rule = rule
        self.detail = detail

    def __repr__(self):
        return f"MoveViolation({self.rule}: {self.detail})"


class IllegalMove(Exception):
    def __init__(self, role: str, round_index: int, violation: MoveViolation):
        self.role = role
        self.round_index = round_index
        self.violation = violation
        super().__init__(f"{role} played an illegal move in round {round_index}: {violation!r}")


class Forfeit(Exception):
    """A strategy declares it cannot produce a legal move."""

    def __init__(self, role: str, reason: str = ""):
        self.role = role
        self.reason = reason
        super().__init__(f"{role} forfeits: {reason}")


def validate_move(config: GameConfig, current: Interval, proposed: Interval, role: str, ratio=None):
    """Exact legality check; returns None when legal, else a MoveViolation."""
    if role == "white":
        base_ratio = config.alpha
        lower = config.alpha0 if config.variant == "modified" else None
    else:
        base_ratio = config.beta_game
        lower = config.gamma0 if config.variant == "modified" else None
    if config.variant == "modified":
        if ratio is None:
            return MoveViolation("ratio-missing", f"{role} must declare a per-round ratio")
        ratio = as_fraction(ratio)
        if scalar_compare(ratio, lower) < 0 or scalar_compare(ratio, 1) > 0:
            return MoveViolation("ratio-range", f"declared ratio {ratio} outside [{lower}, 1]")
    else:
        if ratio is not None and as_fraction(ratio) != base_ratio:
            return MoveViolation("ratio-fixed", f"classical game pins the {role} ratio to {base_ratio}")
        ratio = base_ratio
    if not current.contains(proposed):
        return MoveViolation("containment", f"{proposed!r} not inside {current!r}")
    want = scalar_mul(current.length(), ratio)
    if scalar_compare(proposed.length(), want) != 0:
        return MoveViolation("ratio", f"length {proposed.length()} != {ratio} * {current.length()}")
    return None


class GameTranscript(object):
    """Ordered record of a finished (or forfeited) run."""

    def __init__(self, header: dict):
        self.header = header
        self.rounds = []
        self.summary = {}

    def add_round(self, index: int, black: Interval, white: Interval, ann: dict):
        self.rounds.append({"round": index, "B": black, "W": white, "ann": ann})

    @property
    def limit_enclosure(self) -> Interval:
        if not self.rounds:
            raise ValueError("empty transcript has no enclosure")
        return self.rounds[-1]["W"]

    def intervals(self):
        """B0, W0, B1, W1, ... as one nested sequence."""
        out = []
        for r in self.rounds:
            out.append(r["B"])
            out.append(r["W"])
        return out

    def to_json_lines(self) -> str:
        lines = [json.dumps({"type": "header", **self.header}, sort_keys=True, separators=(",", ":"))]
        for r in self.rounds:
            lines.append(
                json.dumps(
                    {
                        "type": "round",
                        "round": r["round"],
                        "B": r["B"].to_json(),
                        "W": r["W"].to_json(),
                        "ann": r["ann"],
                    },
                    sort_keys=True,
                    separators=(",", ":"),
                )
            )
        lines.append(json.dumps({"type": "summary", **self.summary}, sort_keys=True, separators=(",", ":")))
        return "\n".join(lines) + "\n"


def run_game(config: GameConfig, black, white, rounds: int, header_extra: dict | None = None) -> GameTranscript:
    """Play `rounds` rounds (or stop at a forfeit) and return the transcript.

    Strategies implement ``initial()`` (Black only) and ``move(interval,
    round_index) -> (interval, annotations)``; a declared per-round ratio
    rides in annotations["ratio"] for the modified variant.
    """
    if rounds > config.max_rounds:
        raise ValueError("requested rounds exceed config.max_rounds")
    header = {"config": config.to_json()}
    if header_extra:
        header.update(header_extra)
    transcript = GameTranscript(header)

    def unpack(result):
        if isinstance(result, tuple):
            iv, ann = result
            return iv, dict(ann)
        return result, {}

    try:
        b_iv, b_ann = unpack(black.initial())
    except Forfeit as f:
        transcript.summary = {"result": "forfeit", "by": f.role, "round": 0, "reason": f.reason}
        return transcript
    if not UNIT.contains(b_iv) or scalar_compare(b_iv.length(), 0) == 0:
        raise IllegalMove("black", 0, MoveViolation("opening", f"B0 {b_iv!r} must be a nondegenerate closed subinterval of [0,1]"))

    for k in range(rounds):
        try:
            w_iv, w_ann = unpack(white.move(b_iv, k))
        except Forfeit as f:
            transcript.summary = {"result": "forfeit", "by": "white", "round": k, "reason": f.reason}
            return transcript
        violation = validate_move(config, b_iv, w_iv, "white", w_ann.get("ratio"))
        if violation is not None:
            raise IllegalMove("white", k, violation)
        ann = {"white": w_ann}

        try:
            nb_iv, b_ann = unpack(black.move(w_iv, k))
        except Forfeit as f:
            transcript.add_round(k, b_iv, w_iv, ann)
            transcript.summary = {"result": "forfeit", "by": "black", "round": k, "reason": f.reason}
            return transcript
        violation = validate_move(config, w_iv, nb_iv, "black", b_ann.get("ratio"))
        if violation is not None:
            raise IllegalMove("black", k, violation)
        if b_ann:
            ann["black"] = b_ann
        transcript.add_round(k, b_iv, w_iv, ann)
        b_iv = nb_iv

    transcript.summary = {"result": "completed", "rounds": rounds}
    return transcript


def winning_check(transcript: GameTranscript, predicate):
    """Apply a target-set predicate to the limit enclosure.

    The predicate gets a closed interval and answers True / False / None,
    None meaning undecidable at this precision; never coerced.
    """
    return predicate(transcript.limit_enclosure)

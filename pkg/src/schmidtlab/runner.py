"""End-to-end drivers: calibrate, play, audit, certify.

These are the entry points the CLI and the acceptance suite share.  A
"run" bundles the transcript with the strategy report, the independent
audit and the avoidance certificate; everything is reproducible from
(model, target, ratios, seed).
"""

from __future__ import annotations

from fractions import Fraction

from .game_engine import GameConfig, run_game
from .map_models import IntegerBaseMap, MapModel, PathologicalMap, model_from_spec
from .numeric import AlgebraicField, scalar_to_json
from .strategies import (
    CooperativeBlack,
    GenerationTrapper,
    GreedyTracker,
    InterleavedWhiteStrategy,
    MasterWhiteStrategy,
    PathologicalBlack,
    PhaseBudgetExceeded,
    RandomBlack,
    calibrate_plan,
)
from .verification import certify_avoidance, transcript_audit

__all__ = [
    "parse_target",
    "make_adversary",
    "choice_density_for",
    "run_avoidance",
    "run_intersection",
    "run_pathological_demo",
    "RunResult",
]

_DENSITY_CACHE: dict = {}


def parse_target(spec, model: MapModel):
    """Target points as exact scalars: 'p/q', a float-free decimal string,
    or 'sqrt5m1o2' style named algebraic points are not guessed; algebraic
    targets are given as {'poly': [...], 'lo': .., 'hi': ..}."""
    if isinstance(spec, dict):
        field = AlgebraicField.from_root_in(spec["poly"], Fraction(spec["lo"]), Fraction(spec["hi"]))
        return field.generator()
    if isinstance(spec, str) and "." in spec:
        # exact decimal -> rational
        whole, _, frac = spec.partition(".")
        denom = 10 ** len(frac)
        return Fraction(int(whole or 0) * denom + int(frac or 0), denom)
    return Fraction(spec)


def make_adversary(name: str, model: MapModel, target, beta, seed: int, pathological_i: int = 5, alpha=None):
    if name == "greedy":
        return GreedyTracker(model, target, beta, seed=seed)
    if name == "random":
        return RandomBlack(beta, seed=seed)
    if name == "cooperative":
        return CooperativeBlack(beta)
    if name == "pathological":
        return PathologicalBlack(pathological_i, alpha, beta, seed=seed)
    raise ValueError(f"unknown adversary {name!r}")


def choice_density_for(model: MapModel, target, alpha, effective_beta) -> Fraction:
    """Calibrated sequence-game density, cached per configuration."""
    key = (model.kind, str(Fraction(alpha)), str(Fraction(effective_beta)), str(scalar_to_json(target)))
    if key not in _DENSITY_CACHE:
        cal = calibrate_plan(model, target, alpha, effective_beta)
        _DENSITY_CACHE[key] = (cal["c"], cal)
    return _DENSITY_CACHE[key][0]


class RunResult(object):
    def __init__(self, transcript, white, audits, certificates):
        self.transcript = transcript
        self.white = white
        self.audits = audits
        self.certificates = certificates

    @property
    def certified(self) -> bool:
        return all(c.ok for c in self.certificates)

    @property
    def audited(self) -> bool:
        return all(a.get("ok") for a in self.audits)

    def summary(self) -> dict:
        gaps = [a.get("max_gap", 0) for a in self.audits]
        return {
            "avoided": self.certified,
            "audit_ok": self.audited,
            "N": [c.to_json().get("N") for c in self.certificates],
            "K_observed": max(gaps) if gaps else 0,
            "gap_bound_ok": all(a.get("gap_bound_ok", False) for a in self.audits),
            "certificates": [c.to_json() for c in self.certificates],
        }


def run_avoidance(
    model_spec,
    target_spec,
    alpha,
    beta,
    rounds: int,
    seed: int,
    adversary: str = "greedy",
    choice_density=None,
    phase2_budget: int = 500,
    audit: bool = True,
) -> RunResult:
    """One complete avoidance game with audit and certificate."""
    model = model_spec if isinstance(model_spec, MapModel) else model_from_spec(model_spec)
    target = target_spec if not isinstance(target_spec, (str, dict)) else parse_target(target_spec, model)
    alpha, beta = Fraction(alpha), Fraction(beta)
    c = choice_density if choice_density is not None else choice_density_for(model, target, alpha, beta)
    white = MasterWhiteStrategy(model, target, alpha, beta, choice_density=c, phase2_budget=phase2_budget)
    black = make_adversary(adversary, model, target, beta, seed, alpha=alpha)
    config = GameConfig(alpha=alpha, beta_game=beta)
    header = {
        "model": model.spec(),
        "target": scalar_to_json(target),
        "white": "master",
        "black": adversary,
        "seed": seed,
        "rounds": rounds,
    }
    transcript = run_game(config, black, white, rounds, header_extra=header)
    transcript.header["plan"] = white.plan.to_json() if white.plan else None
    transcript.summary["white"] = white.report()
    audits = []
    certs = []
    if audit:
        audits.append(transcript_audit(model, transcript))
    certs.append(certify_avoidance(model, transcript, target, audit=audits[0] if audits else None))
    return RunResult(transcript, white, audits, certs)


def run_intersection(
    component_specs,
    alpha,
    beta,
    rounds: int,
    seed: int,
    adversary: str = "random",
    densities=None,
    phase2_budget: int = 500,
) -> RunResult:
    """Round-robin interleaving of one strategy per (model, target) pair."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    pairs = []
    for spec in component_specs:
        model = spec[0] if isinstance(spec[0], MapModel) else model_from_spec(spec[0])
        target = spec[1] if not isinstance(spec[1], (str, dict)) else parse_target(spec[1], model)
        pairs.append((model, target))
    m = len(pairs)
    beta_eff = InterleavedWhiteStrategy.effective_beta(alpha, beta, m)
    components = []
    for i, (model, target) in enumerate(pairs):
        c = densities[i] if densities else choice_density_for(model, target, alpha, beta_eff)
        components.append(
            MasterWhiteStrategy(
                model, target, alpha, beta_eff, choice_density=c, phase2_budget=phase2_budget, name=f"component-{i}"
            )
        )
    white = InterleavedWhiteStrategy(components)
    black = make_adversary(adversary, pairs[0][0], pairs[0][1], beta, seed, alpha=alpha)
    config = GameConfig(alpha=alpha, beta_game=beta)
    header = {
        "models": [model.spec() for model, _ in pairs],
        "targets": [scalar_to_json(t) for _, t in pairs],
        "white": "interleaved",
        "black": adversary,
        "seed": seed,
        "rounds": rounds,
    }
    transcript = run_game(config, black, white, rounds, header_extra=header)
    transcript.header["plans"] = [c.plan.to_json() if c.plan else None for c in components]
    transcript.summary["white"] = white.report()
    audits = []
    certs = []
    for i, (model, target) in enumerate(pairs):
        audit = transcript_audit(model, transcript, component=i, n_components=m)
        audits.append(audit)
        certs.append(certify_avoidance(model, transcript, target, audit=audit, component=i))
    return RunResult(transcript, white, audits, certs)


def run_pathological_demo(i: int, alpha, seed: int, rounds: int = 600, budget: int = 500) -> dict:
    """The condition-(i) failure demo and its well-behaved control.

    On the recursing map, Black re-traps the game inside undefined cells
    forever and the trapper's budget blows; on an integer-base map with the
    same ratios the trap lands almost immediately.
    """
    alpha = Fraction(alpha)
    beta = Fraction(1, 4 * i) / alpha
    model = PathologicalMap()
    white = GenerationTrapper(model, alpha, budget=budget)
    black = PathologicalBlack(i, alpha, beta, seed=seed)
    config = GameConfig(alpha=alpha, beta_game=beta)
    outcome = {"i": i, "alpha": scalar_to_json(alpha), "beta": scalar_to_json(beta), "seed": seed}
    try:
        run_game(config, black, white, rounds)
        outcome["budget_exceeded"] = False
        outcome["turns"] = white.turns
    except PhaseBudgetExceeded as exc:
        outcome["budget_exceeded"] = True
        outcome["turns"] = exc.turns
    outcome["trapped"] = white.trapped

    control_model = IntegerBaseMap(2)
    control_white = GenerationTrapper(control_model, alpha, budget=budget)
    control_black = RandomBlack(beta, seed=seed)
    try:
        run_game(config, control_black, control_white, min(rounds, 50))
        outcome["control_budget_exceeded"] = False
    except PhaseBudgetExceeded:
        outcome["control_budget_exceeded"] = True
    outcome["control_trapped"] = control_white.trapped
    return outcome

"""Command-line entry point.

Subcommands:

* ``simulate``          -- referee a game between named strategies
* ``verify``            -- master strategy vs an adversary, audit + certificate
* ``intersect``         -- interleaved strategies, one certificate per component
* ``beta``              -- inspect a terminating-expansion base
* ``dim``               -- dimension estimates for factor-avoidance sets
* ``demo-pathological`` -- the condition-(i) failure demo
* ``play``              -- interactive mode, the human plays Black

Every subcommand accepts ``--json`` for machine-readable output (schemas
ship in ``schmidtlab/schemas/``) and ``--config FILE`` for ``key = value``
defaults; explicit flags win over the file, the file wins over built-ins.
Exit codes: 0 success, 1 assertion or audit failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .beta_shift import BetaSystem
from .game_engine import Forfeit, GameConfig, IllegalMove, run_game, validate_move
from .intervals import Interval
from .map_models import model_from_spec
from .numeric import scalar_to_float, scalar_to_json
from .runner import (
    make_adversary,
    parse_target,
    run_avoidance,
    run_intersection,
    run_pathological_demo,
)
from .strategies import MasterWhiteStrategy, PhaseBudgetExceeded
from .verification import AuditFailure, box_count_lower_bound, subshift_dimension_oracle

__all__ = ["main"]


class ConfigError(Exception):
    pass


def _read_config_file(path: str) -> dict:
    """TOML-like key = value lines; '#' comments; no sections."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            out[key.strip().replace("-", "_")] = value.strip().strip('"')
    return out


def _fraction(text) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not an exact rational: {text!r} ({exc})")


def _merge_config(args: argparse.Namespace, provided: set) -> argparse.Namespace:
    if getattr(args, "config", None):
        file_values = _read_config_file(args.config)
        for key, value in file_values.items():
            if not hasattr(args, key):
                raise ConfigError(f"unknown config key {key!r}")
            # flags beat the file; the file beats built-in defaults
            if key not in provided:
                setattr(args, key, value)
    return args


def _emit(payload: dict, as_json: bool, human_lines=None) -> None:
    if as_json:
        sys.stdout.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        for line in human_lines or [json.dumps(payload, sort_keys=True, indent=2)]:
            sys.stdout.write(line + "\n")


def _write_transcript(transcript, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(transcript.to_json_lines())


# -- subcommand implementations


def _cmd_verify(args) -> int:
    res = run_avoidance(
        args.model,
        args.target,
        _fraction(args.alpha),
        _fraction(args.beta_game),
        int(args.rounds),
        int(args.seed),
        adversary=args.black,
    )
    _write_transcript(res.transcript, args.out)
    summary = res.summary()
    _emit(
        summary,
        args.json,
        [
            f"model={args.model} target={args.target} seed={args.seed}",
            f"avoided={summary['avoided']} audit_ok={summary['audit_ok']} "
            f"K_observed={summary['K_observed']} gap_bound_ok={summary['gap_bound_ok']}",
            f"certificate: {res.certificates[0]!r}",
        ],
    )
    return 0 if summary["avoided"] and summary["audit_ok"] else 1


def _cmd_intersect(args) -> int:
    specs = []
    for comp in args.component:
        model_part, _, target_part = comp.rpartition("@")
        if not model_part:
            raise ConfigError(f"component {comp!r} must look like MODEL@TARGET")
        specs.append((model_part, target_part))
    res = run_intersection(
        specs,
        _fraction(args.alpha),
        _fraction(args.beta_game),
        int(args.rounds),
        int(args.seed),
        adversary=args.black,
    )
    _write_transcript(res.transcript, args.out)
    summary = res.summary()
    _emit(
        summary,
        args.json,
        [f"components={len(specs)} avoided={summary['avoided']} audit_ok={summary['audit_ok']}"]
        + [f"  [{i}] {c!r}" for i, c in enumerate(res.certificates)],
    )
    return 0 if summary["avoided"] and summary["audit_ok"] else 1


def _cmd_simulate(args) -> int:
    model = model_from_spec(args.model)
    alpha, beta = _fraction(args.alpha), _fraction(args.beta_game)
    variant = "modified" if args.variant == "modified" else "classical"
    config = GameConfig(
        alpha=alpha,
        beta_game=beta,
        variant=variant,
        alpha0=_fraction(args.alpha0) if args.alpha0 else None,
        gamma0=_fraction(args.gamma0) if args.gamma0 else None,
    )
    target = parse_target(args.target, model)
    white = MasterWhiteStrategy(model, target, alpha, beta, choice_density=_fraction(args.density) if args.density else None)
    black = make_adversary(args.black, model, target, beta, int(args.seed), alpha=alpha)
    transcript = run_game(
        config,
        black,
        white,
        int(args.rounds),
        header_extra={"model": model.spec(), "target": scalar_to_json(target), "seed": int(args.seed)},
    )
    transcript.header["plan"] = white.plan.to_json() if white.plan else None
    transcript.summary["white"] = white.report()
    _write_transcript(transcript, args.out)
    payload = {
        "rounds": len(transcript.rounds),
        "result": transcript.summary.get("result"),
        "enclosure": transcript.limit_enclosure.to_json(),
        "white": white.report(),
    }
    _emit(payload, args.json, [
        f"played {len(transcript.rounds)} rounds ({payload['result']})",
        f"limit enclosure ~ [{scalar_to_float(transcript.limit_enclosure.lo):.12g}, "
        f"{scalar_to_float(transcript.limit_enclosure.hi):.12g}]",
    ])
    return 0


def _cmd_beta(args) -> int:
    system = BetaSystem(args.d1_word)
    depth = int(args.depth)
    cylinders = []
    for n in range(1, depth + 1):
        for w in system.admissible_words(n):
            cyl = system.cylinder(w)
            cylinders.append(
                {
                    "word": "".join(str(s) for s in w),
                    "interval": cyl.interval.to_json(),
                    "length_float": scalar_to_float(cyl.interval.length()),
                }
            )
    payload = {**system.to_json(), "cylinders": cylinders}
    _emit(
        payload,
        args.json,
        [
            f"beta ~ {float(system.beta):.12f} on word {args.d1_word}",
            f"forbidden words: {payload['forbidden_words']}",
            f"C_b ~ {float(system.C_b):.6f}",
            f"{len(cylinders)} cylinders to depth {depth}",
        ],
    )
    return 0


def _cmd_dim(args) -> int:
    model = model_from_spec(args.model)
    words = [tuple(int(c) for c in w) for w in args.avoid_word]
    if args.method == "oracle":
        if not hasattr(model, "b"):
            raise ConfigError("the transfer-matrix oracle needs a finite integer-base model")
        payload = subshift_dimension_oracle(model.b, words)
    else:
        payload = box_count_lower_bound(model, words, int(args.depth), digit_bound=int(args.digit_bound))
    _emit(payload, args.json, [f"dim >= {payload['estimate']:.10f} ({payload['method']})"])
    return 0


def _cmd_demo_pathological(args) -> int:
    outcome = run_pathological_demo(int(args.i), _fraction(args.alpha), int(args.seed), budget=int(args.budget))
    _emit(
        outcome,
        args.json,
        [
            f"recursing map: budget_exceeded={outcome['budget_exceeded']} after {outcome['turns']} turns",
            f"integer-base control: trapped={outcome['control_trapped']} "
            f"budget_exceeded={outcome['control_budget_exceeded']}",
        ],
    )
    expected = outcome["budget_exceeded"] and not outcome["control_budget_exceeded"]
    return 0 if expected else 1


def _parse_interval(text: str) -> Interval:
    parts = text.replace(",", " ").split()
    if len(parts) != 2:
        raise ValueError("enter two endpoints, e.g. '1/4 3/8'")

    def scal(tok):
        if "." in tok:
            whole, _, frac = tok.partition(".")
            denom = 10 ** len(frac)
            return Fraction(int(whole or 0) * denom + int(frac or 0), denom)
        return Fraction(tok)

    return Interval(scal(parts[0]), scal(parts[1]))


def _cmd_play(args) -> int:
    model = model_from_spec(args.model)
    alpha, beta = _fraction(args.alpha), _fraction(args.beta_game)
    target = parse_target(args.target, model)
    config = GameConfig(alpha=alpha, beta_game=beta)
    white = MasterWhiteStrategy(model, target, alpha, beta, choice_density=Fraction(1, 24))
    out = sys.stdout
    out.write(f"You are Black. alpha={alpha}, beta={beta}, target={args.target} on {model.kind}.\n")
    out.write("White forces the limit point's orbit to avoid the target.\n")
    out.write("Enter intervals as exact endpoints: 'lo hi' with rationals like 3/8 or decimals.\n")

    def read_interval(prompt, current, role_len):
        while True:
            out.write(prompt)
            out.flush()
            try:
                line = input()
            except EOFError:
                return None
            try:
                iv = _parse_interval(line)
            except (ValueError, ZeroDivisionError) as exc:
                out.write(f"  cannot parse: {exc}\n")
                continue
            violation = validate_move(config, current, iv, "black") if current is not None else None
            if current is None:
                if not Interval(Fraction(0), Fraction(1)).contains(iv) or iv.length() == 0:
                    out.write("  the opening interval must be a nondegenerate closed subinterval of [0,1]\n")
                    continue
                return iv
            if violation is not None:
                out.write(f"  illegal: {violation.rule} -- {violation.detail}\n")
                continue
            return iv

    b_iv = read_interval("your opening interval B0: ", None, None)
    if b_iv is None:
        out.write("no opening move; goodbye\n")
        return 0
    rounds = int(args.rounds)
    for k in range(rounds):
        try:
            w_iv, _ann = white.move(b_iv, k)
        except PhaseBudgetExceeded:
            out.write("White concedes this phase (budget exceeded)\n")
            return 1
        out.write(
            f"round {k}: White plays [{scalar_to_float(w_iv.lo):.9g}, {scalar_to_float(w_iv.hi):.9g}]"
            f"  (exact {scalar_to_json(w_iv.lo)} .. {scalar_to_json(w_iv.hi)})\n"
        )
        if k == rounds - 1:
            break
        need = scalar_to_float(w_iv.length()) * float(beta)
        b_iv = read_interval(f"your B ({need:.3g} long, inside White's interval): ", w_iv, None)
        if b_iv is None:
            out.write("input closed; stopping here\n")
            break
    fixed = "".join(str(s) for s in white.fixed_word[:60])
    out.write(f"fixed coding prefix: {fixed}{'...' if len(white.fixed_word) > 60 else ''}\n")
    out.write(f"stages completed: {white.stage}, coding length: {len(white.fixed_word)}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schmidtlab", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, target=True):
        p.add_argument("--model", default="integer_base:2", help="integer_base:B | gauss | beta:WORD | pathological | cantor_complement")
        if target:
            p.add_argument("--target", default="1/3", help="exact rational like 1/3 (or a decimal string)")
        p.add_argument("--alpha", default="1/4")
        p.add_argument("--beta-game", dest="beta_game", default="1/2")
        p.add_argument("--rounds", default="200")
        p.add_argument("--seed", default="0")
        p.add_argument("--json", action="store_true")
        p.add_argument("--config", default=None, help="key = value defaults file")
        p.add_argument("--out", default=None, help="write the transcript (JSON lines) here")

    p = sub.add_parser("verify", help="master strategy vs adversary, audited and certified")
    common(p)
    p.add_argument("--black", default="greedy", choices=["greedy", "random", "cooperative"])
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("intersect", help="interleaved strategies for several target sets")
    p.add_argument("--component", action="append", required=True, help="MODEL@TARGET, repeatable")
    p.add_argument("--alpha", default="1/4")
    p.add_argument("--beta-game", dest="beta_game", default="1/2")
    p.add_argument("--rounds", default="400")
    p.add_argument("--seed", default="0")
    p.add_argument("--black", default="random", choices=["greedy", "random", "cooperative"])
    p.add_argument("--json", action="store_true")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_intersect)

    p = sub.add_parser("simulate", help="referee a game without certification")
    common(p)
    p.add_argument("--black", default="random", choices=["greedy", "random", "cooperative"])
    p.add_argument("--variant", default="classical", choices=["classical", "modified"])
    p.add_argument("--alpha0", default=None)
    p.add_argument("--gamma0", default=None)
    p.add_argument("--density", default=None, help="sequence-game density c (skip calibration)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("beta", help="terminating-base structure: forbidden words, C_b, cylinders")
    p.add_argument("--d1-word", dest="d1_word", default="11")
    p.add_argument("--depth", default="4")
    p.add_argument("--json", action="store_true")
    p.add_argument("--config", default=None)
    p.set_defaults(func=_cmd_beta)

    p = sub.add_parser("dim", help="dimension lower bounds for factor-avoidance sets")
    p.add_argument("--model", default="integer_base:2")
    p.add_argument("--avoid-word", dest="avoid_word", action="append", required=True)
    p.add_argument("--method", default="oracle", choices=["oracle", "boxcount"])
    p.add_argument("--depth", default="12")
    p.add_argument("--digit-bound", dest="digit_bound", default="20")
    p.add_argument("--json", action="store_true")
    p.add_argument("--config", default=None)
    p.set_defaults(func=_cmd_dim)

    p = sub.add_parser("demo-pathological", help="condition-(i) failure on the recursing map")
    p.add_argument("--i", default="5")
    p.add_argument("--alpha", default="1/4")
    p.add_argument("--seed", default="0")
    p.add_argument("--budget", default="500")
    p.add_argument("--json", action="store_true")
    p.add_argument("--config", default=None)
    p.set_defaults(func=_cmd_demo_pathological)

    p = sub.add_parser("play", help="interactive: you are Black")
    common(p, target=True)
    p.set_defaults(func=_cmd_play)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    raw = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(raw)
    provided = {
        tok.split("=", 1)[0][2:].replace("-", "_") for tok in raw if tok.startswith("--")
    }
    try:
        args = _merge_config(args, provided)
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return 2
    except (ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return 2
    except (AuditFailure, IllegalMove, AssertionError) as exc:
        sys.stderr.write(f"failure: {exc}\n")
        return 1
    except Forfeit as exc:
        sys.stderr.write(f"forfeit: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

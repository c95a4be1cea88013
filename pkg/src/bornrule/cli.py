"""Command-line front end.

Every run prints one JSON document::

    {"schemaVersion": 1, "manifest": {...}, "payload": {...}}

The manifest holds the normalized parameters, so ``bornrule rerun FILE``
reproduces a previous document byte for byte. Ledger and channel results
can also be exported as CSV rows with ``--format csv``.

Exit codes: 0 success, 1 other failure, 2 usage error, 3 configuration
error (including axiom conflicts and malformed config files), 4 size error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone
from decimal import Decimal
from fractions import Fraction
from typing import Any, Callable, Optional

from . import __version__
from .branch_ledger import enumerate_branch_classes, total_mass, typicality_report
from .classical import (
    RabbitScenario,
    SelectionRule,
    TwoStageProcess,
    ball_game,
    coarse_distribution,
    neutrality_check,
    simulate_process,
)
from .dsw_games import AxiomSet, derive, derive_weight_function, game_value
from .errors import BornRuleError, ConfigurationError, SizeError
from .inference import ChannelConfig, run_channel
from .quantum_model import Angle, AncillaSpec, MeasurementSetup
from .rng import CounterRNG, MASK64, derive_seed
from .samplers import Semantics, SemanticsKind, neutrality_gap, outcome_distribution, run_experiment
from .schemas import SCHEMA_VERSION
from .weights import is_exact

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_CONFIG, EXIT_SIZE = 0, 1, 2, 3, 4

AXIOM_FLAGS = ("phase_invariance", "permutation_symmetry", "ancilla_composition", "continuity")
MESSAGE_STREAM = 0x6D657373  # sub-stream key for generated channel messages


class UsageError(Exception):
    pass


# -- serialization ---------------------------------------------------------

def jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ConfigurationError(f"non-finite value {x!r} in output")
        return x
    if isinstance(x, Decimal):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def parse_number(text: str):
    """``"3/4"`` and integers stay exact; anything else is a float."""
    s = str(text).strip()
    try:
        if "/" in s or s.lstrip("-").isdigit():
            return Fraction(s)
        return float(s)
    except (ValueError, ZeroDivisionError):
        raise ConfigurationError(f"cannot parse number {text!r}") from None


def parse_pair(text: str, what: str) -> tuple:
    parts = [p for p in str(text).split(",") if p.strip()]
    if len(parts) != 2:
        raise ConfigurationError(f"{what} must be two comma-separated values, got {text!r}")
    return tuple(parse_number(p) for p in parts)


def _rewards(params: dict) -> tuple:
    return parse_pair(params["rewards"], "rewards")


# -- commands: each takes normalized params and returns a payload ----------

def run_weights(params: dict) -> dict:
    axioms = AxiomSet(
        measurement_neutrality=params["neutrality"],
        branch_counting=params["branch_count"],
        **{name: name not in params["drop_axioms"] for name in AXIOM_FLAGS},
    )
    ancilla = AncillaSpec.parse(params["ancilla"]) if params["ancilla"] else None
    if params["ratio"] is not None:
        d = derive(Fraction(params["ratio"]), axioms, ancilla)
        weights, checks, used = d.weights, d.checks, d.ancilla
    else:
        angle = Angle.parse(params["theta"])
        c2 = angle.cos_squared_half()
        if is_exact(c2):
            axioms.check(need_continuity=True)
            d = derive(c2, axioms, ancilla)
            weights, checks, used = d.weights, d.checks, d.ancilla
        else:
            weights = derive_weight_function(angle, axioms, ancilla)
            checks = [("continuity extension to irrational c^2", True)]
            used = ancilla
    return {
        "rule": axioms.rule,
        "weights": list(weights),
        "exact": weights.exact,
        "ancilla": list(used.as_tuple()) if used else None,
        "checks": [{"name": n, "passed": ok} for n, ok in checks],
    }


def _semantics(params: dict) -> Semantics:
    mult = AncillaSpec.parse(params["multiplicities"]) if params.get("multiplicities") else None
    return Semantics.parse(params["semantics"], mult)


def run_simulate(params: dict) -> dict:
    setup = MeasurementSetup(Angle.parse(params["theta"]),
                             AncillaSpec.parse(params["ancilla"]) if params["ancilla"] else None)
    semantics = _semantics(params)
    rewards = _rewards(params)
    stats = run_experiment(setup, semantics, params["n"], rewards, params["seed"])
    dist = outcome_distribution(setup, semantics)
    p = float(dist.plus)
    se = math.sqrt(p * (1.0 - p) / stats.n_trials)
    frac = stats.fraction_plus
    z = (frac - p) / se if se > 0 else None
    return {
        "nTrials": stats.n_trials,
        "countPlus": stats.count_plus,
        "countMinus": stats.count_minus,
        "meanReward": stats.mean_reward,
        "fractionPlus": frac,
        "oracle": {
            "distribution": list(dist),
            "expectedMeanReward": float(game_value(dist, rewards)),
            "standardError": se,
            "zScore": z,
            "within5Sigma": abs(z) < 5 if z is not None else frac == p,
        },
    }


def _ledger_c2(params: dict):
    if params["c2"] is not None:
        return parse_number(params["c2"])
    return Angle.parse(params["theta"]).cos_squared_half()


def run_ledger(params: dict) -> dict:
    n = params["n"]
    c2 = _ledger_c2(params)
    classes = enumerate_branch_classes(n, c2)
    summary = typicality_report(n, c2, params["k"], classes)
    return {
        "classes": [] if params.get("summary_only") else [
            {"m": c.m, "count": str(c.count), "perBranchWeight": str(c.per_branch_weight),
             "classWeight": c.class_weight} for c in classes],
        "summary": {
            "nTrials": summary.n_trials,
            "cSquared": summary.c_squared,
            "bornMean": summary.born_mean,
            "bornMode": summary.born_mode,
            "bornModeTie": summary.born_mode_tie,
            "bornStd": summary.born_std,
            "countMode": summary.count_mode,
            "countModeTie": summary.count_mode_tie,
            "k": summary.k,
            "typicalityWindow": list(summary.window),
            "bornMassInWindow": summary.born_mass_in_window,
            "bornMassInWindowFloat": float(summary.born_mass_in_window),
            "countFractionInWindow": summary.count_fraction_in_window,
            "countFractionInWindowFloat": float(summary.count_fraction_in_window),
        },
        "totals": {"countSum": str(sum(c.count for c in classes)),
                   "weightSum": total_mass(classes)},
    }


def load_channel_config(text: str, source: str = "<config>") -> dict:
    """Parse and normalize a channel config document.

    Required: ``alphabet`` (list of angles), ``particles_per_symbol``,
    ``semantics`` (name or ``{"kind", "multiplicities"}``) and either
    ``message`` (list of indices) or ``message_length``. Optional ``seed``.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(
            f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{source}: top level must be an object")

    def field_error(name, msg):
        return ConfigurationError(f"{source}: field '{name}': {msg}")

    known = {"alphabet", "particles_per_symbol", "semantics", "message",
             "message_length", "seed"}
    for key in raw:
        if key not in known:
            raise field_error(key, "unknown field")
    alphabet = raw.get("alphabet")
    if not isinstance(alphabet, list) or not alphabet:
        raise field_error("alphabet", "must be a non-empty list of angles")
    for i, a in enumerate(alphabet):
        try:
            Angle.parse(str(a))
        except ConfigurationError as exc:
            raise field_error(f"alphabet[{i}]", str(exc)) from None
    n = raw.get("particles_per_symbol")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise field_error("particles_per_symbol", "must be a positive integer")

    sem = raw.get("semantics")
    if isinstance(sem, str):
        sem = {"kind": sem}
    if not isinstance(sem, dict) or "kind" not in sem:
        raise field_error("semantics", "must be a name or an object with 'kind'")
    mult = sem.get("multiplicities")
    if mult is not None:
        if (not isinstance(mult, list) or len(mult) != 2
                or not all(isinstance(k, int) and k >= 1 for k in mult)):
            raise field_error("semantics.multiplicities", "must be two positive integers")
        mult = f"{mult[0]},{mult[1]}"
    try:
        Semantics.parse(str(sem["kind"]))
    except ConfigurationError as exc:
        raise field_error("semantics.kind", str(exc)) from None

    message = raw.get("message")
    length = raw.get("message_length")
    if message is not None:
        if not isinstance(message, list) or not all(
                isinstance(s, int) and not isinstance(s, bool) for s in message):
            raise field_error("message", "must be a list of integers")
        for i, s in enumerate(message):
            if not 0 <= s < len(alphabet):
                raise field_error(f"message[{i}]", f"index {s} outside alphabet")
        if length is not None and length != len(message):
            raise field_error("message_length", "does not match len(message)")
    elif not isinstance(length, int) or isinstance(length, bool) or length < 0:
        raise field_error("message_length", "required (non-negative integer) when 'message' is absent")

    seed = raw.get("seed")
    if seed is not None and (not isinstance(seed, int) or not 0 <= seed <= MASK64):
        raise field_error("seed", "must be a 64-bit unsigned integer")
    return {
        "alphabet": [str(a) for a in alphabet],
        "particles_per_symbol": n,
        "semantics": str(sem["kind"]),
        "multiplicities": mult,
        "message": message,
        "message_length": len(message) if message is not None else length,
        "seed": seed,
    }


def channel_message(params: dict) -> list[int]:
    if params["message"] is not None:
        return list(params["message"])
    rng = CounterRNG(derive_seed(params["seed"], MESSAGE_STREAM))
    return [rng.below(len(params["alphabet"])) for _ in range(params["message_length"])]


def run_channel_cmd(params: dict) -> dict:
    alphabet = tuple(Angle.parse(a) for a in params["alphabet"])
    config = ChannelConfig(alphabet, params["particles_per_symbol"],
                           params["message_length"], _semantics(params), params["seed"])
    report = run_channel(config, channel_message(params))
    return {
        "symbolErrorRate": report.symbol_error_rate,
        "alphabet": params["alphabet"],
        "symbols": [{"position": i, "sent": s, "decoded": d, "m": e.m, "n": e.n,
                     "thetaHat": e.theta_hat}
                    for i, (s, d, e) in enumerate(zip(report.sent, report.decoded,
                                                      report.estimates))],
        "confusion": [list(r) for r in report.confusion],
    }


SEMANTICS = tuple(k.value for k in SemanticsKind)
GAMES = ("c-ball", "e-ball", "c-rabbit", "e-rabbit")


def _game_process(game: str, with_box: bool, draw_time: str) -> TwoStageProcess:
    if game in ("c-ball", "e-ball"):
        return ball_game(game[0].upper(), with_box)
    mode = "copenhagen" if game == "c-rabbit" else "everett"
    return RabbitScenario(mode, draw_time).process()


def run_classical(params: dict) -> dict:
    process = _game_process(params["game"], params["with_box"], params["draw_time"])
    dist = coarse_distribution(process)
    out = {
        "game": params["game"],
        "labels": list(dist.labels),
        "distribution": list(dist),
        "value": game_value(dist, _rewards(params)) if params["rewards"] else None,
        "monteCarlo": None,
    }
    if params["n"]:
        tally = simulate_process(process, params["n"], params["seed"])
        out["monteCarlo"] = {"rounds": params["n"], "counts": tally,
                             "fractions": {k: v / params["n"] for k, v in tally.items()}}
    return out


def run_neutrality(params: dict) -> dict:
    name = params["process"]
    if name == "quantum":
        setup = MeasurementSetup(Angle.parse(params["theta"]))
        ancilla = AncillaSpec.parse(params["ancilla"] or "1,1")
        gap = neutrality_gap(setup, ancilla, Semantics.parse(params["semantics"]))
        return {"process": name, "holds": gap == 0, "gap": gap}
    if name == "custom":
        if not params["stage1"] or not params["refinement"]:
            raise ConfigurationError("custom process needs --stage1 and --refinement")
        stage1 = [Fraction(x) for x in params["stage1"].split(",")]
        refinement = [int(x) for x in params["refinement"].split(",")]
        if len(stage1) != len(refinement):
            raise ConfigurationError("--stage1 and --refinement differ in length")
        labels = [f"o{i}" for i in range(len(stage1))]
        process = TwoStageProcess(dict(zip(labels, stage1)), dict(zip(labels, refinement)),
                                  SelectionRule(params["rule"]))
    elif name in ("c-ball", "e-ball"):
        process = ball_game(name[0].upper(), True)
    else:
        # the rabbit refinement stage is the litter; compare before/after birth
        process = _game_process(name, False, "after-birth")
    result = neutrality_check(process)
    return {"process": name, "holds": result.holds, "gap": result.gap}


COMMANDS: dict[str, Callable[[dict], dict]] = {
    "weights": run_weights,
    "simulate": run_simulate,
    "ledger": run_ledger,
    "channel": run_channel_cmd,
    "classical": run_classical,
    "neutrality": run_neutrality,
}


def build_document(command: str, params: dict, timestamp: Optional[str] = None) -> dict:
    payload = COMMANDS[command](params)
    if timestamp is None:
        epoch = os.environ.get("SOURCE_DATE_EPOCH")
        when = (datetime.fromtimestamp(int(epoch), timezone.utc) if epoch
                else datetime.now(timezone.utc))
        timestamp = when.isoformat(timespec="seconds")
    return jsonable({
        "schemaVersion": SCHEMA_VERSION,
        "manifest": {
            "command": command,
            "parameters": params,
            "seed": params.get("seed"),
            "version": __version__,
            "timestamp": timestamp,
        },
        "payload": payload,
    })


# -- tabular export --------------------------------------------------------

def to_csv(command: str, doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    payload = doc["payload"]
    if command == "ledger":
        w.writerow(["m", "count", "perBranchWeight", "classWeight"])
        for row in payload["classes"]:
            w.writerow([row["m"], row["count"], row["perBranchWeight"], row["classWeight"]])
    elif command == "channel":
        w.writerow(["position", "sent", "decoded", "m", "n", "thetaHat"])
        for row in payload["symbols"]:
            w.writerow([row["position"], row["sent"], row["decoded"], row["m"],
                        row["n"], repr(row["thetaHat"])])
    else:
        raise UsageError(f"--format csv is only available for ledger and channel, not {command}")
    return buf.getvalue()


# -- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def seed_arg(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= v <= MASK64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = _Parser(prog="bornrule", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("weights", parents=[common], help="derive outcome weights")
    src = w.add_mutually_exclusive_group(required=True)
    src.add_argument("--theta", help="angle, e.g. pi/3 or 1.047")
    src.add_argument("--ratio", help="exact c^2 as p/q")
    w.add_argument("--neutrality", action="store_true", help="assume measurement neutrality")
    w.add_argument("--branch-count", action="store_true", help="assume branch counting")
    w.add_argument("--ancilla", help="explicit multiplicities k+,k-")
    w.add_argument("--drop-axiom", action="append", default=[], choices=AXIOM_FLAGS,
                   dest="drop_axioms")

    s = sub.add_parser("simulate", parents=[common], help="sample the measurement game")
    s.add_argument("--theta", required=True)
    s.add_argument("--semantics", required=True, choices=SEMANTICS)
    s.add_argument("--multiplicities", help="branch multiplicities k+,k- for the semantics")
    s.add_argument("--ancilla", help="ancilla k+,k- attached to the setup")
    s.add_argument("--n", type=positive_int, required=True)
    s.add_argument("--rewards", default="1,0", help="x+,x- (default 1,0)")
    s.add_argument("--seed", type=seed_arg, required=True)

    led = sub.add_parser("ledger", parents=[common], help="exact 2^N branch ledger")
    led.add_argument("--n", type=int, required=True)
    c = led.add_mutually_exclusive_group(required=True)
    c.add_argument("--c2", help="c^2 as p/q or decimal")
    c.add_argument("--theta")
    led.add_argument("--k", type=float, default=3.0, help="window half-width in std devs")
    led.add_argument("--summary-only", action="store_true",
                     help="omit the per-class table (useful for large N)")

    ch = sub.add_parser("channel", parents=[common], help="angle-signalling channel")
    ch.add_argument("--config", required=True, help="JSON channel config file")
    ch.add_argument("--seed", type=seed_arg, help="overrides the config seed")

    cl = sub.add_parser("classical", parents=[common], help="ball and rabbit games")
    cl.add_argument("--game", choices=GAMES, required=True)
    cl.add_argument("--with-box", action="store_true", help="insert the ancillary box")
    cl.add_argument("--draw-time", choices=("before-birth", "after-birth"),
                    default="before-birth")
    cl.add_argument("--rewards", help="x_b,x_w")
    cl.add_argument("--n", type=positive_int, help="Monte-Carlo rounds (needs --seed)")
    cl.add_argument("--seed", type=seed_arg)

    ne = sub.add_parser("neutrality", parents=[common], help="measurement-neutrality check")
    ne.add_argument("--process", required=True, choices=GAMES + ("quantum", "custom"))
    ne.add_argument("--stage1", help="custom: comma-separated probabilities")
    ne.add_argument("--refinement", help="custom: comma-separated multiplicities")
    ne.add_argument("--rule", choices=[r.value for r in SelectionRule],
                    default=SelectionRule.DRAW_FROM_RECEPTACLE.value)
    ne.add_argument("--theta", default="pi/3", help="quantum: angle")
    ne.add_argument("--ancilla", help="quantum: k+,k-")
    ne.add_argument("--semantics", default="everett-count", choices=SEMANTICS,
                    help="quantum: semantics")

    r = sub.add_parser("rerun", parents=[common], help="replay a result document's manifest")
    r.add_argument("document")
    return p


def params_from_args(args: argparse.Namespace) -> dict:
    cmd = args.command
    if cmd == "weights":
        return {"theta": args.theta, "ratio": args.ratio, "neutrality": args.neutrality,
                "branch_count": args.branch_count, "ancilla": args.ancilla,
                "drop_axioms": sorted(set(args.drop_axioms))}
    if cmd == "simulate":
        return {"theta": args.theta, "semantics": args.semantics,
                "multiplicities": args.multiplicities, "ancilla": args.ancilla,
                "n": args.n, "rewards": args.rewards, "seed": args.seed}
    if cmd == "ledger":
        return {"n": args.n, "c2": args.c2, "theta": args.theta, "k": args.k,
                "summary_only": args.summary_only}
    if cmd == "channel":
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigurationError(f"cannot read config: {exc}") from None
        params = load_channel_config(text, args.config)
        if args.seed is not None:
            params["seed"] = args.seed
        if params["seed"] is None:
            raise UsageError("channel: a seed is required (--seed or 'seed' in the config)")
        return params
    if cmd == "classical":
        if args.n and args.seed is None:
            raise UsageError("classical: --n requires --seed")
        return {"game": args.game, "with_box": args.with_box, "draw_time": args.draw_time,
                "rewards": args.rewards, "n": args.n, "seed": args.seed}
    if cmd == "neutrality":
        return {"process": args.process, "stage1": args.stage1, "refinement": args.refinement,
                "rule": args.rule, "theta": args.theta, "ancilla": args.ancilla,
                "semantics": args.semantics}
    raise UsageError(f"unknown command {cmd}")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = make_parser().parse_args(argv)
        if args.command == "rerun":
            with open(args.document, encoding="utf-8") as fh:
                manifest = json.load(fh)["manifest"]
            command = manifest["command"]
            if command not in COMMANDS:
                raise ConfigurationError(f"unknown command {command!r} in manifest")
            doc = build_document(command, manifest["parameters"], manifest["timestamp"])
        else:
            command = args.command
            doc = build_document(command, params_from_args(args))
        text = to_csv(command, doc) if args.format == "csv" else dumps(doc)
        _emit(text, args.out)
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeError as exc:
        print(f"size error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (KeyError, json.JSONDecodeError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BornRuleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

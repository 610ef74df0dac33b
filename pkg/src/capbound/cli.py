"""Command-line interface.

Subcommands:
  bounds <channel.json>        capacity bound-chain reports for a channel
  degradability <channel.json> approximate-(anti)degradability reports
  state-bounds <state.json>    one-way distillation bound chains for a state
  search-bippt                 randomized search for bi-PPT channel candidates
  builtin <name> [params...]   emit a named channel as JSON

Exit codes: 0 success, 2 validation error (unreadable/malformed/non-CPTP
input or bad arguments), 3 solver failure. JSON output is deterministic for
identical argv and seed; every JSON report carries "schema": 1 and validates
against schemas/report.schema.json.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bippt as bippt_mod
from . import channels as chn
from .bounds import BoundReport, classical_bounds, qp_bounds, approx_degradability_bounds, strict_gap_certificate
from .distill import state_bounds, state_order_epsilons
from .optimize import DEFAULT_SEED, OptOptions
from .sdp import SolverError, eps_antidegradable, eps_degradable
from .serialize import VALIDATION_ERRORS, channel_from_dict, channel_to_dict, state_from_dict

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3

BUILTINS = {
    "identity": (chn.identity_channel, (int,)),
    "erasure": (chn.erasure, (int, float)),
    "depolarizing": (chn.depolarizing, (int, float)),
    "completely_depolarizing": (chn.completely_depolarizing, (int,)),
    "amplitude_damping": (chn.amplitude_damping, (float,)),
    "symmetric_side_channel": (chn.symmetric_side_channel, (int,)),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capbound",
        description="Capacity bound reports for quantum channels and states.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--restarts", type=int, default=8)
        p.add_argument("--max-iter", type=int, default=500)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--budget", type=int, default=16,
                       help="search seeds (search-bippt) / tensor dim cap")

    p = sub.add_parser("bounds", help="capacity bound chains for a channel")
    p.add_argument("channel", help="channel JSON file")
    add_common(p)

    p = sub.add_parser("degradability", help="approximate degradability reports")
    p.add_argument("channel", help="channel JSON file")
    add_common(p)

    p = sub.add_parser("state-bounds", help="distillation bound chains for a state")
    p.add_argument("state", help="state JSON file")
    add_common(p)

    p = sub.add_parser("search-bippt", help="search for bi-PPT channel candidates")
    p.add_argument("--din", type=int, default=3)
    p.add_argument("--dout", type=int, default=3)
    p.add_argument("--denv", type=int, default=4)
    p.add_argument("--resume", default=None, help="JSONL file of earlier records")
    p.add_argument("--out", default=None, help="JSONL output path")
    add_common(p)

    p = sub.add_parser("builtin", help="emit a named channel as JSON")
    p.add_argument("name", choices=sorted(BUILTINS))
    p.add_argument("params", nargs="*")
    add_common(p)
    return parser


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path} is not valid JSON: {exc}") from exc


def _opts(args) -> OptOptions:
    return OptOptions(restarts=args.restarts, max_iter=args.max_iter,
                      tol=args.tol, seed=args.seed)


def _reports_to_json(reports: dict) -> dict:
    out = {}
    for key, val in reports.items():
        if isinstance(val, BoundReport):
            out[key] = val.to_dict()
        elif isinstance(val, dict):
            out[key] = val
        elif isinstance(val, (bool, str)):
            out[key] = val
        else:
            out[key] = float(val)
    return out


def _render_report_text(name: str, rep) -> list:
    if not isinstance(rep, BoundReport):
        return [f"{name:<22} {rep}"]
    lines = [f"{name:<22} {rep.target}: [{rep.lower:.6f}, {rep.upper:.6f}]"
             f"  ({rep.upper_provenance})"]
    for t in rep.terms:
        lines.append(f"    {t.role:<5} {t.name:<28} {t.value: .6f}  [{t.certainty}]")
    for note in rep.notes:
        lines.append(f"    note: {note}")
    return lines


def _emit(payload: dict, args) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
        return
    print(f"# {payload['command']}")
    for key, val in payload.items():
        if key in ("schema", "command"):
            continue
        if key == "reports":
            for name, rep in val.items():
                if isinstance(rep, dict) and "target" in rep:
                    print(f"{name:<22} {rep['target']}: "
                          f"[{rep['lower']:.6f}, {rep['upper']:.6f}]"
                          f"  ({rep['upper_provenance']})")
                    for t in rep.get("terms", []):
                        print(f"    {t['role']:<5} {t['name']:<28} "
                              f"{t['value']: .6f}  [{t['certainty']}]")
                    for note in rep.get("notes", []):
                        print(f"    note: {note}")
                else:
                    print(f"{name:<22} {rep}")
        elif key == "records":
            for rec in val:
                print(f"seed {rec['seed']:>3} it {rec['iteration']:>2} "
                      f"accepted={rec['accepted']} scores={rec['scores']}")
        else:
            print(f"{key}: {val}")


def _cmd_bounds(args) -> dict:
    ch = channel_from_dict(_load_json(args.channel))
    opts = _opts(args)
    reports = dict(classical_bounds(ch, opts))
    qp = qp_bounds(ch, opts)
    reports.update({k: v for k, v in qp.items() if k != "bippt"})
    reports["strict_gap"] = strict_gap_certificate(ch, opts)
    return {
        "schema": 1,
        "command": "bounds",
        "seed": args.seed,
        "channel": {"dim_in": ch.dim_in, "dim_out": ch.dim_out, "dim_env": ch.dim_env},
        "reports": _reports_to_json(reports),
        "verdict": {"bippt": qp["bippt"]},
    }


def _cmd_degradability(args) -> dict:
    ch = channel_from_dict(_load_json(args.channel))
    opts = _opts(args)
    eps, _ = eps_degradable(ch)
    eps_a, _ = eps_antidegradable(ch)
    reports = approx_degradability_bounds(ch, opts)
    return {
        "schema": 1,
        "command": "degradability",
        "seed": args.seed,
        "channel": {"dim_in": ch.dim_in, "dim_out": ch.dim_out, "dim_env": ch.dim_env},
        "reports": _reports_to_json(reports),
        "verdict": {"eps_degradable": eps, "eps_antidegradable": eps_a},
    }


def _cmd_state_bounds(args) -> dict:
    state = state_from_dict(_load_json(args.state))
    opts = _opts(args)
    reports = state_bounds(state, opts)
    orders = state_order_epsilons(state, opts)
    return {
        "schema": 1,
        "command": "state-bounds",
        "seed": args.seed,
        "state": {"dim_a": state.dim_a, "dim_b": state.dim_b},
        "reports": _reports_to_json(reports),
        "verdict": {k: v for k, v in orders.items() if k != "certainty"},
    }


def _cmd_search_bippt(args) -> dict:
    config = bippt_mod.SearchConfig(dim_in=args.din, dim_out=args.dout,
                                    dim_env=args.denv, seed=args.seed)
    records = bippt_mod.search(config, n_seeds=args.budget,
                               out_path=args.out, resume_path=args.resume)
    return {
        "schema": 1,
        "command": "search-bippt",
        "seed": args.seed,
        "records": [r.to_dict() for r in records],
        "verdict": {"accepted": sum(r.accepted for r in records)},
    }


def _cmd_builtin(args) -> dict:
    factory, sig = BUILTINS[args.name]
    if len(args.params) != len(sig):
        raise ValueError(f"builtin {args.name} takes {len(sig)} parameter(s)")
    params = [cast(raw) for cast, raw in zip(sig, args.params)]
    ch = factory(*params)
    payload = channel_to_dict(ch)
    payload.update({"schema": 1, "command": "builtin",
                    "dim_env": ch.dim_env, "seed": args.seed})
    return payload


COMMANDS = {
    "bounds": _cmd_bounds,
    "degradability": _cmd_degradability,
    "state-bounds": _cmd_state_bounds,
    "search-bippt": _cmd_search_bippt,
    "builtin": _cmd_builtin,
}


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else EXIT_OK
    try:
        payload = COMMANDS[args.subcommand](args)
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except VALIDATION_ERRORS as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    _emit(payload, args)
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""Command-line front end.

Subcommands: classify, vs-ic, vs-zic, strong-ic, strong-zic, weak, sweep,
segment, validate-mc.  Every command prints a JSON report to stdout; sweep
and segment additionally write CSV to --out.  Exit codes: 0 success,
1 usage or parse error, 2 domain error (wrong regime, singular system,
degenerate covariance, ...) with a machine-readable JSON object on stderr.

Channel parameters are taken from flags or from a plain ``key = value``
config file (a TOML-compatible subset); flags override the file.  The state
correlation is given either as --rho or as a regression slope --d / --c
(with the residual variance derived); giving more than one is a usage
error.  Rates are reported in bits by default; pass --nats to switch.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from .channel import ChannelKind, DecompDirection, IcParams, classify, rho_from_slope
from .errors import SdicError, UsageError
from .mc import validate
from .report import json_safe
from .strong import (
    strong_ic_check,
    strong_ic_rate_point,
    strong_scene,
    strong_scheme,
    strong_zic_check,
    strong_zic_segment,
)
from .sweep import SWEEP_CHECKS, Axis, SweepGrid, SweepSpec, run_sweep
from .verystrong import (
    vs_ic_coefficients,
    vs_ic_check,
    vs_ic_scene,
    vs_zic_check,
    vs_zic_coefficients,
    vs_zic_scene,
)
from .weak import weak_ic_sum_capacity, weak_zic_sum_capacity

SCHEMA_VERSION = "1"

_PARAM_KEYS = ("a", "b", "p1", "p2", "q1", "q2", "q1p", "q2p", "rho", "d", "c", "p1dp")


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures routed to exit code 1."""

    def error(self, message):
        raise UsageError(message)


def _add_param_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--config", help="key = value parameter file; flags override it")
    sub.add_argument("--a", type=float, help="receiver-1 cross gain a")
    sub.add_argument("--b", type=float, help="receiver-2 cross gain b (0 for the Z channel)")
    sub.add_argument("--p1", type=float, help="transmit power P1")
    sub.add_argument("--p2", type=float, help="transmit power P2")
    sub.add_argument("--q1", type=float, help="state variance Q1")
    sub.add_argument("--q2", type=float, help="state variance Q2")
    sub.add_argument("--q1p", type=float,
                     help="residual variance of S1 regressed on S2 (with --d; Q1 derived)")
    sub.add_argument("--q2p", type=float,
                     help="residual variance of S2 regressed on S1 (with --c; Q2 derived)")
    sub.add_argument("--rho", type=float, help="state correlation coefficient")
    sub.add_argument("--d", type=float, help="slope of S1 regressed on S2 (alternative to --rho)")
    sub.add_argument("--c", type=float, help="slope of S2 regressed on S1 (alternative to --rho)")
    unit = sub.add_mutually_exclusive_group()
    unit.add_argument("--bits", dest="nats", action="store_false", default=False,
                      help="report rates in bits (default)")
    unit.add_argument("--nats", dest="nats", action="store_true", help="report rates in nats")


def _parse_config(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, text = line.partition("=")
        key = key.strip().lower()
        text = text.strip().strip("\"'")
        if key not in _PARAM_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown parameter {key!r}")
        try:
            values[key] = float(text)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: value of {key!r} must be a number") from None
    return values


def _merged_values(args) -> dict:
    values = _parse_config(args.config) if args.config else {}
    for key in _PARAM_KEYS:
        flag = getattr(args, key.replace("-", "_"), None)
        if flag is not None:
            values[key] = flag
    return values


def _params_from_args(args, default_b: float | None = None, axis_names: set | None = None) -> tuple[IcParams, dict]:
    """Build IcParams from merged config/flag values.

    State variances come as --q1/--q2 directly or as regression residuals
    --q1p (with --d) / --q2p (with --c), in which case the full variance is
    derived: Q1 = d^2 Q2 + Q1' and Q2 = c^2 Q1 + Q2'.  ``axis_names`` lists
    sweep axes that will supply the correlation or derived variance per
    cell; the returned params then carry placeholder values for those.
    """
    axis_names = axis_names or set()
    values = _merged_values(args)
    if "b" not in values and default_b is not None:
        values["b"] = default_b
    corr_axis = axis_names & {"rho", "d", "c"}

    if "q1" in values and "q1p" in values:
        raise UsageError("give exactly one of --q1, --q1p")
    if "q2" in values and "q2p" in values:
        raise UsageError("give exactly one of --q2, --q2p")
    if "q1p" in values and "q2p" in values:
        raise UsageError("at most one variance may be given as a residual")
    if "q1p" in values and "d" not in values and "d" not in axis_names:
        raise UsageError("--q1p needs the slope --d (or a d axis)")
    if "q2p" in values and "c" not in values and "c" not in axis_names:
        raise UsageError("--q2p needs the slope --c (or a c axis)")

    corr = [k for k in ("rho", "d", "c") if k in values]
    if len(corr) > 1 or (corr and corr_axis):
        raise UsageError("give exactly one of --rho, --d, --c")
    if not corr and not corr_axis:
        raise UsageError("give exactly one of --rho, --d, --c")

    if "q2" not in values and "q2p" in values:
        if "c" in values:
            values["q2"] = values["c"] ** 2 * values.get("q1", 0.0) + values["q2p"]
        else:
            values["q2"] = values["q2p"]  # placeholder, recomputed per cell
    if "q1" not in values and "q1p" in values:
        if "d" in values:
            values["q1"] = values["d"] ** 2 * values.get("q2", 0.0) + values["q1p"]
        else:
            values["q1"] = values["q1p"]  # placeholder, recomputed per cell

    # axis-swept fields are overwritten per cell; give them valid placeholders
    placeholders = {"a": 0.0, "b": 0.0, "p1": 1.0, "p2": 1.0, "q1": 1.0, "q2": 1.0}
    for key in axis_names & placeholders.keys():
        values.setdefault(key, placeholders[key])
    missing = [k for k in ("a", "b", "p1", "p2", "q1", "q2") if k not in values]
    if missing:
        raise UsageError(f"missing channel parameters: {', '.join('--' + m for m in missing)}")

    if not corr:
        rho = 0.0  # placeholder, the axis supplies it
    elif corr[0] == "rho":
        rho = values["rho"]
    elif corr[0] == "d":
        rho = rho_from_slope(DecompDirection.S1_ON_S2, values["d"], values["q1"], values["q2"])
    else:
        rho = rho_from_slope(DecompDirection.S2_ON_S1, values["c"], values["q1"], values["q2"])
    params = IcParams(
        a=values["a"], b=values["b"], p1=values["p1"], p2=values["p2"],
        q1=values["q1"], q2=values["q2"], rho=rho,
    )
    return params, values


def _base(args) -> float:
    return math.e if args.nats else 2.0


def _unit_name(args) -> str:
    return "nats" if args.nats else "bits"


def _params_dict(params: IcParams) -> dict:
    return {
        "a": params.a, "b": params.b, "p1": params.p1, "p2": params.p2,
        "q1": params.q1, "q2": params.q2, "rho": params.rho,
    }


def _emit(payload: dict):
    sys.stdout.write(json.dumps(json_safe(payload), indent=2) + "\n")


def _parse_axis(text: str) -> Axis:
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"axis must be name:lo:hi:steps, got {text!r}")
    name, lo, hi, steps = parts
    try:
        return Axis(name.strip().lower(), float(lo), float(hi), int(steps))
    except ValueError:
        raise UsageError(f"axis must be name:lo:hi:steps with numeric bounds, got {text!r}") from None


def _write_csv(grid: SweepGrid, path: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        grid.to_csv(fh)


def build_parser() -> _Parser:
    parser = _Parser(prog="sdic", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("classify", help="interference regime of a parameter point")
    _add_param_flags(p)
    p.add_argument("--channel", choices=("ic", "zic"), default="ic")

    p = subs.add_parser("vs-ic", help="very strong regime capacity check, regular channel")
    _add_param_flags(p)

    p = subs.add_parser("vs-zic", help="very strong regime capacity check, Z channel")
    _add_param_flags(p)

    p = subs.add_parser("strong-ic", help="sum-capacity point check, regular channel")
    _add_param_flags(p)
    p.add_argument("--p1dp", type=float, help="power split P1'' in [0, P1]")

    p = subs.add_parser("strong-zic", help="sum-capacity point check, Z channel")
    _add_param_flags(p)
    p.add_argument("--p1dp", type=float, help="power split P1'' in [0, P1]")

    p = subs.add_parser("weak", help="weak regime sum capacity")
    _add_param_flags(p)
    p.add_argument("--channel", choices=("ic", "zic"), default="ic")

    p = subs.add_parser("sweep", help="grid sweep of a check with CSV output")
    _add_param_flags(p)
    p.add_argument("--check", required=True, choices=SWEEP_CHECKS)
    p.add_argument("--axis", action="append", required=True, metavar="NAME:LO:HI:STEPS",
                   help="sweep axis; repeat for a 2-D grid")
    p.add_argument("--p1dp", type=float, help="power split for strong checks")
    p.add_argument("--channel", choices=("ic", "zic"), default="ic", help="channel for the weak check")
    p.add_argument("--out", help="CSV output path")

    p = subs.add_parser("segment", help="certified sum-capacity segment, Z channel")
    _add_param_flags(p)
    p.add_argument("--steps", type=int, default=201, help="uniform P1'' grid size")
    p.add_argument("--out", help="CSV output path for the certified rates")

    p = subs.add_parser("validate-mc", help="Monte-Carlo validation of a scheme scene")
    _add_param_flags(p)
    p.add_argument("--variant", required=True, choices=("vs-ic", "vs-zic", "strong-ic", "strong-zic"))
    p.add_argument("--p1dp", type=float, help="power split for strong variants")
    p.add_argument("--n", type=int, default=10**6, help="sample count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=0.01, help="per-query tolerance")

    return parser


def _cmd_classify(args) -> dict:
    channel = ChannelKind.parse(args.channel)
    params, _ = _params_from_args(args, default_b=0.0 if channel is ChannelKind.ZIC else None)
    regime = classify(params, channel)
    return {
        "command": "classify",
        "channel": channel.value,
        "params": _params_dict(params),
        "regime": regime.kind.value,
        "margins": dict(regime.margins),
        "needs_index_swap": regime.needs_index_swap,
    }


def _cmd_vs_ic(args) -> dict:
    params, _ = _params_from_args(args)
    co = vs_ic_coefficients(params)
    report = vs_ic_check(params, _base(args))
    return {
        "command": "vs-ic",
        "params": _params_dict(params),
        "unit": _unit_name(args),
        "coefficients": {
            "alpha1": co.alpha1, "alpha2": co.alpha2, "beta1": co.beta1, "beta2": co.beta2,
        },
        **report.to_dict(),
    }


def _cmd_vs_zic(args) -> dict:
    params, _ = _params_from_args(args, default_b=0.0)
    co = vs_zic_coefficients(params)
    report = vs_zic_check(params, _base(args))
    return {
        "command": "vs-zic",
        "params": _params_dict(params),
        "unit": _unit_name(args),
        "coefficients": {"alpha1": co.alpha1, "alpha2": co.alpha2, "beta": co.beta},
        **report.to_dict(),
    }


def _require_p1dp(args) -> float:
    if args.p1dp is None:
        raise UsageError("--p1dp is required")
    return args.p1dp


def _cmd_strong_ic(args) -> dict:
    params, _ = _params_from_args(args)
    p1dp = _require_p1dp(args)
    scheme = strong_scheme(params, p1dp)
    report = strong_ic_check(params, p1dp, _base(args))
    point = strong_ic_rate_point(params, p1dp, _base(args))
    return {
        "command": "strong-ic",
        "params": _params_dict(params),
        "unit": _unit_name(args),
        "scheme": scheme.to_dict(),
        "target_point": point.to_dict(),
        **report.to_dict(),
    }


def _cmd_strong_zic(args) -> dict:
    params, _ = _params_from_args(args, default_b=0.0)
    p1dp = _require_p1dp(args)
    scheme = strong_scheme(params, p1dp)
    report = strong_zic_check(params, p1dp, _base(args))
    point = strong_ic_rate_point(params, p1dp, _base(args))
    return {
        "command": "strong-zic",
        "params": _params_dict(params),
        "unit": _unit_name(args),
        "scheme": scheme.to_dict(),
        "target_point": point.to_dict(),
        **report.to_dict(),
    }


def _cmd_weak(args) -> dict:
    channel = ChannelKind.parse(args.channel)
    params, _ = _params_from_args(args, default_b=0.0 if channel is ChannelKind.ZIC else None)
    if channel is ChannelKind.ZIC:
        csum = weak_zic_sum_capacity(params, _base(args))
    else:
        csum = weak_ic_sum_capacity(params, _base(args))
    return {
        "command": "weak",
        "channel": channel.value,
        "params": _params_dict(params),
        "unit": _unit_name(args),
        "sum_capacity": csum,
    }


def _cmd_sweep(args) -> dict:
    axes = tuple(_parse_axis(text) for text in args.axis)
    axis_names = {ax.name for ax in axes}
    params, values = _params_from_args(args, default_b=0.0, axis_names=axis_names)
    p1dp = values.get("p1dp", args.p1dp)
    spec = SweepSpec(
        check=args.check,
        axes=axes,
        params=params,
        p1_dprime=p1dp,
        channel=ChannelKind.parse(args.channel),
        log_base=_base(args),
        q1_resid=values.get("q1p"),
        q2_resid=values.get("q2p"),
    )
    grid = run_sweep(spec)
    if args.out:
        _write_csv(grid, args.out)
    payload = grid.to_dict()
    payload.update(
        {
            "command": "sweep",
            "unit": _unit_name(args),
            "fixed": _params_dict(params) | ({"p1dp": p1dp} if p1dp is not None else {}),
            "n_cells": len(grid.coords),
            "n_true": sum(grid.verdicts),
            "csv": args.out,
        }
    )
    return payload


def _cmd_segment(args) -> dict:
    params, _ = _params_from_args(args, default_b=0.0)
    result = strong_zic_segment(params, args.steps, _base(args))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("p1dp,r1,r2,schema_version\n")
            for point in result.rates:
                fh.write(
                    "%.12g,%.12g,%.12g,%s\n" % (point.p1_dprime, point.r1, point.r2, SCHEMA_VERSION)
                )
    return {
        "command": "segment",
        "params": _params_dict(params),
        "unit": _unit_name(args),
        "csv": args.out,
        **result.to_dict(),
    }


_MC_QUERIES = {
    "vs-ic": [
        ("U", "Y2"), (("S1", "S2"), "U"), ("V", "Y1"), (("S1", "S2"), "V"),
        ("U", ("V", "Y1")), ("V", ("U", "Y2")),
    ],
    "vs-zic": [
        ("V", "Y1"), ("V", "Y2"), ("S2", "V"), ("U", ("V", "Y1")), (("S1", "S2"), "U"),
    ],
    "strong-ic": [
        ("U1", "Y1"), ("U1", "Y2"), ("U1", "S1"), ("V", ("U1", "Y1")), ("V", ("U1", "Y2")),
        ("V", "S1"), ("U2", ("V", "Y1"), "U1"), ("U2", ("V", "Y2"), "U1"), ("U2", "S1", "U1"),
    ],
    "strong-zic": [
        ("U1", "Y1"), ("U1", "S1"), ("V", ("U1", "Y1")), ("V", "Y2"), ("V", "S1"),
        ("U2", ("V", "Y1"), "U1"), ("U2", "S1", "U1"),
    ],
}


def _cmd_validate_mc(args) -> dict:
    variant = args.variant
    if variant == "vs-ic":
        params, _ = _params_from_args(args)
        scene = vs_ic_scene(params)
    elif variant == "vs-zic":
        params, _ = _params_from_args(args, default_b=0.0)
        scene = vs_zic_scene(params)
    else:
        params, _ = _params_from_args(args, default_b=0.0 if variant == "strong-zic" else None)
        scene = strong_scene(params, _require_p1dp(args))
    report = validate(
        scene, _MC_QUERIES[variant], n=args.n, seed=args.seed, tol=args.tol, log_base=_base(args)
    )
    return {
        "command": "validate-mc",
        "variant": variant,
        "params": _params_dict(params),
        "unit": _unit_name(args),
        **report.to_dict(),
    }


_COMMANDS = {
    "classify": _cmd_classify,
    "vs-ic": _cmd_vs_ic,
    "vs-zic": _cmd_vs_zic,
    "strong-ic": _cmd_strong_ic,
    "strong-zic": _cmd_strong_zic,
    "weak": _cmd_weak,
    "sweep": _cmd_sweep,
    "segment": _cmd_segment,
    "validate-mc": _cmd_validate_mc,
}


def run(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload = _COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except SdicError as exc:
        body = {
            "schema_version": SCHEMA_VERSION,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        sys.stderr.write(json.dumps(json_safe(body)) + "\n")
        return 2
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    _emit(payload)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

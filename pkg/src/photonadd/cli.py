"""Command-line front end: ``witness``, ``sweep`` and ``verify``.

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 I/O failure.
Flags given on the command line override values from ``--config`` (a flat
``key=value`` file); environment variables are never read.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Optional, Sequence

from . import sweep, verify
from .errors import InvalidParameter, PhotonAddError
from .witnesses import WitnessResult

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3

PARAM_FLAGS = {
    "alpha": "coherent amplitude alpha (>= 0)",
    "nbar": "thermal mean photon number (> 0)",
    "nbar_inv": "inverse thermal mean photon number 1/nbar (> 0)",
    "reflectance": "beam-splitter reflectance R in [0, 1]",
    "eta": "detector or amplifier efficiency",
    "ps": "single-photon source purity p_s in [0, 1]",
}


class UsageError(Exception):
    """Invalid command-line input (exit code 2)."""


def _orders(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"orders must be comma-separated integers, got {text!r}") from None


def _add_params(p: argparse.ArgumentParser) -> None:
    group = p.add_argument_group("scheme parameters")
    for name, help_ in PARAM_FLAGS.items():
        group.add_argument("--" + name.replace("_", "-"), dest=name, type=float, help=help_)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photonadd",
        description="Nonclassicality witnesses of photon-added coherent and thermal states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    w = sub.add_parser("witness", help="evaluate witnesses at one parameter point")
    w.add_argument("--scheme", choices=sorted(sweep.SCHEMES), help="state preparation scheme")
    w.add_argument("--witness", choices=("q1", "q2", "pnd", "all"), help="witness to report (default: all)")
    w.add_argument("--orders", type=_orders, help="comma-separated orders m, e.g. 1,2,3 (default: 1)")
    _add_params(w)
    w.add_argument("--config", help="flat key=value file; command-line flags take precedence")

    s = sub.add_parser("sweep", help="evaluate a witness over a 1-D or 2-D grid and write CSV")
    s.add_argument("--scheme", choices=sorted(sweep.SCHEMES))
    s.add_argument("--witness", choices=("q1", "q2", "pnd"))
    s.add_argument("--orders", type=_orders, help="comma-separated orders m (default: 1)")
    s.add_argument("--axis1", help="name=start:stop:step, e.g. alpha=0:6:0.05")
    s.add_argument("--axis2", help="optional second axis, e.g. reflectance=0:1:0.01")
    _add_params(s)
    s.add_argument("--output", help="CSV path (default: standard output)")
    s.add_argument("--workers", type=int, help="worker processes (default: 1)")
    s.add_argument("--config", help="flat key=value file; command-line flags take precedence")

    v = sub.add_parser("verify", help="run every closed-form versus Fock-space cross-check")
    v.add_argument("--tolerance", type=float, help="maximum allowed error (default: 1e-9)")
    v.add_argument("--seed", type=int, help="seed of the random-state ensemble (default: 0)")
    v.add_argument("--config", help="flat key=value file; command-line flags take precedence")
    return parser


def read_config(path: str) -> dict:
    """Parse a flat ``key=value`` file; blank lines and ``#`` comments are skipped."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (t.strip() for t in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _apply_config(parser, sub_parser, args, argv) -> argparse.Namespace:
    """Re-parse with config values as defaults so explicit flags win."""
    config = read_config(args.config)
    known = {a.dest for a in sub_parser._actions} - {"help", "config"}
    unknown = sorted(set(config) - known)
    if unknown:
        raise UsageError(f"unknown key(s) in config file: {', '.join(unknown)}")
    sub_parser.set_defaults(**config)
    args = parser.parse_args(argv)
    # argparse converts string defaults only for some actions; do it uniformly
    for action in sub_parser._actions:
        value = getattr(args, action.dest, None)
        if action.dest in config and isinstance(value, str) and action.type is not None:
            try:
                setattr(args, action.dest, action.type(value))
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config key {action.dest}: {exc}") from None
        if action.dest in config and action.choices and getattr(args, action.dest) not in action.choices:
            raise UsageError(f"config key {action.dest}: must be one of {', '.join(action.choices)}")
    return args


def _scheme_params(args, scheme: str, skip=()) -> dict:
    """Collect the flags relevant to ``scheme``; ``--nbar`` is folded into ``nbar_inv``."""
    needed, _ = sweep.SCHEMES[scheme]
    given = {k: getattr(args, k) for k in PARAM_FLAGS if getattr(args, k, None) is not None}
    if "nbar" in given:
        if "nbar_inv" in given:
            raise UsageError("give either --nbar or --nbar-inv, not both")
        nbar = given.pop("nbar")
        if not nbar > 0:
            raise UsageError(f"nbar must be > 0, got {nbar}")
        given["nbar_inv"] = 1.0 / nbar
    stray = sorted(set(given) - set(needed))
    if stray:
        raise UsageError(f"parameter(s) {', '.join(stray)} not used by scheme {scheme}")
    return {k: v for k, v in given.items() if k not in skip}


# ---------------------------------------------------------------------------
# witness


def _fmt(x) -> str:
    return "nan" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.10g}"


def _describe(label: str, w: WitnessResult) -> str:
    if not w.defined:
        return f"  {label}: undefined (denominator {_fmt(w.denominator)})"
    text = f"  {label} = {_fmt(w.value)}  (numerator {_fmt(w.numerator)}, denominator {_fmt(w.denominator)})"
    if w.phase is not None:
        text += f"  phase = {_fmt(w.phase)}"
    return text


def cmd_witness(args) -> int:
    if args.scheme is None:
        raise UsageError("--scheme is required")
    scheme = args.scheme
    choice = args.witness or "all"
    available = sweep.SCHEMES[scheme][1]
    if choice != "all" and choice not in available:
        if choice == "q1":
            raise UsageError(f"Q1 is unavailable for {scheme}: the state is phase-symmetric")
        raise UsageError(f"witness {choice} is not available for {scheme}; choose from {', '.join(available)}")
    params = _scheme_params(args, scheme)
    results = sweep.evaluate_point(scheme, params, args.orders or [1])
    shown = ", ".join(f"{k}={_fmt(v)}" for k, v in sorted(params.items()))
    print(f"scheme: {scheme}  {shown}")
    if "pnd" in available and choice in ("pnd", "all"):
        print(f"P_nd = {_fmt(results[0].p_nd)}")
    if choice == "pnd":
        return EXIT_OK
    for r in results:
        print(f"m = {r.m}")
        if r.q1 is not None and choice in ("q1", "all"):
            print(_describe("Q1", r.q1))
        if r.q2 is not None and choice in ("q2", "all"):
            print(_describe("Q2", r.q2))
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


def build_sweep_spec(args) -> sweep.SweepSpec:
    for flag in ("scheme", "witness", "axis1"):
        if getattr(args, flag) is None:
            raise UsageError(f"--{flag} is required")
    axis1 = sweep.Axis.parse(args.axis1)
    axis2 = sweep.Axis.parse(args.axis2) if args.axis2 else None
    fixed = _scheme_params(args, args.scheme)
    spec = sweep.SweepSpec(
        scheme=args.scheme,
        witness=args.witness,
        orders=tuple(args.orders or [1]),
        axis1=axis1,
        axis2=axis2,
        fixed=fixed,
        output_path=args.output,
    )
    spec.validate()
    return spec


def cmd_sweep(args) -> int:
    spec = build_sweep_spec(args)
    workers = args.workers if args.workers is not None else 1
    if workers < 1:
        raise UsageError(f"workers must be >= 1, got {workers}")
    if spec.output_path:
        # fail on an unwritable path before spending time on the grid
        try:
            open(spec.output_path, "a").close()
        except OSError as exc:
            print(f"error: cannot write {spec.output_path}: {exc.strerror}", file=sys.stderr)
            return EXIT_IO
    rows = sweep.run_sweep(spec, workers=workers)
    if spec.output_path:
        try:
            sweep.write_csv(rows, spec.output_path)
        except OSError as exc:
            print(f"error: cannot write {spec.output_path}: {exc.strerror}", file=sys.stderr)
            return EXIT_IO
        print(f"wrote {len(rows)} rows to {spec.output_path}", file=sys.stderr)
    else:
        sys.stdout.write(sweep.format_csv(rows))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    tolerance = 1e-9 if args.tolerance is None else args.tolerance
    seed = 0 if args.seed is None else args.seed
    if not tolerance >= 0:
        raise UsageError(f"tolerance must be >= 0, got {tolerance}")
    reports = verify.run_all(tolerance=tolerance, seed=seed)
    sys.stdout.write(verify.format_report(reports, tolerance, seed))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


COMMANDS = {"witness": cmd_witness, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code (argparse usage errors exit 2 directly)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            sub_parser = parser._subparsers._group_actions[0].choices[args.command]
            try:
                args = _apply_config(parser, sub_parser, args, argv)
            except OSError as exc:
                print(f"error: cannot read config {args.config}: {exc.strerror}", file=sys.stderr)
                return EXIT_IO
        return COMMANDS[args.command](args)
    except (UsageError, InvalidParameter) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PhotonAddError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def run() -> None:
    sys.exit(main())

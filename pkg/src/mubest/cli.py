"""Command-line entry point (``mubest``).

Every flag may also be given in a plain-text ``key=value`` file passed with
``--config``; keys are flag names without the leading dashes (``mu-grid`` or
``mu_grid``). Flags on the command line override the file.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import harness
from .errors import DomainError, InputError, NumericalError
from .output import AxesSpec, render_svg, write_csv
from .selection import STANDARD_RULES, MuRule, compute_mu
from .theory import TheoryParams, regret_bounds_noncentered, regret_mu_avg_centered, regret_one_best_centered

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list(text: str) -> list[str]:
    return [v.strip() for v in str(text).split(",") if v.strip()]


def parse_grid(text: str) -> list[int]:
    """``a:b:step`` (inclusive arithmetic grid) or a comma-separated list."""
    text = str(text).strip()
    try:
        if ":" in text:
            parts = [int(v) for v in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            a, b, step = parts
            if step < 1 or b < a:
                raise ValueError
            return list(range(a, b + 1, step))
        return _int_list(text)
    except (ValueError, argparse.ArgumentTypeError):
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; expected a:b:step or a list")


def read_config_file(path) -> dict:
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{n}: expected key=value, got {raw!r}")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file mirroring the flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mubest", description="One-shot mu-best averaging toolkit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("theory", help="exact regret and non-centered bounds")
    _add_common(p)
    p.add_argument("--d", type=int)
    p.add_argument("--lambda", dest="lam", type=int)
    p.add_argument("--mu", type=_int_list, help="one or more comma-separated values")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--epsilon", type=float)

    for name, helptext in (("validate-centered", "Monte Carlo vs exact formula, optimum at center"),
                           ("validate-noncentered", "Monte Carlo vs bounds, offset optimum")):
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        p.add_argument("--d", type=int, default=5)
        p.add_argument("--lambda", dest="lam", type=int)
        p.add_argument("--r", type=float, default=1.0)
        p.add_argument("--reps", type=int)
        p.add_argument("--mu-grid", dest="mu_grid", type=parse_grid)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=".")
        p.add_argument("--workers", type=int, default=1)
        if name == "validate-noncentered":
            p.add_argument("--epsilon", type=float)

    p = sub.add_parser("bench", help="compare mu rules across batch sizes")
    _add_common(p)
    p.add_argument("--objective", type=_str_list, default=["sphere"])
    p.add_argument("--d", type=int)
    p.add_argument("--lambdas", type=_int_list, default=list(harness.DEFAULT_LAMBDAS))
    p.add_argument("--rules", type=_str_list, default=[r.name for r in STANDARD_RULES])
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0, help="Gaussian sampling scale")
    p.add_argument("--translation", choices=("std", "variance"), default="std",
                   help="how to read the 0.2 in N(0, 0.2 I) for the optimum translation")
    p.add_argument("--out", default=".")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--print-h", dest="print_h", action="store_true",
                   help="print the hull prefix h of every repetition as JSON lines on stderr")

    p = sub.add_parser("mu", help="print the mu chosen by a rule")
    _add_common(p)
    p.add_argument("--rule")
    p.add_argument("--lambda", dest="lam", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--h", type=int)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if args.command is None:
        raise ConfigError("a subcommand is required")
    if getattr(args, "config", None):
        values = read_config_file(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        aliases = {"lambda": "lam"}
        defaults = {}
        for key, value in values.items():
            dest = aliases.get(key, key)
            if dest not in known or dest in ("help", "config"):
                raise ConfigError(f"unknown config key {key!r} for {args.command}")
            action = next(a for a in sub._actions if a.dest == dest)
            if action.nargs == 0:
                defaults[dest] = value.lower() in ("1", "true", "yes", "on")
            else:
                defaults[dest] = value
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + ("lambda" if n == "lam" else n.replace("_", "-")) for n in missing)
        raise ConfigError(f"missing required option(s): {flags}")


def _emit(record: dict) -> None:
    print(json.dumps(record, sort_keys=False))


def cmd_theory(args) -> None:
    _require(args, "d", "lam", "mu")
    for mu in args.mu:
        p = TheoryParams(args.d, args.lam, mu, args.r, args.epsilon or 0.0)
        rec = {"d": p.d, "lambda": p.lam, "mu": p.mu, "r": p.r,
               "regret": regret_mu_avg_centered(p),
               "one_best": regret_one_best_centered(p.d, p.lam, p.r)}
        if args.epsilon is not None:
            b = regret_bounds_noncentered(p)
            rec.update(epsilon=p.epsilon, lower=b.lower, upper=b.upper)
        if not all(math.isfinite(v) for v in rec.values() if isinstance(v, float)):
            raise NumericalError(f"non-finite result for {rec}")
        _emit(rec)


def _finish(series, out_dir: Path, stem: str, axes: AxesSpec) -> None:
    for s in series:
        if not np.all(np.isfinite(s.mean)):
            raise NumericalError(f"series {s.label!r} contains non-finite values")
    csv_path = write_csv(series, out_dir / f"{stem}.csv")
    svg_path = render_svg(series, out_dir / f"{stem}.svg", axes)
    print(csv_path)
    print(svg_path)


def cmd_validate(args, noncentered: bool) -> None:
    _require(args, "lam", "mu_grid", *(("epsilon",) if noncentered else ()))
    kind = harness.NONCENTERED if noncentered else harness.CENTERED
    cfg = harness.ExperimentConfig(
        kind, args.d, lambdas=(args.lam,), mus=tuple(args.mu_grid), r=args.r,
        epsilon=args.epsilon if noncentered else 0.0, reps=args.reps, seed=args.seed,
        out_dir=args.out, workers=args.workers,
    )
    out_dir = harness.output_dir(cfg)
    if noncentered:
        res = harness.run_validation_noncentered(cfg)
        series = res.series
        stem = f"validate_noncentered_d{cfg.d}_lambda{cfg.lam}"
        _emit({"argmin_mu": res.argmin_mu,
               "transition_mu": (1 - cfg.epsilon) ** cfg.d * cfg.lam})
        title = f"non-centered, d={cfg.d}, lambda={cfg.lam}, epsilon={cfg.epsilon:g}"
    else:
        series = list(harness.run_validation_centered(cfg))
        stem = f"validate_centered_d{cfg.d}_lambda{cfg.lam}"
        title = f"centered, d={cfg.d}, lambda={cfg.lam}, r={cfg.r:g}"
    _finish(series, out_dir, stem, AxesSpec(True, True, title, "mu"))


def cmd_bench(args) -> None:
    _require(args, "d")
    for objective in args.objective:
        cfg = harness.ExperimentConfig(
            harness.RULE_COMPARISON, args.d, lambdas=tuple(args.lambdas), rules=tuple(args.rules),
            scale=args.scale, objective=objective, reps=args.reps, seed=args.seed,
            out_dir=args.out, workers=args.workers, translation=args.translation,
        )
        out_dir = harness.output_dir(cfg)

        def on_hull(lam, h, objective=objective):
            print(json.dumps({"objective": objective, "lambda": lam, "h": h}), file=sys.stderr)

        series = harness.run_rule_comparison(cfg, on_hull if args.print_h else None)
        stem = f"bench_{cfg.objective}_d{cfg.d}"
        title = f"{cfg.objective}, d={cfg.d}, {cfg.reps} repetitions"
        _finish(series, out_dir, stem, AxesSpec(True, True, title, "lambda"))


def cmd_mu(args) -> None:
    _require(args, "rule", "lam", "d")
    print(compute_mu(MuRule.parse(args.rule), args.lam, args.d, args.h))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        if args.command == "theory":
            cmd_theory(args)
        elif args.command == "validate-centered":
            cmd_validate(args, noncentered=False)
        elif args.command == "validate-noncentered":
            cmd_validate(args, noncentered=True)
        elif args.command == "bench":
            cmd_bench(args)
        elif args.command == "mu":
            cmd_mu(args)
    except SystemExit as exc:
        # argparse reports usage errors with status 2
        return int(exc.code or 0)
    except (ConfigError, InputError, DomainError, argparse.ArgumentTypeError) as exc:
        print(f"mubest: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, ArithmeticError) as exc:
        print(f"mubest: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"mubest: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

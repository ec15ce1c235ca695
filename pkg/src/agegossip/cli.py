"""Command-line front end: single runs, sweeps, and bound tables.

Subcommands:

  simulate   one seeded run, summary on stdout
  sweep      replicated (scheme, n) grid, CSV to --output
  bounds     closed-form tables and limits for given rates

Flags can also come from a flat key=value config file (--config); explicit
flags take precedence, unknown keys are hard errors. Everything written to
stdout is deterministic for a given invocation; timing and progress go to
stderr via logging.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from .analytics import (
    RateParams,
    asymptotic_bound,
    min_age_mean,
    min_age_mean_limit,
    sensing_bound_limit,
    sensing_bound_seq,
    steady_state_bound_finite_n,
)
from .engine import (
    Asuman,
    ConfigError,
    FixedC,
    NoGossip,
    OverN,
    SimConfig,
    Uniform,
    c_value,
    run_simulation,
)
from .harness import SweepSpec, default_horizon, run_sweep, write_csv

log = logging.getLogger("agegossip")

_SCHEMES = ("asuman", "uniform", "nogossip")


class UsageError(Exception):
    """Bad flag or config-file input; maps to exit code 2."""


def _parse_scheme(name: str, c_rule) -> Asuman | Uniform | NoGossip:
    name = name.strip().lower()
    if name == "asuman":
        return Asuman(c_rule=c_rule)
    if name == "uniform":
        return Uniform()
    if name == "nogossip":
        return NoGossip()
    raise UsageError(f"unknown scheme {name!r}, expected one of {', '.join(_SCHEMES)}")


def _parse_c_rule(text: str):
    text = text.strip().lower()
    if text == "over-n":
        return OverN()
    try:
        return FixedC(float(text))
    except (ValueError, ConfigError) as exc:
        raise UsageError(f"--c expects 'over-n' or a positive number, got {text!r}") from exc


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _add_common_rates(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda-e", dest="lambda_e", type=float, default=None,
                   metavar="RATE",
                   help="source self-update rate (events per unit time; default 1)")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   metavar="RATE",
                   help="total source-to-network update rate (events per unit time; default 1)")


def _add_run_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=float, default=None, metavar="RATE",
                   help="total gossip rate budget B (events per unit time; default n*lambda)")
    p.add_argument("--c", dest="c", type=str, default=None, metavar="RULE",
                   help="back-off coefficient: 'over-n' for C=1/n or a positive number "
                        "(time units per version; default over-n)")
    p.add_argument("--horizon", type=float, default=None, metavar="TIME",
                   help="simulated time span (time units; default max(2e4, 50n)/lambda)")
    p.add_argument("--warmup", type=float, default=None, metavar="FRACTION",
                   help="fraction of the horizon discarded before averaging (default 0.1)")
    p.add_argument("--seed", type=int, default=None, metavar="INT",
                   help="root seed, 64-bit unsigned (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agegossip",
        description="Version-age gossip network simulator and bound calculator.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="log progress and timing to stderr (repeat for more)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sim = sub.add_parser("simulate", help="run one simulation and print a summary")
    sim.add_argument("--n", type=int, default=None, metavar="COUNT",
                     help="number of receiver nodes (default 10)")
    sim.add_argument("--scheme", type=str, default=None,
                     help=f"gossip policy: one of {', '.join(_SCHEMES)} (default asuman)")
    _add_common_rates(sim)
    _add_run_params(sim)
    sim.add_argument("--epoch-trace", dest="epoch_trace", action="store_true",
                     default=None, help="record the per-epoch minimum age trace")
    sim.add_argument("--config", type=str, default=None, metavar="PATH",
                     help="flat key=value config file; flags override it")
    sim.set_defaults(func=_cmd_simulate)

    swp = sub.add_parser("sweep", help="run a replicated (scheme, n) grid and write CSV")
    swp.add_argument("--n-values", dest="n_values", type=str, default=None,
                     metavar="LIST",
                     help="comma-separated network sizes (default 100,200,400,600)")
    swp.add_argument("--scheme", type=str, default=None, metavar="LIST",
                     help=f"comma-separated subset of {', '.join(_SCHEMES)} (default asuman)")
    _add_common_rates(swp)
    _add_run_params(swp)
    swp.add_argument("--reps", type=int, default=None, metavar="COUNT",
                     help="independent replications per sweep point (default 20)")
    swp.add_argument("--output", type=str, default=None, metavar="PATH",
                     help="destination CSV path (required)")
    swp.add_argument("--config", type=str, default=None, metavar="PATH",
                     help="flat key=value config file; flags override it")
    swp.set_defaults(func=_cmd_sweep)

    bnd = sub.add_parser("bounds", help="print closed-form age tables and limits")
    _add_common_rates(bnd)
    bnd.add_argument("--n", type=int, default=None, metavar="COUNT",
                     help="network size for the finite-n bound (optional)")
    bnd.add_argument("--budget", type=float, default=None, metavar="RATE",
                     help="gossip budget B for the finite-n bound (default n*lambda)")
    bnd.add_argument("--k-max", dest="k_max", type=int, default=None, metavar="K",
                     help="last epoch index in the tables (default 10)")
    bnd.add_argument("--config", type=str, default=None, metavar="PATH",
                     help="flat key=value config file; flags override it")
    bnd.set_defaults(func=_cmd_bounds)

    return parser


def _load_config_file(path: str, sub: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    """Fill unset args from a flat key=value file; unknown keys are errors."""
    known: dict[str, argparse.Action] = {}
    for action in sub._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                known[opt[2:]] = action
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {text!r}")
        key, _, value = text.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "config":
            raise UsageError(f"{path}:{lineno}: config files cannot nest")
        action = known.get(key)
        if action is None:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        if getattr(args, action.dest) is not None:
            continue  # explicit flag wins
        if isinstance(action, argparse._StoreTrueAction):
            if value.lower() not in ("true", "false", "1", "0"):
                raise UsageError(f"{path}:{lineno}: {key} expects true/false, got {value!r}")
            parsed = value.lower() in ("true", "1")
        elif action.type is not None:
            try:
                parsed = action.type(value)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
        else:
            parsed = value
        setattr(args, action.dest, parsed)


def _defaulted(args: argparse.Namespace, **defaults) -> argparse.Namespace:
    for name, value in defaults.items():
        if getattr(args, name, None) is None:
            setattr(args, name, value)
    return args


def _cmd_simulate(args: argparse.Namespace) -> int:
    _defaulted(args, n=10, scheme="asuman", lambda_e=1.0, lam=1.0, c="over-n",
               warmup=0.1, seed=0, epoch_trace=False)
    if args.horizon is None:
        args.horizon = default_horizon(args.n, args.lam)
    scheme = _parse_scheme(args.scheme, _parse_c_rule(args.c))
    config = SimConfig(
        n=args.n, lambda_e=args.lambda_e, lam=args.lam, scheme=scheme,
        horizon=args.horizon, B=args.budget, warmup_fraction=args.warmup,
        seed=args.seed, record_epoch_trace=args.epoch_trace,
    )
    started = time.perf_counter()
    result = run_simulation(config)
    log.info("simulate finished in %.2fs", time.perf_counter() - started)

    print(f"scheme            {scheme.label}"
          + (f" (C={_fmt(c_value(scheme.c_rule, config.n))})" if isinstance(scheme, Asuman) else ""))
    print(f"n                 {config.n}")
    print(f"lambda_e          {_fmt(config.lambda_e)}")
    print(f"lambda            {_fmt(config.lam)}")
    print(f"B                 {_fmt(config.B)}")
    print(f"horizon           {_fmt(config.horizon)}")
    print(f"warmup_fraction   {_fmt(config.warmup_fraction)}")
    print(f"seed              {config.seed}")
    print(f"network mean age  {_fmt(result.network_mean_age)}")
    print(f"per-node age      min {_fmt(min(result.per_node_time_avg_age))}"
          f" / max {_fmt(max(result.per_node_time_avg_age))}")
    c = result.counts
    print(f"events            self-updates {c.self_updates}, deliveries {c.source_deliveries}, "
          f"gossip {c.gossip_deliveries}, intervals {c.intervals}")
    print(f"suppressed        {c.suppressed_node_intervals} node-intervals")
    print(f"effective horizon {_fmt(result.effective_horizon)}")
    if result.epoch_min_ages is not None:
        values = [v for _, v in result.epoch_min_ages]
        mean = sum(values) / len(values) if values else float("nan")
        print(f"epoch trace       {len(values)} epochs, mean min age {_fmt(mean)}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    _defaulted(args, n_values="100,200,400,600", scheme="asuman", lambda_e=1.0,
               lam=1.0, c="over-n", warmup=0.1, seed=0, reps=20)
    if args.output is None:
        raise UsageError("sweep requires --output PATH for the CSV")
    try:
        n_values = tuple(int(part) for part in str(args.n_values).split(",") if part.strip())
    except ValueError as exc:
        raise UsageError(f"--n-values expects comma-separated integers, got {args.n_values!r}") from exc
    c_rule = _parse_c_rule(args.c)
    schemes = tuple(_parse_scheme(part, c_rule)
                    for part in str(args.scheme).split(",") if part.strip())
    if args.lam != 1.0:
        log.info("sweep normalizes time units so lambda=1; using rate ratio %g",
                 args.lambda_e / args.lam)
    spec = SweepSpec(
        n_values=n_values,
        schemes=schemes,
        rate_ratio=args.lambda_e / args.lam,
        budget=args.budget,
        replications=args.reps,
        horizon=args.horizon,
        warmup_fraction=args.warmup,
        base_seed=args.seed,
    )
    started = time.perf_counter()
    rows = run_sweep(spec)
    log.info("sweep finished in %.2fs", time.perf_counter() - started)
    write_csv(rows, args.output)
    for row in rows:
        bounds = ""
        if row.bound_finite_n is not None:
            bounds = (f"  bound_finite_n={_fmt(row.bound_finite_n)}"
                      f"  bound_asymptotic={_fmt(row.bound_asymptotic)}")
        print(f"{row.scheme:<9} n={row.n:<5} mean_age={_fmt(row.mean_age)}"
              f"  ci95={_fmt(row.ci_half_width_95)}{bounds}")
    print(f"wrote {len(rows)} rows to {args.output}")
    return 0


def _cmd_bounds(args: argparse.Namespace) -> int:
    _defaulted(args, lambda_e=1.0, lam=1.0, k_max=10)
    if args.k_max < 1:
        raise UsageError(f"--k-max must be >= 1, got {args.k_max}")
    p = RateParams(lambda_e=args.lambda_e, lam=args.lam)
    print(f"lambda_e          {_fmt(args.lambda_e)}")
    print(f"lambda            {_fmt(args.lam)}")
    print(f"rate ratio        {_fmt(args.lambda_e / args.lam)}")
    print(f"min-age mean limit        {_fmt(min_age_mean_limit(p))}")
    print(f"asymptotic mean-age bound {_fmt(asymptotic_bound(p))}")
    print(f"sensing-phase bound limit {_fmt(sensing_bound_limit(p))}")
    if args.n is not None:
        if args.n < 2:
            raise UsageError(f"--n must be >= 2 for the finite-n bound, got {args.n}")
        pn = RateParams(lambda_e=args.lambda_e, lam=args.lam, B=args.budget, n=args.n)
        print(f"finite-n bound (n={args.n}, B={_fmt(pn.B)})  "
              f"{_fmt(steady_state_bound_finite_n(pn))}")
    print()
    print(f"{'k':>4}  {'min_age_mean':>14}  {'sensing_bound':>14}")
    for k in range(args.k_max + 1):
        sensing = _fmt(sensing_bound_seq(k, p)) if k >= 1 else "-"
        print(f"{k:>4}  {_fmt(min_age_mean(k, p)):>14}  {sensing:>14}")
    return 0


def parse_and_dispatch(argv: list[str] | None = None) -> int:
    """Parse argv and run the chosen subcommand.

    Returns 0 on success, 2 on usage errors, 1 on runtime failures.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse printed its own diagnostic
        return int(exc.code or 0)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(message)s")
    try:
        if getattr(args, "config", None) is not None:
            command_parser = _subparser_for(parser, args.command)
            _load_config_file(args.config, command_parser, args)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"run 'agegossip {args.command} --help' for flag help", file=sys.stderr)
        return 2
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"run 'agegossip {args.command} --help' for flag help", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _subparser_for(parser: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise RuntimeError(f"no subparser for {command}")  # pragma: no cover


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()

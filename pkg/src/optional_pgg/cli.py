"""Command line interface.

Subcommands: payoff, simulate, equilibria, invasion, sweep, oracle-check.
Flags may also be supplied through a plain ``key = value`` config file
(``--config``); explicit flags win over file values, which win over the
built-in defaults.  Exit codes: 0 success, 2 argument error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .dynamics import (
    ClassifierControls,
    IntegrationControls,
    IntegrationError,
    classify_long_run,
    integrate,
    write_trajectory_csv,
)
from .equilibria import edge_report_to_dict, equilibrium_to_dict, invasion_map, stationary_points
from .game import GameParams, SimplexState, brute_force_payoffs, mean_payoffs, payoff_gap, population_mean
from .sweep import SweepConfig, metadata_path, run_sweep, write_sweep_csv, write_sweep_metadata

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

ORACLE_STRICT_TOL = 1e-8


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


class Resolver:
    """Merge flag, config-file and default values, remembering the result."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.file_values = _load_config_file(args.config) if getattr(args, "config", None) else {}
        self.resolved: dict = {"command": args.command}
        if getattr(args, "config", None):
            self.resolved["config_file"] = args.config

    def get(self, key: str, default, cast):
        flag = getattr(self.args, key, None)
        if flag is not None:
            value = flag
        elif key in self.file_values:
            raw = self.file_values[key]
            value = (raw.lower() in ("1", "true", "yes", "on")) if cast is bool else cast(raw)
        else:
            value = default
        self.resolved[key] = value
        return value

    def require(self, key: str, cast):
        value = self.get(key, None, cast)
        if value is None:
            raise ValueError(f"missing required option --{key.replace('_', '-')}")
        return value


def _game_params(res: Resolver, default_mu: float) -> GameParams:
    return GameParams(
        group_size=res.get("M", 5, int),
        enhancement=res.get("r", 3.0, float),
        alpha=res.require("alpha", float),
        beta=res.require("beta", float),
        mu=res.get("mu", default_mu, float),
    )


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as handle:
            handle.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _write_json(document: dict, output: str | None) -> None:
    text = json.dumps(document, indent=2, sort_keys=True)
    _emit(text, output)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_payoff(res: Resolver) -> int:
    params = _game_params(res, default_mu=0.0)
    x = res.require("x", float)
    y = res.require("y", float)
    state = SimplexState(x, y, 1.0 - x - y)
    payoffs = mean_payoffs(params, state)
    gap = payoff_gap(params, state.z)
    mean = population_mean(params, state, payoffs)
    doc = {
        "pi_c": payoffs.pi_c,
        "pi_d": payoffs.pi_d,
        "pi_n": payoffs.pi_n,
        "population_mean": mean,
        "gap": gap,
    }
    status = EXIT_OK
    if res.get("oracle", False, bool):
        oracle = brute_force_payoffs(params, state)
        deviation = max(
            abs(payoffs.pi_c - oracle.pi_c),
            abs(payoffs.pi_d - oracle.pi_d),
            abs(payoffs.pi_n - oracle.pi_n),
        )
        doc.update(
            oracle_pi_c=oracle.pi_c,
            oracle_pi_d=oracle.pi_d,
            oracle_pi_n=oracle.pi_n,
            oracle_deviation=deviation,
        )
        if res.get("strict", False, bool) and deviation > ORACLE_STRICT_TOL:
            status = EXIT_NUMERICAL
    output = res.get("output", None, str)
    fmt = res.get("format", None, str)
    if fmt == "json":
        doc["config"] = res.resolved
        _write_json(doc, output)
    elif fmt == "csv":
        header = ",".join(doc)
        row = ",".join(_fmt(value) for value in doc.values())
        _emit(f"{header}\n{row}", output)
    else:
        _emit("\n".join(f"{key} = {_fmt(value)}" for key, value in doc.items()), output)
    return status


def cmd_simulate(res: Resolver) -> int:
    params = _game_params(res, default_mu=0.0)
    x0 = res.get("x0", 1 / 3, float)
    y0 = res.get("y0", 1 / 3, float)
    initial = SimplexState.from_components(x0, y0, 1.0 - x0 - y0)
    t_max = res.get("t_max", 2e4, float)
    controls = IntegrationControls(
        rel_tol=res.get("rel_tol", 1e-8, float),
        abs_tol=res.get("abs_tol", 1e-10, float),
        max_step=res.get("max_step", float("inf"), float),
        record_every=res.get("record_every", 1, int),
        record_from=res.get("record_from", 0.0, float),
        max_steps=res.get("max_steps", 20_000_000, int),
    )
    output = res.get("output", None, str)

    def write(traj, partial: bool, t_reached: float | None) -> None:
        if output:
            write_trajectory_csv(traj, output)
            meta = {"config": res.resolved, "partial": partial, "package_version": __version__}
            if partial:
                meta["t_reached"] = t_reached
            with open(metadata_path(output), "w") as handle:
                json.dump(meta, handle, indent=2, sort_keys=True)
                handle.write("\n")
        else:
            write_trajectory_csv(traj, sys.stdout)

    try:
        trajectory = integrate(params, initial, t_max, controls)
    except IntegrationError as err:
        if err.partial is not None and err.partial.times.size:
            write(err.partial, partial=True, t_reached=err.t_reached)
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERICAL

    write(trajectory, partial=False, t_reached=None)
    outcome = classify_long_run(trajectory)
    summary = f"regime = {outcome.regime}\nF_C = {_fmt(outcome.f_c)}"
    print(summary, file=sys.stderr if output is None else sys.stdout)
    return EXIT_OK


def cmd_equilibria(res: Resolver) -> int:
    params = _game_params(res, default_mu=0.0)
    points = stationary_points(params)
    doc = {
        "config": res.resolved,
        "package_version": __version__,
        "equilibria": [equilibrium_to_dict(eq) for eq in points],
    }
    _write_json(doc, res.get("output", None, str))
    return EXIT_OK


def cmd_invasion(res: Resolver) -> int:
    params = _game_params(res, default_mu=0.0)
    reports = invasion_map(params)
    doc = {
        "config": res.resolved,
        "package_version": __version__,
        "edges": [edge_report_to_dict(report) for report in reports],
    }
    _write_json(doc, res.get("output", None, str))
    return EXIT_OK


def _parse_start(text: str) -> tuple[float, float, float]:
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"initial condition must be 'x,y,z', got {text!r}")
    return tuple(parts)


def cmd_sweep(res: Resolver) -> int:
    starts = res.get("ic", None, str)
    if starts is None:
        initial_conditions = ((1 / 3, 1 / 3, 1 / 3),)
    elif isinstance(starts, str):
        initial_conditions = tuple(_parse_start(chunk) for chunk in starts.split(";"))
    else:
        initial_conditions = tuple(_parse_start(chunk) for chunk in starts)
    alpha_range = res.get("alpha_range", (-1.0, 1.0), lambda s: tuple(float(v) for v in s.split(",")))
    beta_range = res.get("beta_range", (-1.0, 1.0), lambda s: tuple(float(v) for v in s.split(",")))
    config = SweepConfig(
        alpha_range=tuple(alpha_range),
        beta_range=tuple(beta_range),
        grid_n=res.get("grid_n", 41, int),
        group_size=res.get("M", 5, int),
        enhancement=res.get("r", 3.0, float),
        mu=res.get("mu", 1e-8, float),
        initial_conditions=initial_conditions,
        t_max=res.get("t_max", 2e4, float),
        rel_tol=res.get("rel_tol", 1e-8, float),
        abs_tol=res.get("abs_tol", 1e-10, float),
        max_step=res.get("max_step", None, float),
        classifier=ClassifierControls(tail_fraction=res.get("tail_fraction", 0.2, float)),
        survival_threshold=res.get("threshold", 0.01, float),
    )
    jobs = res.get("jobs", 1, int)
    output = res.get("output", "sweep.csv", str)
    result = run_sweep(config, jobs=jobs)
    write_sweep_csv(result, output)
    meta_path = write_sweep_metadata(result, output, extra={"command_config": res.resolved})
    survivors = len(result.surviving_cells())
    print(f"wrote {output} and {meta_path}: {len(result.cells)} cells, {survivors} above threshold")
    n_errors = sum(1 for cell in result.cells if cell.regime == "error")
    if n_errors:
        print(f"warning: {n_errors} cells failed to integrate", file=sys.stderr)
    return EXIT_OK


def cmd_oracle_check(res: Resolver) -> int:
    trials = res.get("trials", 1000, int)
    seed = res.get("seed", 0, int)
    tol = res.get("tol", 1e-10, float)
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_gap = 0.0
    for _ in range(trials):
        m = int(rng.integers(3, 9))
        r = 1.0 + (m - 1.0) * rng.uniform(1e-6, 1.0 - 1e-6)
        alpha = rng.uniform(-1.0, 1.0)
        beta = rng.uniform(-1.0, 1.0)
        x, y, z = rng.dirichlet((1.0, 1.0, 1.0))
        params = GameParams(m, r, alpha, beta)
        state = SimplexState.from_components(x, y, z)
        closed = mean_payoffs(params, state)
        oracle = brute_force_payoffs(params, state)
        worst = max(
            worst,
            abs(closed.pi_c - oracle.pi_c),
            abs(closed.pi_d - oracle.pi_d),
            abs(closed.pi_n - oracle.pi_n),
        )
        worst_gap = max(worst_gap, abs((closed.pi_d - closed.pi_c) - payoff_gap(params, state.z)))
    print(f"trials = {trials}")
    print(f"max_payoff_deviation = {_fmt(worst)}")
    print(f"max_gap_deviation = {_fmt(worst_gap)}")
    if worst > tol:
        print(f"error: deviation exceeds tolerance {tol:g}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--M", type=int, dest="M", help="group size (default 5)")
    common.add_argument("--r", type=float, dest="r", help="enhancement factor (default 3)")
    common.add_argument("--alpha", type=float, help="outside payoff of non-participants")
    common.add_argument("--beta", type=float, help="influence of non-participants")
    common.add_argument("--mu", type=float, help="mutation rate")
    common.add_argument("--t-max", type=float, dest="t_max", help="integration horizon")
    common.add_argument("--rel-tol", type=float, dest="rel_tol", help="relative tolerance")
    common.add_argument("--abs-tol", type=float, dest="abs_tol", help="absolute tolerance")
    common.add_argument("--max-step", type=float, dest="max_step", help="maximum step size")
    common.add_argument("--max-steps", type=int, dest="max_steps", help="step budget")
    common.add_argument("--output", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"),
                        help="output format (default: plain text for payoff, "
                             "CSV for simulate/sweep, JSON for equilibria/invasion)")
    common.add_argument("--config", help="key = value config file; flags override it")
    common.add_argument("--jobs", type=int, help="parallel workers (sweep only)")
    common.add_argument("--seed", type=int, help="random seed (oracle-check only)")

    parser = argparse.ArgumentParser(
        prog="opgg",
        description="Optional-participation public goods game: payoffs, dynamics, "
                    "equilibria and phase diagrams.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("payoff", parents=[common], help="closed-form payoffs at a state")
    p.add_argument("--x", type=float, help="cooperator fraction")
    p.add_argument("--y", type=float, help="defector fraction")
    p.add_argument("--oracle", action="store_true", default=None,
                   help="also run the brute-force oracle")
    p.add_argument("--strict", action="store_true", default=None,
                   help="fail when the oracle deviates by more than 1e-8")
    p.set_defaults(handler=cmd_payoff)

    p = sub.add_parser("simulate", parents=[common], help="integrate one trajectory to CSV")
    p.add_argument("--x0", type=float, help="initial cooperator fraction (default 1/3)")
    p.add_argument("--y0", type=float, help="initial defector fraction (default 1/3)")
    p.add_argument("--record-every", type=int, dest="record_every",
                   help="record every k-th accepted step")
    p.add_argument("--record-from", type=float, dest="record_from",
                   help="record only samples with t >= this value")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("equilibria", parents=[common], help="stationary points as JSON (mu = 0)")
    p.set_defaults(handler=cmd_equilibria)

    p = sub.add_parser("invasion", parents=[common], help="edge invasion reports as JSON (mu = 0)")
    p.set_defaults(handler=cmd_invasion)

    p = sub.add_parser("sweep", parents=[common], help="(alpha, beta) grid scan to CSV")
    p.add_argument("--alpha-range", dest="alpha_range", type=float, nargs=2,
                   metavar=("LO", "HI"), help="alpha interval (default -1 1)")
    p.add_argument("--beta-range", dest="beta_range", type=float, nargs=2,
                   metavar=("LO", "HI"), help="beta interval (default -1 1)")
    p.add_argument("--grid-n", dest="grid_n", type=int, help="cells per axis (default 41)")
    p.add_argument("--ic", action="append",
                   help="initial condition 'x,y,z'; repeat for several starts")
    p.add_argument("--tail-fraction", dest="tail_fraction", type=float,
                   help="classifier tail window share (default 0.2)")
    p.add_argument("--threshold", type=float, help="survival threshold on F_C (default 0.01)")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("oracle-check", parents=[common],
                       help="randomized closed-form vs brute-force battery")
    p.add_argument("--trials", type=int, help="number of random trials (default 1000)")
    p.add_argument("--tol", type=float, help="acceptance tolerance (default 1e-10)")
    p.set_defaults(handler=cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # mu != 0 is not meaningful for the fixed-point analysis commands.
    if args.command in ("equilibria", "invasion") and args.mu:
        parser.error(f"{args.command} requires mu = 0")
    fmt = getattr(args, "format", None)
    if fmt == "json" and args.command in ("simulate", "sweep"):
        parser.error(f"{args.command} writes CSV; --format json is not supported")
    if fmt == "csv" and args.command in ("equilibria", "invasion"):
        parser.error(f"{args.command} writes JSON; --format csv is not supported")
    try:
        resolver = Resolver(args)
        return args.handler(resolver)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrationError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()

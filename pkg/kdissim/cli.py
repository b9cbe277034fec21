"""Command-line entry point."""

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import NoReturn

import numpy as np

from kdissim import __version__, metrics
from kdissim.bnb import solve_bb
from kdissim.config import VALID_LOG_LEVELS, Config
from kdissim.experiment import ExperimentConfig, ResultRow, format_csv, run_experiment, run_method
from kdissim.formats import read_paths, resolve_instance, write_network, write_paths
from kdissim.formulations import build, method_names, objective_name, parse_method
from kdissim.instances import REFERENCE_GRIDS, REFERENCE_RANDOM_SIZES, REFERENCE_SEEDS, InstanceSpec
from kdissim.ipm import ipm_trace
from kdissim.lp import BACKENDS
from kdissim.model import export_lp
from kdissim.oracle import OBJECTIVES, TIE_BREAKS, brute_force_optimum
from kdissim.rstar import rstar

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class UsageError(Exception):
    """Bad command line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--debug", action="store_true", default=None, help="Enable debug logging")
    common.add_argument("--log-level", choices=VALID_LOG_LEVELS, help="Log level")
    common.add_argument("--lp-backend", choices=BACKENDS, help="LP relaxation solver")
    common.add_argument("--time-limit-ms", type=int, help="Branch-and-bound time limit")
    common.add_argument("--workers", type=int, help="Worker processes for experiments")

    parser = _Parser(
        prog="kdissim",
        description="K dissimilar s-t paths: integer formulations, exact solving and scoring",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", parents=[common], help="Write instance files")
    family = gen.add_mutually_exclusive_group(required=True)
    family.add_argument("--grid", nargs=2, type=int, metavar=("P", "Q"))
    family.add_argument("--random", nargs=3, type=int, metavar=("N", "M", "SEED"))
    family.add_argument("--reference", action="store_true", help="All reference instance families")
    gen.add_argument("-o", "--output", help="Output file (single instance)")
    gen.add_argument("-d", "--directory", default=".", help="Output directory")

    solve = sub.add_parser("solve", parents=[common], help="Solve one instance with one method")
    solve.add_argument("instance")
    solve.add_argument("--method", required=True, help=", ".join(method_names()))
    solve.add_argument("-k", type=int, required=True)
    solve.add_argument("--paths", help="Write the loopless paths to this file")

    ipm = sub.add_parser("ipm", parents=[common], help="Iterative penalty method")
    ipm.add_argument("instance")
    ipm.add_argument("-k", type=int, required=True)
    ipm.add_argument("--alpha", type=float)
    ipm.add_argument("--paths", help="Write the paths to this file")
    ipm.add_argument("--trace", action="store_true", help="Print each path and its cost")

    score = sub.add_parser("score", parents=[common], help="Score a paths file")
    score.add_argument("instance")
    score.add_argument("paths")
    score.add_argument("--indices", action="store_true", help="Correlation of D1..D4 over pairs")

    lp = sub.add_parser("export-lp", parents=[common], help="Write a formulation as an LP file")
    lp.add_argument("instance")
    lp.add_argument("--method", required=True)
    lp.add_argument("-k", type=int, required=True)
    lp.add_argument("-o", "--output")

    rs = sub.add_parser("rstar", parents=[common], help="Presence bound R*")
    rs.add_argument("instance")
    rs.add_argument("-k", type=int, required=True)
    rs.add_argument("--cross-check", action="store_true", help="Also solve the LP relaxation")

    exp = sub.add_parser("experiment", parents=[common], help="Run an experiment file")
    exp.add_argument("config")
    exp.add_argument("-o", "--output", help="CSV file (overrides the experiment file)")

    orc = sub.add_parser("oracle", parents=[common], help="Brute-force optimum")
    orc.add_argument("instance")
    orc.add_argument("-k", type=int, required=True)
    orc.add_argument("--objective", choices=OBJECTIVES)
    orc.add_argument("--presence-bound", type=int)
    orc.add_argument("--tie-break", choices=TIE_BREAKS, default="index")
    orc.add_argument("--compare", metavar="METHOD", help="Check a formulation against the oracle")
    return parser


def _config(args: argparse.Namespace) -> Config:
    return Config.load({
        "debug": args.debug,
        "log_level": args.log_level,
        "lp_backend": args.lp_backend,
        "time_limit_ms": args.time_limit_ms,
        "workers": args.workers,
        "alpha": getattr(args, "alpha", None),
    })


def _cmd_gen(args: argparse.Namespace, config: Config) -> int:
    if args.reference:
        specs = [InstanceSpec.grid(p, q) for p, q in REFERENCE_GRIDS]
        specs += [InstanceSpec.random(n, m, s) for n, m in REFERENCE_RANDOM_SIZES for s in REFERENCE_SEEDS]
    elif args.grid:
        specs = [InstanceSpec.grid(*args.grid)]
    else:
        specs = [InstanceSpec.random(*args.random)]

    if args.output and len(specs) > 1:
        raise UsageError("--output names a single file; use --directory with --reference")
    directory = Path(args.directory)
    directory.mkdir(parents=True, exist_ok=True)
    for spec in specs:
        target = Path(args.output) if args.output else directory / f"{spec.instance_id}.gr"
        write_network(spec.build(), target)
        print(target)
    return EXIT_OK


def _print_rows(rows: list[ResultRow]) -> None:
    sys.stdout.write(format_csv(rows, with_means=False))


def _cmd_solve(args: argparse.Namespace, config: Config) -> int:
    instance_id, net = resolve_instance(args.instance)
    parse_method(args.method)
    row = run_method(instance_id, net, args.k, args.method, time_limit_ms=config.time_limit_ms,
                     lp_backend=config.lp_backend)
    if args.paths and row.paths is not None:
        write_paths(row.paths, args.paths)
    _print_rows([row])
    return EXIT_OK


def _cmd_ipm(args: argparse.Namespace, config: Config) -> int:
    instance_id, net = resolve_instance(args.instance)
    if args.trace:
        for k, (path, costs) in enumerate(ipm_trace(net, args.k, config.alpha)):
            cost = sum(costs[a] for a in path.arcs)
            print(f"# path {k}: cost {cost}, nodes {' '.join(map(str, path.nodes))}")
    row = run_method(instance_id, net, args.k, "ipm", alpha=config.alpha)
    if args.paths and row.paths is not None:
        write_paths(row.paths, args.paths)
    _print_rows([row])
    return EXIT_OK


def _cmd_score(args: argparse.Namespace, config: Config) -> int:
    _, net = resolve_instance(args.instance)
    paths = read_paths(args.paths, net)
    print(f"K {len(paths)}")
    for name in ("OL", "repeated", "RO", "Rep", "max-presence"):
        print(f"{name} {metrics.objective_value(name, paths)}")
    if len(paths) >= 2:
        print(f"avdi {metrics.round_half_up(metrics.avdi(paths), 6)}")
        print(f"midi {metrics.round_half_up(metrics.midi(paths), 6)}")
    if args.indices:
        corr = metrics.index_correlation(paths)
        with np.printoptions(precision=3, suppress=True):
            print("correlation D1..D4")
            print(corr)
    return EXIT_OK


def _cmd_export_lp(args: argparse.Namespace, config: Config) -> int:
    _, net = resolve_instance(args.instance)
    kind, bounded = parse_method(args.method)
    if bounded:
        kind = replace(kind, presence_bound=rstar(net, args.k))
    text = export_lp(build(kind, net, args.k))
    if args.output:
        Path(args.output).write_text(text)
        log.info("Wrote LP model to %s", args.output)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_rstar(args: argparse.Namespace, config: Config) -> int:
    _, net = resolve_instance(args.instance)
    print(rstar(net, args.k, cross_check=args.cross_check, backend=config.lp_backend))
    return EXIT_OK


def _cmd_experiment(args: argparse.Namespace, config: Config) -> int:
    experiment = ExperimentConfig.from_yaml(args.config, config)
    if args.workers is not None:
        experiment = replace(experiment, workers=args.workers)
    if args.output:
        experiment = replace(experiment, output=Path(args.output))
    rows = run_experiment(experiment)
    if experiment.output is None:
        sys.stdout.write(format_csv(rows))
    failed = sum(1 for r in rows if r.status == "error")
    if failed:
        log.warning("%d of %d rows ended in error", failed, len(rows))
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace, config: Config) -> int:
    _, net = resolve_instance(args.instance)
    objective, bound = args.objective, args.presence_bound
    kind = None
    if args.compare:
        kind, bounded = parse_method(args.compare)
        if bounded:
            kind = replace(kind, presence_bound=rstar(net, args.k))
        objective = objective or objective_name(kind.tag)
        bound = bound if bound is not None else kind.presence_bound
        if objective != objective_name(kind.tag):
            raise UsageError(f"--objective {objective} does not match method {args.compare}")
    if objective is None:
        raise UsageError("oracle needs --objective or --compare")

    result = brute_force_optimum(
        net, args.k, objective, presence_bound=bound, path_cap=config.path_cap,
        multiset_cap=config.multiset_cap, tie_break=args.tie_break,
    )
    print(f"{objective} {result.value}")
    print(f"paths {' '.join(map(str, result.indices))}")
    if kind is None:
        return EXIT_OK

    report = solve_bb(build(kind, net, args.k), config.time_limit_ms, config.lp_backend)
    print(f"{args.compare} {report.status.value} {report.objective}")
    if report.objective is None or abs(report.objective - float(result.value)) > 1e-6:
        log.error("Oracle %s = %s but %s gives %s", objective, result.value, args.compare,
                  report.objective)
        return EXIT_RUNTIME
    return EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "ipm": _cmd_ipm,
    "score": _cmd_score,
    "export-lp": _cmd_export_lp,
    "rstar": _cmd_rstar,
    "experiment": _cmd_experiment,
    "oracle": _cmd_oracle,
}


def cli_dispatch(argv: list[str] | None = None) -> int:
    """Run one command; returns 0 on success, 1 on usage errors, 2 on runtime errors."""
    try:
        args = _build_parser().parse_args(argv)
        config = _config(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_OK

    config.setup_logging()
    try:
        return _COMMANDS[args.command](args, config)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, OSError, RuntimeError) as e:
        log.error("%s failed: %s", args.command, e)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


def main() -> None:
    """Entry point."""
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()

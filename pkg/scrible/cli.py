import argparse
import json
import sys
import numpy as np
import tabulate
from pydantic import ValidationError
from scrible.errors import ArgumentError, ConfigError, ScribleError, SizeError
from scrible.geometry import (
    dikin_membership,
    local_norm,
    make_box,
    make_log_barrier,
    sample_interior_point,
    verify_barrier_parameter,
    verify_self_concordance,
)
from scrible.globals import DEFAULT_OUT_DIR
from scrible.logging_utils import configure_logging, get_logger, set_logfile
from scrible.objects.polytope import ConvexPolytope
from scrible.oracles import enumerate_reduction_check
from scrible.simulators import BENCH_HORIZONS, run_bench, run_experiment
from scrible.utils.config_utils import load_experiment_config

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2

DIKIN_RADIUS = 0.999


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _run(args) -> int:
    overrides = {
        'run.seed': args.seed,
        'run.eta': args.eta,
        'run.update_mode': args.update_mode,
        'replications': args.replications,
        'out_dir': args.out,
        'emit_plot_data': True if args.emit_plot_data else None,
    }
    config = load_experiment_config(args.config, overrides)
    summary = run_experiment(config, progress=False if args.quiet else None)
    rows = [(key, summary[key]) for key in ('algorithm', 'horizon', 'replications', 'mean_regret',
                                            'std_regret', 'bound', 'bound_satisfied', 'wall_time_seconds')]
    print(tabulate.tabulate(rows, tablefmt="plain"))
    return EXIT_OK if summary['bound_satisfied'] else EXIT_CHECK_FAILED


def _verify_barrier(args) -> int:
    with open(args.body, "r", encoding="utf-8") as f:
        body = ConvexPolytope.from_json(json.load(f))
    barrier = make_log_barrier(body)
    rng = np.random.default_rng(args.seed)
    failures = {'self_concordance': 0, 'barrier_parameter': 0, 'dikin_containment': 0}
    for _ in range(args.samples):
        x = sample_interior_point(body, rng)
        h = rng.standard_normal(body.get_dimension())
        if not verify_self_concordance(barrier, x, h):
            failures['self_concordance'] += 1
        if not verify_barrier_parameter(barrier, x, h):
            failures['barrier_parameter'] += 1
        y = x + DIKIN_RADIUS * h / local_norm(barrier, x, h)
        if not (dikin_membership(barrier, x, y) and body.is_interior(y)):
            failures['dikin_containment'] += 1
    rows = [(check, args.samples - count, count) for check, count in failures.items()]
    print(tabulate.tabulate(rows, headers=["check", "passed", "failed"], tablefmt="plain"))
    return EXIT_OK if not any(failures.values()) else EXIT_CHECK_FAILED


def _check_reduction(args) -> int:
    if args.n < 1:
        raise ArgumentError(f"--n must be positive, got {args.n}")
    body = make_box(-np.ones(args.n), np.ones(args.n))
    losses = np.random.default_rng(args.seed).uniform(-1.0, 1.0, size=(args.T, args.n)) / args.n
    lhs, rhs, equal = enumerate_reduction_check(losses, make_log_barrier(body), args.eta)
    print(tabulate.tabulate([("lhs", repr(lhs)), ("rhs", repr(rhs)), ("difference", abs(lhs - rhs)), ("equal", equal)],
                            tablefmt="plain"))
    return EXIT_OK if equal else EXIT_CHECK_FAILED


def _bench(args) -> int:
    result = run_bench(tuple(args.horizons), seeds=args.seeds, out_directory=args.out,
                       progress=False if args.quiet else None)
    print(result['table'])
    print()
    print(tabulate.tabulate(sorted(result['slopes'].items()), headers=["algorithm", "log-log slope"], tablefmt="plain"))
    if result['csv']:
        print(f"Wrote bench stats to {result['csv']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="scrible", description="Bandit linear optimization with self-concordant barriers.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for per-round debug logs")
    parser.add_argument("--quiet", action="store_true", help="no progress bars")
    parser.add_argument("--logfile", help="also write the log to this file")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run an experiment from a JSON config")
    run.add_argument("--config", required=True)
    run.add_argument("--out")
    run.add_argument("--seed", type=int)
    run.add_argument("--replications", type=int)
    run.add_argument("--eta", help="'auto' or a positive float")
    run.add_argument("--update-mode", choices=["argmin", "single-newton", "single_newton"])
    run.add_argument("--emit-plot-data", action="store_true")
    run.set_defaults(handler=_run)

    verify = commands.add_parser("verify-barrier", help="geometry checks of the log barrier on a body file")
    verify.add_argument("--body", required=True)
    verify.add_argument("--samples", type=int, default=100)
    verify.add_argument("--seed", type=int, default=0)
    verify.set_defaults(handler=_verify_barrier)

    reduction = commands.add_parser("check-reduction", help="exact bandit-reduction check on random losses")
    reduction.add_argument("--n", type=int, required=True)
    reduction.add_argument("--T", type=int, required=True)
    reduction.add_argument("--eta", type=float, required=True)
    reduction.add_argument("--seed", type=int, default=0)
    reduction.set_defaults(handler=_check_reduction)

    bench = commands.add_parser("bench", help="SCRiBLe versus bandit projected gradient descent")
    bench.add_argument("--horizons", type=int, nargs="+", default=list(BENCH_HORIZONS))
    bench.add_argument("--seeds", type=int, default=5)
    bench.add_argument("--out", default=DEFAULT_OUT_DIR)
    bench.set_defaults(handler=_bench)
    return parser


def main(argv: list[str] = None) -> int:
    """
    Entry point. Exit codes: 0 on success, 1 on usage or configuration errors, 2 when a run
    aborts on a violated invariant or a bound or verification check fails.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    if args.logfile:
        set_logfile(args.logfile)
    logger.info("command: %s", " ".join(argv if argv is not None else sys.argv[1:]))
    try:
        return args.handler(args)
    except (ConfigError, ArgumentError, SizeError, ValidationError, OSError, json.JSONDecodeError) as err:
        print(f"scrible: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ScribleError as err:
        print(f"scrible: check failed: {err}", file=sys.stderr)
        return EXIT_CHECK_FAILED

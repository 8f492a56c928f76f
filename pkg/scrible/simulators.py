import os
import csv
import json
import sys
import time
import numpy as np
from concurrent.futures import ProcessPoolExecutor, as_completed
from collections import defaultdict
from tqdm import tqdm
from scrible.algorithms import resolve_eta, run_algorithm, run_bandit_pgd, run_scrible, theorem_bound
from scrible.environment_builders import build_box_environment, build_environment
from scrible.errors import ConfigError, RunAbortedError
from scrible.globals import DEFAULT_OUT_DIR, THREADS_ENV_VAR
from scrible.logging_utils import get_logger
from scrible.objects.experiment_config import ExperimentConfig
from scrible.objects.run_config import BANDIT_PGD, RunConfig
from scrible.utils.statistics_utils import calc_stats, export_stat_dict_to_csv, format_stats, loglog_slope
from scrible.utils.trace_utils import write_trace_csv

logger = get_logger(__name__)

BENCH_HORIZONS = tuple(2 ** k for k in range(10, 15))
BENCH_PGD_MULTIPLIERS = (0.5, 1.0, 2.0)
SUMMARY_FILE = "summary.json"
PLOT_DATA_FILE = "plot_data.csv"
PLOT_POINTS = 256


def worker_count(replications: int) -> int:
    """Replication workers: the CPU count, capped by SCRIBLE_THREADS and by the replication count."""
    cap = os.cpu_count() or 1
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw:
        try:
            cap = int(raw)
        except ValueError as err:
            raise ConfigError(f"{THREADS_ENV_VAR} must be a positive integer, got '{raw}'") from err
        if cap < 1:
            raise ConfigError(f"{THREADS_ENV_VAR} must be a positive integer, got {cap}")
    return max(1, min(cap, replications))


def trace_file_name(replication: int) -> str:
    return f"trace_{replication:04d}.csv"


def run_replication(config: ExperimentConfig, replication: int) -> dict:
    """
    Runs replication r with seed base_seed + r and writes its trace CSV into the output directory.

    Returns:
        dict: replication, seed, final regret, cumulative regret per round, bound and trace path.

    Raises:
        RunAbortedError: If the run fails; the message and `replication` name the replication.
    """
    run_config = config.replication_config(replication)
    env, barrier = build_environment(config.environment, run_config.horizon)
    try:
        trace = run_algorithm(env, run_config, barrier)
    except RunAbortedError as err:
        raise RunAbortedError(f"replication {replication}: {err}", trace=err.trace, replication=replication) from err

    n = barrier.get_dimension()
    bound = theorem_bound(barrier.get_theta(), n, run_config.loss_bound, run_config.horizon)
    path = write_trace_csv(trace, os.path.join(config.out_dir, trace_file_name(replication)), bound)
    cumulative_regret = trace.cumulative_regret()
    logger.info("replication %d (seed %d): regret %.6g", replication, run_config.seed,
                float(cumulative_regret[-1]) if len(trace) else 0.0)
    return {
        'replication': replication,
        'seed': run_config.seed,
        'regret': float(cumulative_regret[-1]) if len(trace) else 0.0,
        'cumulative_regret': cumulative_regret,
        'theta': barrier.get_theta(),
        'dimension': n,
        'eta': trace.eta,
        'bound': bound,
        'trace_file': path,
    }


def _write_plot_data(path: str, results: list[dict], theta: float, n: int, L: float, T: int) -> str:
    mean_regret = np.mean([r['cumulative_regret'] for r in results], axis=0)
    rounds = np.unique(np.linspace(1, T, min(T, PLOT_POINTS)).round().astype(int))
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(['t', 'mean_regret', 'bound'])
        for t in rounds:
            writer.writerow([t, repr(float(mean_regret[t - 1])), repr(theorem_bound(theta, n, L, t))])
    return path


def run_experiment(config: ExperimentConfig, progress: bool = None) -> dict:
    """
    Runs all replications of an experiment, in worker processes when more than one worker is
    available, and writes a per-replication trace CSV plus a JSON summary into `config.out_dir`.

    Args:
        config (ExperimentConfig): The experiment.
        progress (bool): Show a progress bar (default: when stderr is a terminal).

    Returns:
        dict: The summary: regrets, their mean and standard deviation, the regret bound, whether
            the mean regret is within it, and the wall time.

    Raises:
        RunAbortedError: If a replication fails; `replication` holds its index.
    """
    start = time.perf_counter()
    os.makedirs(config.out_dir, exist_ok=True)
    replications = config.replications
    workers = worker_count(replications)
    if progress is None:
        progress = sys.stderr.isatty()
    logger.info("experiment: %d replication(s) on %d worker(s), output in %s", replications, workers, config.out_dir)

    results = []
    with tqdm(total=replications, desc="replications", disable=not progress) as bar:
        if workers == 1:
            for r in range(replications):
                results.append(run_replication(config, r))
                bar.update()
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = {pool.submit(run_replication, config, r): r for r in range(replications)}
                for future in as_completed(futures):
                    try:
                        results.append(future.result())
                    except RunAbortedError as err:
                        err.replication = futures[future]
                        for pending in futures:
                            pending.cancel()
                        raise
                    bar.update()
    results.sort(key=lambda result: result['replication'])

    run = config.run
    first = results[0]
    regrets = np.array([r['regret'] for r in results])
    bound = first['bound']
    mean_regret = float(np.mean(regrets))
    summary = {
        'algorithm': run.algorithm,
        'update_mode': run.update_mode,
        'horizon': run.horizon,
        'dimension': first['dimension'],
        'theta': first['theta'],
        'loss_bound': run.loss_bound,
        'eta': first['eta'],
        'replications': replications,
        'seeds': [r['seed'] for r in results],
        'regrets': regrets.tolist(),
        'mean_regret': mean_regret,
        'std_regret': float(np.std(regrets, ddof=1)) if replications > 1 else 0.0,
        'bound': bound,
        'bound_satisfied': bool(mean_regret <= bound),
        'trace_files': [os.path.basename(r['trace_file']) for r in results],
    }
    if config.emit_plot_data and run.horizon > 0:
        _write_plot_data(os.path.join(config.out_dir, PLOT_DATA_FILE), results,
                         first['theta'], first['dimension'], run.loss_bound, run.horizon)
    summary['wall_time_seconds'] = time.perf_counter() - start

    with open(os.path.join(config.out_dir, SUMMARY_FILE), 'w') as f:
        json.dump(summary, f, indent=2)
    logger.info("experiment: mean regret %.6g, bound %.6g, satisfied %s", mean_regret, bound, summary['bound_satisfied'])
    return summary


def run_bench(
    horizons: tuple[int, ...] = BENCH_HORIZONS,
    seeds: int = 5,
    n: int = 2,
    multipliers: tuple[float, ...] = BENCH_PGD_MULTIPLIERS,
    out_directory: str = DEFAULT_OUT_DIR,
    progress: bool = None
) -> dict:
    """
    Compares SCRiBLe (auto eta) against bandit projected gradient descent on the box [-1, 1]^n
    with the rotating adversary. For each horizon T, PGD is run on the grid
    delta = a T^(-1/4), eta = c T^(-3/4) for a, c in `multipliers`, and its best grid point (by
    mean regret) is reported. Slopes of log mean regret against log T are fitted per algorithm.

    Returns:
        dict: 'stats' (T -> algorithm -> regret statistics), 'slopes', 'table' and 'csv' path.
    """
    if progress is None:
        progress = sys.stderr.isatty()
    stat_dict = defaultdict(dict)
    for T in tqdm(horizons, desc="bench horizons", disable=not progress):
        env, barrier = build_box_environment(n, T)
        scrible_config = RunConfig(horizon=T, allow_condition_violation=True)
        scrible_regrets = [run_scrible(env, scrible_config.model_copy(update={'seed': s}), barrier).regret
                           for s in range(seeds)]
        stat_dict[T]['SCRiBLe'] = calc_stats(scrible_regrets)
        stat_dict[T]['SCRiBLe'].update(eta=resolve_eta(scrible_config, barrier.get_theta(), n), delta=float("nan"))

        best = None
        for delta_multiplier in multipliers:
            delta = min(delta_multiplier * T ** -0.25, 0.5)
            for eta_multiplier in multipliers:
                eta = eta_multiplier * T ** -0.75
                config = RunConfig(horizon=T, seed=0, algorithm=BANDIT_PGD, eta=eta, pgd_delta=delta)
                regrets = [run_bandit_pgd(env, config.model_copy(update={'seed': s}), barrier.get_domain()).regret
                           for s in range(seeds)]
                if best is None or np.mean(regrets) < np.mean(best[0]):
                    best = (regrets, eta, delta)
        stat_dict[T]['BanditPGD'] = calc_stats(best[0])
        stat_dict[T]['BanditPGD'].update(eta=best[1], delta=best[2])
        logger.info("bench T=%d: scrible %.4g, pgd %.4g", T,
                    stat_dict[T]['SCRiBLe']['mean'], stat_dict[T]['BanditPGD']['mean'])

    slopes = {
        alg: loglog_slope(list(stat_dict), [stat_dict[T][alg]['mean'] for T in stat_dict])
        for alg in ('SCRiBLe', 'BanditPGD')
    }
    table = format_stats(stat_dict, 'mean')
    path = export_stat_dict_to_csv(stat_dict, 'bench.csv', out_directory)
    return {'stats': dict(stat_dict), 'slopes': slopes, 'table': table, 'csv': path}

import os
import csv
import tabulate
import numpy as np


def calc_stats(values: list[float]) -> dict[str, float]:
    values = np.asarray(values, dtype=float)
    return {
        'min': float(np.min(values)),
        'max': float(np.max(values)),
        'median': float(np.median(values)),
        'mean': float(np.mean(values)),
        'std_dev': float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    }


def export_stat_dict_to_csv(stat_dict: dict[str, dict[str, dict[str, float]]], filename: str, out_directory: str) -> str:
    """
    Exports the stat_dict (horizon -> algorithm -> stats) to a CSV file in the specified directory
    with the given filename. Returns the file path, or None when there is nothing to export.
    """
    rows = []
    for horizon, algorithms in stat_dict.items():
        for algorithm, stats in algorithms.items():
            row = {
                'horizon': horizon,
                'algorithm': algorithm,
            }
            row.update(stats)
            rows.append(row)
    if not rows:
        return None
    fieldnames = ['horizon', 'algorithm'] + [k for k in rows[0] if k not in ('horizon', 'algorithm')]
    os.makedirs(out_directory, exist_ok=True)
    file_path = os.path.join(out_directory, filename)
    with open(file_path, 'w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return file_path


def format_stats(stat_dict: dict[str, dict[str, dict[str, float]]], statistic: str) -> str:
    """
    Formats a table of the provided statistic from the stat_dict, one row per horizon and one
    column per algorithm. The statistic options are 'min', 'max', 'median', 'mean' and 'std_dev'.
    """
    if not stat_dict:
        return "No data to display."
    algorithms = list(next(iter(stat_dict.values())).keys())
    headers = ["T"] + algorithms
    table = []
    for horizon, by_algorithm in stat_dict.items():
        row = [horizon]
        for alg in algorithms:
            value = by_algorithm.get(alg, {}).get(statistic, None)
            row.append(round(value, 3) if value is not None else "N/A")
        table.append(row)
    return tabulate.tabulate(table, headers=headers, tablefmt="plain")


def print_stats(stat_dict: dict[str, dict[str, dict[str, float]]], statistic: str, file=None) -> None:
    print(file=file)
    print(format_stats(stat_dict, statistic), file=file)


def loglog_slope(horizons, values) -> float:
    """Least-squares slope of log(value) against log(T); nan when fewer than two positive values."""
    horizons = np.asarray(horizons, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = values > 0
    if np.count_nonzero(keep) < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(horizons[keep]), np.log(values[keep]), 1)
    return float(slope)

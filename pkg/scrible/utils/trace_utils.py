import csv
import os
import numpy as np
from scrible.objects.run_trace import RunTrace


def trace_columns(n: int) -> list[str]:
    """The fixed trace CSV header for an n-dimensional decision set."""
    return (
        ["t"]
        + [f"x{i}" for i in range(n)]
        + [f"y{i}" for i in range(n)]
        + ["observed_loss"]
        + [f"fhat{i}" for i in range(n)]
        + ["cum_loss", "cum_regret", "bound"]
    )


def _exact(value: float) -> str:
    # shortest decimal that round-trips to the same double
    return repr(float(value))


def write_trace_csv(trace: RunTrace, path: str, bound: float) -> str:
    """
    Writes one row per round with full-precision decimals. The constant `bound` column is the
    regret bound of the run's parameters, so the bound check can be redone from the file alone.

    Args:
        trace (RunTrace): The run to write.
        path (str): Destination file; parent directories are created.
        bound (float): The regret bound for the run.

    Returns:
        str: The path written.
    """
    n = trace.dimension
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    cumulative_regret = trace.cumulative_regret()
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(trace_columns(n))
        for record, regret in zip(trace.get_rounds(), cumulative_regret):
            writer.writerow(
                [record.round]
                + [_exact(v) for v in record.center]
                + [_exact(v) for v in record.prediction]
                + [_exact(record.observed_loss)]
                + [_exact(v) for v in record.estimate]
                + [_exact(record.cumulative_true_loss), _exact(regret), _exact(bound)]
            )
    return path


def read_trace_csv(path: str) -> dict[str, np.ndarray]:
    """Reads a trace CSV back into one float array per column (`t` as integers)."""
    with open(path, "r", newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader)
        rows = [row for row in reader]
    columns = {}
    for j, name in enumerate(header):
        values = [row[j] for row in rows]
        columns[name] = np.array(values, dtype=int if name == "t" else float)
    return columns


def final_regret(columns: dict[str, np.ndarray]) -> float:
    regrets = columns["cum_regret"]
    return float(regrets[-1]) if regrets.size else 0.0


def bound_satisfied_from_csvs(paths: list[str]) -> bool:
    """Recomputes the summary bound flag: mean final cumulative regret over the files <= bound."""
    finals, bounds = [], []
    for path in paths:
        columns = read_trace_csv(path)
        finals.append(final_regret(columns))
        if columns["bound"].size:
            bounds.append(float(columns["bound"][0]))
    if not bounds:
        return True
    return float(np.mean(finals)) <= bounds[0]

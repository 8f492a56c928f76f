from scrible.logging_utils import configure_logging
from scrible.simulators import run_bench
from scrible.utils.statistics_utils import print_stats

# Compares SCRiBLe with bandit projected gradient descent on the rotating box adversary.

configure_logging(1)
result = run_bench(
    horizons=(2 ** 10, 2 ** 11, 2 ** 12, 2 ** 13, 2 ** 14),
    seeds=5,
    n=2,
    multipliers=(0.5, 1.0, 2.0),
    out_directory="out/bench",
)
print_stats(result['stats'], 'mean')
print_stats(result['stats'], 'std_dev')
for algorithm, slope in result['slopes'].items():
    print(f"{algorithm}: log-log slope {slope:.3f}")

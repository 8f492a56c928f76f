import os
from scrible.logging_utils import configure_logging
from scrible.objects.experiment_config import ExperimentConfig
from scrible.simulators import run_experiment

# Mean regret of SCRiBLe over 50 seeds at T = 4096 against the regret bound, for the two
# named environments. Traces and summaries land in out/acceptance/<environment>.

configure_logging(1)
for named in ("box_rotating", "diamond"):
    config = ExperimentConfig.model_validate({
        "run": {"horizon": 4096, "seed": 0},
        "environment": {"named": named},
        "replications": 50,
        "out_dir": os.path.join("out", "acceptance", named),
        "emit_plot_data": True,
    })
    summary = run_experiment(config)
    print(f"{named}: mean regret {summary['mean_regret']:.2f} "
          f"(std {summary['std_regret']:.2f}), bound {summary['bound']:.2f}, "
          f"satisfied {summary['bound_satisfied']}")

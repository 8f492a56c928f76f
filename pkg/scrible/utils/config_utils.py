import json
import os
from typing import Any
from scrible.objects.experiment_config import ExperimentConfig


def merge_overrides(data: dict, overrides: dict[str, Any]) -> dict:
    """
    Applies dotted-key overrides ('run.seed', 'replications', ...) on top of config-file data.
    None values are skipped so unset CLI flags leave the file (or the defaults) in charge.
    """
    merged = json.loads(json.dumps(data))
    for dotted, value in overrides.items():
        if value is None:
            continue
        node = merged
        *parents, leaf = dotted.split(".")
        for key in parents:
            node = node.setdefault(key, {})
        node[leaf] = value
    return merged


def load_experiment_config(path: str = None, overrides: dict[str, Any] = None) -> ExperimentConfig:
    """
    Loads an experiment config. Precedence: overrides (CLI flags) > file fields > model defaults.
    A relative `environment.graph_file` is resolved against the config file's directory.
    """
    data = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    data = merge_overrides(data, overrides or {})
    graph_file = data.get("environment", {}).get("graph_file")
    if path is not None and graph_file and not os.path.isabs(graph_file):
        data["environment"]["graph_file"] = os.path.join(os.path.dirname(os.path.abspath(path)), graph_file)
    return ExperimentConfig.model_validate(data)

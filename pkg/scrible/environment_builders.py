import json
import numpy as np
from scrible.environments import (
    ROTATING,
    Environment,
    SequenceEnvironment,
    ShortestPathEnvironment,
    build_flow_polytope,
    make_oblivious_sequence,
)
from scrible.errors import ConfigError
from scrible.geometry import make_box, make_log_barrier, make_simplex
from scrible.objects.barrier import BarrierOracle
from scrible.objects.experiment_config import EnvironmentSpec
from scrible.objects.graph_spec import GraphSpec
from scrible.objects.polytope import ConvexPolytope

BOX_ROTATING = "box_rotating"
DIAMOND = "diamond"


def diamond_graph() -> GraphSpec:
    """
    The four-node diamond s=0, a=1, b=2, t=3 with edges s-a, s-b, a-b, a-t, b-t. It has three
    source-sink paths, so its flow polytope has reduced dimension 2.
    """
    return GraphSpec(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)], source=0, sink=3)


def build_box_environment(
    n: int,
    T: int,
    kind: str = ROTATING,
    seed: int = 0,
    vectors=None
) -> tuple[Environment, BarrierOracle]:
    """
    Generates an oblivious environment on the box [-1, 1]^n together with its log barrier.

    Args:
        n (int): The dimension of the box.
        T (int): The number of rounds.
        kind (str): The loss sequence kind (see `make_oblivious_sequence`).
        seed (int): Seed for random sequences.
        vectors: Vectors for the constant, rotating and alternating kinds.

    Returns:
        tuple[Environment, BarrierOracle]: The environment and the barrier of its decision set.
    """
    body = make_box(-np.ones(n), np.ones(n))
    return SequenceEnvironment(make_oblivious_sequence(kind, body, T, seed=seed, vectors=vectors)), make_log_barrier(body)


def build_shortest_path_environment(graph: GraphSpec, delays) -> tuple[Environment, BarrierOracle]:
    body, coord_map = build_flow_polytope(graph)
    return ShortestPathEnvironment(graph, delays, coord_map), make_log_barrier(body)


def build_diamond_environment(T: int, seed: int = 0) -> tuple[Environment, BarrierOracle]:
    """
    Generates the diamond shortest-path environment with T rounds of edge delays drawn uniformly
    from [0, 1/3], so that every path (at most three edges) takes at most 1 time unit.
    """
    graph = diamond_graph()
    delays = np.random.default_rng(seed).uniform(0.0, 1.0 / 3.0, size=(max(T, 1), graph.get_edge_count()))
    return build_shortest_path_environment(graph, delays)


def _body_from_spec(spec: EnvironmentSpec) -> ConvexPolytope:
    if spec.polytope is not None:
        return ConvexPolytope(spec.polytope.A, spec.polytope.b, interior_point=spec.polytope.interior_point)
    if spec.box is not None:
        return make_box(spec.box.lower, spec.box.upper)
    return make_simplex(spec.simplex_dimension)


def build_environment(spec: EnvironmentSpec, T: int) -> tuple[Environment, BarrierOracle]:
    """
    Builds the environment and barrier an experiment config describes.

    Args:
        spec (EnvironmentSpec): The environment section of the experiment config.
        T (int): The horizon, used to size generated loss sequences.

    Returns:
        tuple[Environment, BarrierOracle]: The environment and the log barrier of its decision set.

    Raises:
        ConfigError: If a graph file cannot be read or has no delays.
    """
    if spec.named == BOX_ROTATING:
        return build_box_environment(2, T)
    if spec.named == DIAMOND:
        return build_diamond_environment(T, seed=spec.named_seed)
    if spec.graph_file is not None:
        try:
            with open(spec.graph_file, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigError(f"cannot read graph file {spec.graph_file}: {err}") from err
        return _from_graph_json(data)
    if spec.graph is not None:
        return _from_graph_json(spec.graph)

    body = _body_from_spec(spec)
    sequence = make_oblivious_sequence(spec.losses.kind, body, T, seed=spec.losses.seed, vectors=spec.losses.vectors)
    return SequenceEnvironment(sequence), make_log_barrier(body)


def _from_graph_json(data: dict) -> tuple[Environment, BarrierOracle]:
    if "delays" not in data:
        raise ConfigError("graph JSON is missing field 'delays'")
    return build_shortest_path_environment(GraphSpec.from_json(data), data["delays"])

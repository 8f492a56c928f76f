import json
import numpy as np
import pytest
from scrible.algorithms import run_scrible
from scrible.environment_builders import build_diamond_environment, build_environment, diamond_graph
from scrible.environments import (
    ShortestPathEnvironment,
    SequenceEnvironment,
    build_flow_polytope,
    decompose_flow,
    delays_to_loss,
    make_oblivious_sequence,
)
from scrible.errors import ArgumentError, ConfigError, ContractViolationError
from scrible.objects.experiment_config import EnvironmentSpec
from scrible.objects.graph_spec import GraphSpec
from scrible.objects.run_config import RunConfig


def _parallel_edges():
    return GraphSpec(2, [(0, 1), (0, 1)], source=0, sink=1)


def test_constant_and_rotating_sequences(square):
    sequence = make_oblivious_sequence("constant", square, 4, vectors=[[0.5, 0.0]])
    assert len(sequence) == 4
    assert sequence.get_declared_bound() == pytest.approx(0.5)
    assert np.array_equal(sequence.get_vector(3), np.array([0.5, 0.0]))

    sequence = make_oblivious_sequence("rotating", square, 5)
    assert np.array_equal(sequence.get_vectors(), np.array([[1, 0], [0, 1], [1, 0], [0, 1], [1, 0]], dtype=float))
    assert sequence.get_declared_bound() == 1.0


def test_random_signed_sequences_are_normalized(square):
    sequence = make_oblivious_sequence("random_signed", square, 50, seed=3)
    assert sequence.vertex_bound(square) == pytest.approx(1.0)
    again = make_oblivious_sequence("random_signed", square, 50, seed=3)
    assert np.array_equal(sequence.get_vectors(), again.get_vectors())


def test_alternating_sequence(interval):
    sequence = make_oblivious_sequence("alternating", interval, 5)
    assert sequence.get_vectors()[:, 0] == pytest.approx(np.array([0.5, -1.0, 1.0, -1.0, 1.0]))


def test_sequence_arguments_are_validated(square):
    with pytest.raises(ArgumentError):
        make_oblivious_sequence("sawtooth", square, 5)
    with pytest.raises(ArgumentError):
        make_oblivious_sequence("constant", square, 5, vectors=[[1.0, 0.0, 0.0]])
    with pytest.raises(ArgumentError):
        make_oblivious_sequence("rotating", square, -1)


def test_environment_rounds_are_bounded_by_the_horizon(square):
    env = SequenceEnvironment(make_oblivious_sequence("rotating", square, 3))
    assert len(env.get_sequence()) == env.get_horizon() == 3
    assert env.observe(1, [0.25, -0.5]) == pytest.approx(-0.5)
    with pytest.raises(ArgumentError):
        env.observe(3, [0.0, 0.0])
    with pytest.raises(ArgumentError):
        env.loss_vector(-1)


def test_flow_polytope_examples():
    body, coord_map = build_flow_polytope(_parallel_edges())
    assert body.get_dimension() == 1
    assert coord_map.get_paths() == [(0,), (1,)]

    graph = GraphSpec(3, [(0, 1), (1, 2), (0, 2)], source=0, sink=2)
    body, coord_map = build_flow_polytope(graph)
    assert coord_map.get_paths() == [(0, 1), (2,)]
    assert coord_map.to_edge([0.25]) == pytest.approx(np.array([0.25, 0.25, 0.75]))

    with pytest.raises(ArgumentError):
        build_flow_polytope(GraphSpec(2, [(0, 1)], source=0, sink=1))


def test_diamond_paths():
    body, coord_map = build_flow_polytope(diamond_graph())
    assert coord_map.get_paths() == [(0, 2, 4), (0, 3), (1, 4)]
    P = coord_map.get_path_matrix()
    assert P.shape == (5, 3)
    assert np.array_equal(P[:, 1], np.array([1.0, 0.0, 0.0, 1.0, 0.0]))
    assert np.array_equal(P.sum(axis=0), np.array([3.0, 2.0, 2.0]))
    assert body.get_dimension() == 2
    assert body.get_constraint_count() == 3


def test_delays_to_loss_example():
    graph = _parallel_edges()
    _, coord_map = build_flow_polytope(graph)
    linear, offset = delays_to_loss(graph, [0.3, 0.7], coord_map)
    assert linear == pytest.approx(np.array([-0.4]))
    assert offset == pytest.approx(0.7)
    # w on path 0 and 1 - w on path 1
    assert float(linear @ [0.25]) + offset == pytest.approx(0.25 * 0.3 + 0.75 * 0.7)


def test_delays_are_validated():
    graph = _parallel_edges()
    _, coord_map = build_flow_polytope(graph)
    with pytest.raises(ContractViolationError):
        delays_to_loss(graph, [1.2, 0.1], coord_map)
    with pytest.raises(ArgumentError):
        delays_to_loss(graph, [-0.1, 0.1], coord_map)
    with pytest.raises(ArgumentError):
        delays_to_loss(graph, [0.1, 0.1, 0.1], coord_map)


def test_decompose_flow_examples():
    graph = _parallel_edges()
    assert decompose_flow(graph, [0.25, 0.75]) == [((0,), 0.25), ((1,), 0.75)]
    assert decompose_flow(diamond_graph(), [1.0, 0.0, 0.0, 1.0, 0.0]) == [((0, 3), 1.0)]
    with pytest.raises(ArgumentError):
        decompose_flow(graph, [0.5, 0.4])
    with pytest.raises(ArgumentError):
        decompose_flow(graph, [1.5, -0.5])


def test_diamond_flows_recompose(rng):
    graph = diamond_graph()
    _, coord_map = build_flow_polytope(graph)
    for _ in range(50):
        weights = rng.dirichlet(np.ones(3))
        flow = coord_map.to_edge(weights[:-1])
        recomposed = np.zeros(graph.get_edge_count())
        for path, weight in decompose_flow(graph, flow):
            recomposed[list(path)] += weight
        assert recomposed == pytest.approx(flow, abs=1e-12)
        assert coord_map.to_reduced(flow) == pytest.approx(weights[:-1], abs=1e-12)


def test_regret_is_the_same_in_edge_space():
    env, barrier = build_diamond_environment(600, seed=4)
    trace = run_scrible(env, RunConfig(horizon=600, seed=1, allow_condition_violation=True), barrier)
    coord_map = env.get_coord_map()
    played = sum(env.edge_loss(t, coord_map.to_edge(y)) for t, y in enumerate(trace.get_predictions()))
    path_totals = sum(coord_map.path_delays(env.delays[t % env.delays.shape[0]]) for t in range(600))
    assert played - float(np.min(path_totals)) == pytest.approx(trace.regret, abs=1e-8)


def test_graph_validation():
    with pytest.raises(ArgumentError):
        GraphSpec(3, [(0, 1), (1, 0), (1, 2)], source=0, sink=2)
    with pytest.raises(ArgumentError):
        GraphSpec(4, [(0, 1), (1, 3), (2, 3)], source=0, sink=3)
    with pytest.raises(ArgumentError):
        GraphSpec(2, [(0, 1)], source=1, sink=1)
    with pytest.raises(ArgumentError):
        GraphSpec(2, [(0, 5)], source=0, sink=1)
    with pytest.raises(ArgumentError):
        GraphSpec.from_json({"nodes": 2, "edges": [[0, 1]], "source": 0})


def test_shortest_path_environment_from_json():
    data = {"nodes": 2, "edges": [[0, 1], [0, 1]], "source": 0, "sink": 1, "delays": [[0.3, 0.7], [0.5, 0.1]]}
    env = ShortestPathEnvironment.from_json(data)
    assert env.get_dimension() == 1
    assert env.get_graph().get_edges() == [(0, 1), (0, 1)]
    assert (env.get_graph().get_source(), env.get_graph().get_sink()) == (0, 1)
    assert env.get_horizon() is None
    assert env.observe(0, [0.25]) == pytest.approx(0.25 * 0.3 + 0.75 * 0.7)
    # rows repeat cyclically
    assert np.array_equal(env.loss_vector(2), env.loss_vector(0))
    assert env.loss_offset(3) == pytest.approx(0.1)
    with pytest.raises(ArgumentError):
        ShortestPathEnvironment.from_json({k: v for k, v in data.items() if k != "delays"})


def test_named_environments():
    env, barrier = build_environment(EnvironmentSpec(named="box_rotating"), 10)
    assert (env.get_dimension(), barrier.get_theta()) == (2, 4)
    env, barrier = build_environment(EnvironmentSpec(named="diamond"), 10)
    assert (env.get_dimension(), barrier.get_theta()) == (2, 3)
    assert 0.0 <= env.observe(0, [1 / 3, 1 / 3]) <= 1.0


def test_environment_from_a_body_spec():
    spec = EnvironmentSpec(box={"lower": [0.0], "upper": [2.0]}, losses={"kind": "constant", "vectors": [[0.5]]})
    env, barrier = build_environment(spec, 7)
    assert env.get_horizon() == 7
    assert env.get_loss_bound() == pytest.approx(1.0)
    assert barrier.get_domain().get_interior_point() == pytest.approx(np.array([1.0]))


def test_graph_file_errors_are_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        build_environment(EnvironmentSpec(graph_file=str(tmp_path / "missing.json")), 5)
    path = tmp_path / "graph.json"
    path.write_text(json.dumps({"nodes": 2, "edges": [[0, 1], [0, 1]], "source": 0, "sink": 1}))
    with pytest.raises(ConfigError):
        build_environment(EnvironmentSpec(graph_file=str(path)), 5)

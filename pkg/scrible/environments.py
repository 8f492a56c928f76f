import itertools
import networkx as nx
import numpy as np
from scrible.errors import ArgumentError, ContractViolationError, SizeError
from scrible.geometry import make_simplex
from scrible.globals import MAX_PATHS
from scrible.logging_utils import get_logger
from scrible.objects.graph_spec import GraphSpec
from scrible.objects.loss_sequence import LossSequence
from scrible.objects.polytope import ConvexPolytope

logger = get_logger(__name__)

CONSTANT = "constant"
ROTATING = "rotating"
RANDOM_SIGNED = "random_signed"
ALTERNATING = "alternating"
SEQUENCE_KINDS = (CONSTANT, ROTATING, RANDOM_SIGNED, ALTERNATING)

_FLOW_TOL = 1e-9
_RESIDUAL_TOL = 1e-12


class Environment:
    def __init__(self, dimension: int, loss_bound: float, horizon: int = None):
        """
        An adversary that fixes its losses ahead of play. Rounds are indexed from 0.

        Learners only ever call `observe`, which returns the scalar loss of the played point.
        `loss_vector` and `loss_offset` are the referee's view, used for regret accounting after
        play has finished.

        Args:
            dimension (int): Dimension of the decision set.
            loss_bound (float): The declared bound L on the absolute loss of any point of the body.
            horizon (int): Number of rounds available (None for unlimited).
        """
        self.dimension = int(dimension)
        self.loss_bound = float(loss_bound)
        self.horizon = horizon

    def _vector(self, t: int) -> np.ndarray:
        raise NotImplementedError

    def _offset(self, t: int) -> float:
        return 0.0

    def _check_round(self, t: int):
        if t < 0 or (self.horizon is not None and t >= self.horizon):
            raise ArgumentError(f"round {t} is outside the environment's horizon {self.horizon}")

    def observe(self, t: int, y) -> float:
        """The bandit feedback f_t^T y (+ o_t) for the point y played in round t."""
        self._check_round(t)
        return float(self._vector(t) @ np.asarray(y, dtype=float)) + self._offset(t)

    def loss_vector(self, t: int) -> np.ndarray:
        self._check_round(t)
        return self._vector(t)

    def loss_offset(self, t: int) -> float:
        self._check_round(t)
        return self._offset(t)

    def get_dimension(self) -> int: return self.dimension
    def get_loss_bound(self) -> float: return self.loss_bound
    def get_horizon(self) -> int: return self.horizon


class SequenceEnvironment(Environment):
    def __init__(self, sequence: LossSequence):
        super().__init__(sequence.get_dimension(), sequence.get_declared_bound(), horizon=len(sequence))
        self.sequence = sequence

    def _vector(self, t: int) -> np.ndarray:
        return self.sequence.get_vector(t)

    def _offset(self, t: int) -> float:
        return self.sequence.get_offset(t)

    def get_sequence(self) -> LossSequence: return self.sequence


class FlowCoordinateMap:
    def __init__(self, graph: GraphSpec, paths: list[tuple[int, ...]]):
        """
        Converts between reduced path-mixture coordinates and edge-space flows.

        A reduced point w in R^{p-1} puts weight w_i on path i for i < p and 1 - sum(w) on the last
        path; its edge vector is the corresponding mixture of path indicator vectors.

        Args:
            graph (GraphSpec): The graph the paths belong to.
            paths (list[tuple[int, ...]]): The source-sink paths as edge-index tuples, in order.
        """
        self.graph = graph
        self.paths = [tuple(p) for p in paths]
        self.path_index = {p: i for i, p in enumerate(self.paths)}
        P = np.zeros((graph.get_edge_count(), len(self.paths)))
        for j, path in enumerate(self.paths):
            P[list(path), j] = 1.0
        P.setflags(write=False)
        self.path_matrix = P

    def path_weights(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        if w.shape != (self.get_reduced_dimension(),):
            raise ArgumentError(f"reduced point must have shape ({self.get_reduced_dimension()},), got {w.shape}")
        return np.append(w, 1.0 - w.sum())

    def to_edge(self, w) -> np.ndarray:
        return self.path_matrix @ self.path_weights(w)

    def to_reduced(self, edge_flow) -> np.ndarray:
        """Reduced coordinates of a unit flow, read off its greedy path decomposition."""
        weights = np.zeros(self.get_path_count())
        for path, weight in decompose_flow(self.graph, edge_flow):
            if path not in self.path_index:
                raise ArgumentError(f"decomposition produced unknown path {path}")
            weights[self.path_index[path]] += weight
        return weights[:-1]

    def path_delays(self, edge_delays) -> np.ndarray:
        return self.path_matrix.T @ np.asarray(edge_delays, dtype=float)

    def get_paths(self) -> list[tuple[int, ...]]: return list(self.paths)
    def get_path_count(self) -> int: return len(self.paths)
    def get_reduced_dimension(self) -> int: return len(self.paths) - 1
    def get_path_matrix(self) -> np.ndarray: return self.path_matrix


def make_oblivious_sequence(
        kind: str,
        body: ConvexPolytope,
        T: int,
        seed: int = 0,
        vectors=None
) -> LossSequence:
    """
    Generates a loss sequence fixed ahead of play.

    Args:
        kind (str): 'constant' repeats vectors[0]; 'rotating' cycles through `vectors` (the standard
            basis by default); 'random_signed' draws i.i.d. uniform vectors in [-1, 1]^n and rescales
            the sequence so its largest vertex loss is exactly 1; 'alternating' plays 0.5 * v and then
            -v, +v, -v, ... (the sequence on which follow-the-leader fails).
        body (ConvexPolytope): The decision set, used for the vertex bound.
        T (int): The number of rounds.
        seed (int): Seed for 'random_signed'.
        vectors: The vector(s) used by 'constant', 'rotating' and 'alternating'.

    Returns:
        LossSequence: The sequence, with its declared bound equal to the largest vertex loss
            (1 when every loss is zero).
    """
    n = body.get_dimension()
    if kind not in SEQUENCE_KINDS:
        raise ArgumentError(f"unknown sequence kind '{kind}', expected one of {SEQUENCE_KINDS}")
    if T < 0:
        raise ArgumentError(f"horizon must be nonnegative, got {T}")
    base = np.eye(n) if vectors is None else np.atleast_2d(np.array(vectors, dtype=float))
    if base.shape[1] != n:
        raise ArgumentError(f"sequence vectors must have dimension {n}, got {base.shape[1]}")

    if kind == CONSTANT:
        losses = np.tile(base[0], (T, 1))
    elif kind == ROTATING:
        losses = base[np.arange(T) % base.shape[0]]
    elif kind == ALTERNATING:
        signs = np.where(np.arange(T) % 2 == 1, -1.0, 1.0)
        if T:
            signs[0] = 0.5
        losses = signs[:, None] * base[0]
    else:
        rng = np.random.default_rng(seed)
        losses = rng.uniform(-1.0, 1.0, size=(T, n))
        if T:
            losses /= np.max(np.abs(losses @ body.get_vertices().T))
    losses = losses.reshape(T, n)

    bound = LossSequence(losses, 1.0).vertex_bound(body)
    return LossSequence(losses, bound if bound > 0 else 1.0, body=body)


def build_flow_polytope(graph: GraphSpec) -> tuple[ConvexPolytope, FlowCoordinateMap]:
    """
    Builds the flow polytope of `graph` in reduced path-mixture coordinates.

    The source-sink paths are enumerated and ordered by their edge-index sequences; the body is
    the simplex {w >= 0, sum(w) <= 1} in p - 1 coordinates.

    Args:
        graph (GraphSpec): The shortest-path graph.

    Returns:
        tuple: The reduced body and the coordinate map.

    Raises:
        SizeError: If the graph has more than 10^4 source-sink paths.
        ArgumentError: If there is a single path (the body has no interior).
    """
    G = graph.get_graph_copy()
    enumerated = list(itertools.islice(
        nx.all_simple_edge_paths(G, graph.get_source(), graph.get_sink()), MAX_PATHS + 1
    ))
    if len(enumerated) > MAX_PATHS:
        raise SizeError(f"graph has more than {MAX_PATHS} source-sink paths")
    paths = sorted(tuple(key for _, _, key in path) for path in enumerated)
    if len(paths) < 2:
        raise ArgumentError(f"graph has {len(paths)} source-sink path(s); a decision needs at least two")
    logger.info("flow polytope over %d paths (reduced dimension %d)", len(paths), len(paths) - 1)
    return make_simplex(len(paths) - 1), FlowCoordinateMap(graph, paths)


def delays_to_loss(graph: GraphSpec, edge_delays, coord_map: FlowCoordinateMap) -> tuple[np.ndarray, float]:
    """
    Maps edge delays to the affine loss of a reduced point: loss(w) = linear^T w + offset, the
    expected total delay of the path mixture w.

    Raises:
        ArgumentError: If the delays have the wrong length or a negative entry.
        ContractViolationError: If some path takes longer than 1 time unit.
    """
    delays = np.asarray(edge_delays, dtype=float)
    if delays.shape != (graph.get_edge_count(),):
        raise ArgumentError(f"expected {graph.get_edge_count()} edge delays, got shape {delays.shape}")
    if np.any(delays < 0) or not np.all(np.isfinite(delays)):
        raise ArgumentError("edge delays must be finite and nonnegative")
    path_delays = coord_map.path_delays(delays)
    slowest = int(np.argmax(path_delays))
    if path_delays[slowest] > 1.0 + 1e-12:
        raise ContractViolationError(
            f"path {coord_map.get_paths()[slowest]} takes {path_delays[slowest]:.6g} > 1 time unit"
        )
    offset = float(path_delays[-1])
    return path_delays[:-1] - offset, offset


def _check_unit_flow(graph: GraphSpec, flow: np.ndarray):
    if flow.shape != (graph.get_edge_count(),):
        raise ArgumentError(f"expected an edge flow of length {graph.get_edge_count()}, got shape {flow.shape}")
    if np.any(flow < -_FLOW_TOL):
        raise ArgumentError("edge flow has negative entries")
    balance = np.zeros(graph.node_count)
    for index, (u, v) in enumerate(graph.get_edges()):
        balance[u] += flow[index]
        balance[v] -= flow[index]
    expected = np.zeros(graph.node_count)
    expected[graph.get_source()] = 1.0
    expected[graph.get_sink()] = -1.0
    worst = float(np.max(np.abs(balance - expected)))
    if worst > _FLOW_TOL:
        raise ArgumentError(f"edge flow is not a unit source-sink flow (conservation error {worst:.3e})")


def decompose_flow(graph: GraphSpec, edge_flow) -> list[tuple[tuple[int, ...], float]]:
    """
    Greedy path peeling of a unit source-sink flow.

    Repeatedly takes the edge with the smallest positive residual flow, completes it to a
    source-sink path through edges with positive residual (lowest edge index first), and removes
    that path with weight equal to the edge's residual.

    Args:
        graph (GraphSpec): The graph.
        edge_flow: A unit source-sink flow in edge space.

    Returns:
        list[tuple[tuple[int, ...], float]]: (path as edge indices in traversal order, weight) pairs.

    Raises:
        ArgumentError: If the flow is negative or violates conservation.
    """
    residual = np.array(edge_flow, dtype=float)
    _check_unit_flow(graph, residual)
    residual[residual < _RESIDUAL_TOL] = 0.0
    edges = graph.get_edges()
    outgoing = {node: [] for node in range(graph.node_count)}
    incoming = {node: [] for node in range(graph.node_count)}
    for index, (u, v) in enumerate(edges):
        outgoing[u].append(index)
        incoming[v].append(index)

    def next_edge(candidates):
        for index in candidates:
            if residual[index] > 0.0:
                return index
        raise ArgumentError("flow decomposition got stuck; the flow is not conserved")

    decomposition = []
    while np.any(residual > 0.0):
        positive = np.flatnonzero(residual > 0.0)
        pivot = int(positive[np.argmin(residual[positive])])
        weight = float(residual[pivot])
        backward = []
        node = edges[pivot][0]
        while node != graph.get_source():
            index = next_edge(incoming[node])
            backward.append(index)
            node = edges[index][0]
        forward = [pivot]
        node = edges[pivot][1]
        while node != graph.get_sink():
            index = next_edge(outgoing[node])
            forward.append(index)
            node = edges[index][1]
        path = tuple(reversed(backward)) + tuple(forward)
        residual[list(path)] -= weight
        residual[residual < _RESIDUAL_TOL] = 0.0
        decomposition.append((path, weight))
    return decomposition


class ShortestPathEnvironment(Environment):
    def __init__(self, graph: GraphSpec, delays, coord_map: FlowCoordinateMap = None):
        """
        Online shortest path: each round the adversary sets edge delays and the learner, playing a
        path mixture, observes only its expected total delay. Delay rows repeat cyclically when
        the run is longer than the number of rows.

        Args:
            graph (GraphSpec): The graph.
            delays: An R x |E| array of per-round edge delays.
            coord_map (FlowCoordinateMap): The map of the graph's flow polytope (built when None).
        """
        if coord_map is None:
            _, coord_map = build_flow_polytope(graph)
        delays = np.atleast_2d(np.array(delays, dtype=float))
        if delays.shape[0] == 0:
            raise ArgumentError("shortest-path environment needs at least one delay row")
        forms = [delays_to_loss(graph, row, coord_map) for row in delays]
        super().__init__(coord_map.get_reduced_dimension(), 1.0)
        self.graph = graph
        self.coord_map = coord_map
        self.delays = delays
        self.linear = np.array([linear for linear, _ in forms])
        self.offsets = np.array([offset for _, offset in forms])

    @classmethod
    def from_json(cls, data: dict) -> 'ShortestPathEnvironment':
        if "delays" not in data:
            raise ArgumentError("graph JSON is missing field 'delays'")
        return cls(GraphSpec.from_json(data), data["delays"])

    def _vector(self, t: int) -> np.ndarray:
        return self.linear[t % self.linear.shape[0]]

    def _offset(self, t: int) -> float:
        return float(self.offsets[t % self.offsets.shape[0]])

    def edge_loss(self, t: int, edge_vector) -> float:
        """Loss of an edge-space flow in round t."""
        return float(self.delays[t % self.delays.shape[0]] @ np.asarray(edge_vector, dtype=float))

    def get_graph(self) -> GraphSpec: return self.graph
    def get_coord_map(self) -> FlowCoordinateMap: return self.coord_map

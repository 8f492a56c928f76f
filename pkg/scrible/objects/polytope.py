import itertools
import math
import cvxpy as cp
import numpy as np
from scrible.errors import ArgumentError, SizeError
from scrible.globals import INTERIOR_TOL, MAX_VERTEX_SUBSETS
from scrible.logging_utils import get_logger

logger = get_logger(__name__)

BOX = "box"
SIMPLEX = "simplex"


class ConvexPolytope:
    def __init__(
        self,
        constraint_matrix,
        constraint_bounds,
        interior_point=None,
        shape: str = None,
        shape_params: dict = None,
        boundedness_seed: int = 0
    ):
        """
        The decision set K = {x : Ax <= b} as a bounded polytope with nonempty interior.

        Args:
            constraint_matrix: An m x n matrix whose rows are the constraint normals a_i.
            constraint_bounds: The m right-hand sides b_i.
            interior_point: A known strictly interior point. When None, the Chebyshev center is
                computed with a linear program.
            shape (str): Optional tag ('box' or 'simplex') used by projection-based baselines.
            shape_params (dict): Parameters of the tagged shape (box bounds, simplex scale).
            boundedness_seed (int): Seed for the random recession-direction checks.

        Raises:
            ArgumentError: If the inputs are malformed, the set is unbounded along a sampled
                direction, or the interior is empty.
        """
        A = np.array(constraint_matrix, dtype=float)
        b = np.array(constraint_bounds, dtype=float)
        if A.ndim != 2 or A.shape[1] == 0:
            raise ArgumentError(f"constraint matrix must be m x n with n >= 1, got shape {A.shape}")
        if b.ndim != 1 or b.shape[0] != A.shape[0]:
            raise ArgumentError(f"constraint bounds must have length {A.shape[0]}, got shape {b.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ArgumentError("constraint data must be finite")
        if np.any(np.linalg.norm(A, axis=1) == 0.0):
            raise ArgumentError("constraint rows must be nonzero")

        self.A = A
        self.b = b
        self.A.setflags(write=False)
        self.b.setflags(write=False)
        self.shape = shape
        self.shape_params = dict(shape_params) if shape_params else {}
        self._vertices = None

        self._check_bounded(boundedness_seed)
        if interior_point is None:
            interior_point = self._chebyshev_center()
        interior_point = np.array(interior_point, dtype=float)
        if not self.is_interior(interior_point):
            raise ArgumentError(f"supplied point {interior_point} is not strictly interior")
        self.interior_point = interior_point
        self.interior_point.setflags(write=False)

    def _check_bounded(self, seed: int):
        n = self.get_dimension()
        rng = np.random.default_rng(seed)
        eye = np.eye(n)
        random_dirs = rng.standard_normal((2 * n, n))
        for d in itertools.chain(eye, -eye, random_dirs):
            if np.max(self.A @ d) <= 0.0:
                raise ArgumentError(f"polytope is unbounded along direction {d}")

    def _chebyshev_center(self) -> np.ndarray:
        n = self.get_dimension()
        norms = np.linalg.norm(self.A, axis=1)
        x = cp.Variable(n)
        r = cp.Variable()
        problem = cp.Problem(cp.Maximize(r), [self.A @ x + r * norms <= self.b])
        problem.solve()
        if problem.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE) or r.value is None:
            raise ArgumentError(f"phase-1 linear program failed with status {problem.status}")
        if r.value <= INTERIOR_TOL * (1.0 + np.max(np.abs(self.b))):
            raise ArgumentError("polytope has an empty interior")
        logger.debug("Chebyshev center %s with radius %.3e", x.value, r.value)
        return np.asarray(x.value, dtype=float)

    @classmethod
    def from_json(cls, data: dict, **kwargs) -> 'ConvexPolytope':
        if "A" not in data or "b" not in data:
            raise ArgumentError("polytope JSON must contain 'A' and 'b'")
        return cls(data["A"], data["b"], interior_point=data.get("interior_point"), **kwargs)

    def to_json(self) -> dict:
        return {"A": self.A.tolist(), "b": self.b.tolist()}

    def slacks(self, x) -> np.ndarray:
        return self.b - self.A @ np.asarray(x, dtype=float)

    def is_interior(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.get_dimension(),) or not np.all(np.isfinite(x)):
            return False
        return bool(np.all(self.slacks(x) > INTERIOR_TOL * (1.0 + np.abs(self.b))))

    def in_closed(self, x, tol: float) -> bool:
        return bool(np.all(self.slacks(x) >= -tol))

    def max_step(self, x, direction) -> float:
        """Largest t with x + t * direction in the closed body (inf if the ray never exits)."""
        rates = self.A @ np.asarray(direction, dtype=float)
        slacks = self.slacks(x)
        positive = rates > 0
        if not np.any(positive):
            return math.inf
        return float(np.min(slacks[positive] / rates[positive]))

    def get_vertices(self) -> np.ndarray:
        """
        Enumerates the vertices of the polytope as feasible basic solutions, sorted lexicographically.

        Returns:
            np.ndarray: A k x n array of distinct vertices.

        Raises:
            SizeError: If m choose n exceeds the desk-scale guard.
        """
        if self._vertices is not None:
            return self._vertices
        m, n = self.A.shape
        if math.comb(m, n) > MAX_VERTEX_SUBSETS:
            raise SizeError(f"vertex enumeration over C({m}, {n}) constraint subsets exceeds {MAX_VERTEX_SUBSETS}")
        feasibility_tol = 1e-9 * (1.0 + np.abs(self.b))
        found = {}
        for subset in itertools.combinations(range(m), n):
            rows = list(subset)
            sub_A = self.A[rows]
            if np.linalg.matrix_rank(sub_A) < n:
                continue
            v = np.linalg.solve(sub_A, self.b[rows])
            if np.all(self.A @ v <= self.b + feasibility_tol):
                key = tuple(np.round(v, 9) + 0.0)
                found.setdefault(key, v)
        if not found:
            raise ArgumentError("no vertices found; the polytope is degenerate")
        vertices = np.array([found[k] for k in sorted(found)])
        vertices.setflags(write=False)
        self._vertices = vertices
        return vertices

    def get_dimension(self) -> int: return self.A.shape[1]
    def get_constraint_count(self) -> int: return self.A.shape[0]
    def get_interior_point(self) -> np.ndarray: return self.interior_point
    def get_shape(self) -> str: return self.shape
    def get_shape_params(self) -> dict: return self.shape_params

    def __repr__(self):
        return f"ConvexPolytope(n={self.get_dimension()}, m={self.get_constraint_count()}, shape={self.shape})"

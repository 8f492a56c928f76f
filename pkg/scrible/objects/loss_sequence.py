import numpy as np
from scrible.errors import ArgumentError, ContractViolationError
from scrible.objects.polytope import ConvexPolytope

_BOUND_TOL = 1e-12


class LossSequence:
    def __init__(self, vectors, declared_bound: float, body: ConvexPolytope = None, offsets=None):
        """
        A fixed (oblivious) sequence of linear losses f_t, optionally with constant offsets o_t so
        that the loss of x in round t is f_t^T x + o_t.

        Args:
            vectors: A T x n array of loss vectors.
            declared_bound (float): The bound L on |f_t^T x| (and on |f_t^T x + o_t|) over the body.
            body (ConvexPolytope): When given, the bound is checked at every vertex.
            offsets: Per-round constant offsets (zeros when None).

        Raises:
            ContractViolationError: If a vertex violates the declared bound.
        """
        vectors = np.array(vectors, dtype=float)
        if vectors.ndim == 1 and vectors.size == 0:
            vectors = vectors.reshape(0, body.get_dimension() if body is not None else 0)
        if vectors.ndim != 2:
            raise ArgumentError(f"loss vectors must form a T x n array, got shape {vectors.shape}")
        offsets = np.zeros(vectors.shape[0]) if offsets is None else np.array(offsets, dtype=float)
        if offsets.shape != (vectors.shape[0],):
            raise ArgumentError("offsets must have one entry per round")
        if not declared_bound > 0:
            raise ArgumentError(f"declared bound must be positive, got {declared_bound}")
        self.vectors = vectors
        self.offsets = offsets
        self.declared_bound = float(declared_bound)
        self.vectors.setflags(write=False)
        self.offsets.setflags(write=False)
        if body is not None:
            self.check_bound(body)

    def vertex_bound(self, body: ConvexPolytope) -> float:
        """max over rounds and vertices of max(|f_t^T v|, |f_t^T v + o_t|)."""
        if len(self) == 0:
            return 0.0
        values = self.vectors @ body.get_vertices().T
        return float(max(np.max(np.abs(values)), np.max(np.abs(values + self.offsets[:, None]))))

    def check_bound(self, body: ConvexPolytope):
        if body.get_dimension() != self.get_dimension():
            raise ArgumentError(f"losses have dimension {self.get_dimension()}, body has {body.get_dimension()}")
        worst = self.vertex_bound(body)
        if worst > self.declared_bound * (1.0 + _BOUND_TOL) + _BOUND_TOL:
            raise ContractViolationError(f"loss sequence reaches {worst:.6g} at a vertex, above the bound {self.declared_bound:g}")

    def get_vector(self, t: int) -> np.ndarray: return self.vectors[t]
    def get_offset(self, t: int) -> float: return float(self.offsets[t])
    def get_vectors(self) -> np.ndarray: return self.vectors
    def get_offsets(self) -> np.ndarray: return self.offsets
    def get_declared_bound(self) -> float: return self.declared_bound
    def get_dimension(self) -> int: return self.vectors.shape[1]
    def total(self) -> np.ndarray: return self.vectors.sum(axis=0)

    def __len__(self):
        return self.vectors.shape[0]

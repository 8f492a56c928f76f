from typing import Callable
import numpy as np
from scrible.errors import ArgumentError, DomainError
from scrible.objects.polytope import ConvexPolytope

Evaluation = tuple[float, np.ndarray, np.ndarray]


class BarrierOracle:
    def __init__(
        self,
        theta: float,
        domain: ConvexPolytope,
        evaluator: Callable[[np.ndarray], Evaluation],
        name: str = "barrier"
    ):
        """
        A theta-self-concordant barrier R on the interior of `domain`.

        Args:
            theta (float): The barrier parameter.
            domain (ConvexPolytope): The body whose interior R is defined on.
            evaluator (Callable): Maps a strictly interior point to (value, gradient, Hessian).
                It is only called after the interior check has passed.
            name (str): A label used in logs and reports.
        """
        if not theta > 0:
            raise ArgumentError(f"barrier parameter must be positive, got {theta}")
        self.theta = float(theta)
        self.domain = domain
        self._evaluator = evaluator
        self.name = name

    def check_interior(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if not self.domain.is_interior(x):
            raise DomainError(f"{self.name} evaluated at a non-interior point {x}")
        return x

    def evaluate(self, x) -> Evaluation:
        return self._evaluator(self.check_interior(x))

    def value(self, x) -> float: return self.evaluate(x)[0]
    def gradient(self, x) -> np.ndarray: return self.evaluate(x)[1]
    def hessian(self, x) -> np.ndarray: return self.evaluate(x)[2]

    def get_theta(self) -> float: return self.theta
    def get_domain(self) -> ConvexPolytope: return self.domain
    def get_dimension(self) -> int: return self.domain.get_dimension()

    def __repr__(self):
        return f"BarrierOracle({self.name}, theta={self.theta:g}, {self.domain!r})"

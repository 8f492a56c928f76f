import numpy as np
from scrible.errors import ArgumentError
from scrible.objects.barrier import BarrierOracle


class Objective:
    def __init__(self, linear_term, barrier: BarrierOracle):
        """
        F(x) = g^T x + R(x), the barrier-regularized linear objective minimized by FTRL.

        Args:
            linear_term: The vector g (eta times the accumulated loss estimates).
            barrier (BarrierOracle): The regularizer R.
        """
        g = np.array(linear_term, dtype=float)
        if g.shape != (barrier.get_dimension(),):
            raise ArgumentError(f"linear term has shape {g.shape}, expected ({barrier.get_dimension()},)")
        g.setflags(write=False)
        self.linear_term = g
        self.barrier = barrier

    def evaluate(self, x) -> tuple[float, np.ndarray, np.ndarray]:
        value, grad, hess = self.barrier.evaluate(x)
        return float(self.linear_term @ x) + value, grad + self.linear_term, hess

    def value(self, x) -> float: return self.evaluate(x)[0]

    def get_linear_term(self) -> np.ndarray: return self.linear_term
    def get_barrier(self) -> BarrierOracle: return self.barrier

from dataclasses import dataclass
import numpy as np


@dataclass(frozen=True)
class SampleOutcome:
    """
    One draw of the Dikin-boundary sampler: the eigen-direction `index` (1-based), the `sign`,
    and the played `prediction` = center + sign * shrink * offset_eigenvalue^{-1/2} * direction.
    """
    index: int
    sign: int
    prediction: np.ndarray
    offset_eigenvalue: float
    center: np.ndarray
    direction: np.ndarray
    shrink: float = 1.0

    def offset(self) -> np.ndarray:
        return self.sign * self.shrink * self.offset_eigenvalue ** -0.5 * self.direction

    def reconstruct_prediction(self) -> np.ndarray:
        return self.center + self.offset()

    def reconstruct_center(self) -> np.ndarray:
        return self.prediction - self.offset()

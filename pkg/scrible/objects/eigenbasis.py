from dataclasses import dataclass
import numpy as np


@dataclass(frozen=True)
class EigenBasis:
    """Eigenvalues in descending order and the matching orthonormal eigenvectors (columns)."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def get_dimension(self) -> int: return self.eigenvalues.shape[0]
    def get_eigenvalue(self, i: int) -> float: return float(self.eigenvalues[i])
    def get_eigenvector(self, i: int) -> np.ndarray: return self.eigenvectors[:, i]

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.T

import numpy as np
from scrible.objects.round_record import RoundRecord
from scrible.objects.run_config import RunConfig


class RunTrace:
    def __init__(
        self,
        config: RunConfig,
        rounds: list[RoundRecord],
        comparator: np.ndarray = None,
        comparator_value: float = 0.0,
        theta: float = None,
        dimension: int = None,
        eta: float = None
    ):
        """
        The record of a run: the per-round records, the comparator u and the regret against it.

        Args:
            config (RunConfig): The configuration the run used.
            rounds (list[RoundRecord]): Per-round records, in order.
            comparator (np.ndarray): The comparator point u.
            comparator_value (float): The total loss of u over the played rounds.
            theta (float): Barrier parameter of the regularizer (None for projection baselines).
            dimension (int): Dimension of the decision set.
            eta (float): The learning rate actually used.
        """
        self.config = config
        self.rounds = list(rounds)
        self.comparator = comparator
        self.comparator_value = float(comparator_value)
        self.theta = theta
        self.dimension = dimension
        self.eta = eta
        self.regret = self.total_loss() - self.comparator_value

    def total_loss(self) -> float:
        return float(sum(r.observed_loss for r in self.rounds))

    def recompute_regret(self) -> float:
        """Regret recomputed from the stored per-round losses and comparator losses."""
        return self.total_loss() - float(sum(r.comparator_loss for r in self.rounds))

    def cumulative_regret(self) -> np.ndarray:
        per_round = np.array([r.observed_loss - r.comparator_loss for r in self.rounds], dtype=float)
        return np.cumsum(per_round)

    def get_centers(self) -> np.ndarray: return np.array([r.center for r in self.rounds])
    def get_predictions(self) -> np.ndarray: return np.array([r.prediction for r in self.rounds])
    def get_estimates(self) -> np.ndarray: return np.array([r.estimate for r in self.rounds])
    def get_observed_losses(self) -> np.ndarray: return np.array([r.observed_loss for r in self.rounds])
    def get_config(self) -> RunConfig: return self.config
    def get_rounds(self) -> list[RoundRecord]: return self.rounds
    def get_comparator(self) -> np.ndarray: return self.comparator
    def get_regret(self) -> float: return self.regret

    def __len__(self):
        return len(self.rounds)

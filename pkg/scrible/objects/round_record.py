from dataclasses import dataclass
from typing import Optional
import numpy as np
from scrible.objects.sample_outcome import SampleOutcome


@dataclass(frozen=True)
class RoundRecord:
    """
    One round of play. `prediction` is the point played (y_t, or x_t itself for full-information
    runs) and `estimate` the loss vector the learner consumed. `comparator_loss` is the loss of the
    comparator in this round, filled in by regret accounting after play.
    """
    round: int
    center: np.ndarray
    prediction: np.ndarray
    observed_loss: float
    estimate: np.ndarray
    estimate_dual_norm: float
    cumulative_true_loss: float
    outcome: Optional[SampleOutcome] = None
    comparator_loss: float = float("nan")

import numpy as np
from scrible.errors import ArgumentError, GeometryError
from scrible.globals import CLOSED_TOL
from scrible.logging_utils import get_logger
from scrible.objects.eigenbasis import EigenBasis
from scrible.objects.polytope import ConvexPolytope
from scrible.objects.sample_outcome import SampleOutcome

logger = get_logger(__name__)

_SEED_MASK = (1 << 64) - 1


def round_stream(seed: int, round_index: int) -> np.random.Generator:
    """
    The random stream of one round: a counter-based Philox generator keyed by (seed, round_index),
    so a round's draws never depend on how much randomness other rounds consumed.
    """
    sequence = np.random.SeedSequence(entropy=int(seed) & _SEED_MASK, spawn_key=(int(round_index),))
    return np.random.Generator(np.random.Philox(sequence))


def _outcome(x: np.ndarray, basis: EigenBasis, i: int, sign: int, shrink: float) -> SampleOutcome:
    eigenvalue = basis.get_eigenvalue(i)
    direction = basis.get_eigenvector(i)
    prediction = x + sign * shrink * eigenvalue ** -0.5 * direction
    return SampleOutcome(i + 1, sign, prediction, eigenvalue, x, direction, shrink)


def _check_shrink(shrink: float):
    if not 0.0 < shrink <= 1.0:
        raise ArgumentError(f"sample shrink factor must lie in (0, 1], got {shrink}")


def sample_dikin_boundary(
        x,
        basis: EigenBasis,
        rng: np.random.Generator,
        body: ConvexPolytope = None,
        shrink: float = 1.0
) -> SampleOutcome:
    """
    Samples a point on the boundary of the Dikin ellipsoid at x along a random eigen-direction.

    Draws i uniformly from the n eigen-directions and then the sign uniformly from {-1, +1}, in
    that order, from `rng`.

    Args:
        x: The current (strictly interior) center.
        basis (EigenBasis): The eigenbasis of the barrier Hessian at x.
        rng (np.random.Generator): The round's random stream.
        body (ConvexPolytope): When given, the prediction is checked to lie in the closed body.
        shrink (float): Radius of the sampled ellipsoid, 1 for the exact Dikin boundary.

    Returns:
        SampleOutcome: The sampled direction, sign and prediction.

    Raises:
        GeometryError: If the prediction is outside the closed body.
    """
    _check_shrink(shrink)
    x = np.asarray(x, dtype=float)
    i = int(rng.integers(basis.get_dimension()))
    sign = 1 if int(rng.integers(2)) == 1 else -1
    outcome = _outcome(x, basis, i, sign, shrink)
    if body is not None and not body.in_closed(outcome.prediction, CLOSED_TOL):
        raise GeometryError(
            f"prediction {outcome.prediction} left the body (min slack {np.min(body.slacks(outcome.prediction)):.3e})"
        )
    return outcome


def enumerate_outcomes(x, basis: EigenBasis, shrink: float = 1.0) -> list[SampleOutcome]:
    """All 2n equiprobable sampler outcomes at x, ordered by direction then sign (+1 first)."""
    _check_shrink(shrink)
    x = np.asarray(x, dtype=float)
    return [_outcome(x, basis, i, sign, shrink) for i in range(basis.get_dimension()) for sign in (1, -1)]


def estimate_loss_vector(observed_loss: float, outcome: SampleOutcome, basis: EigenBasis, n: int) -> np.ndarray:
    """
    The one-point estimate n * observed_loss * sign * lambda_i^{1/2} * e_i (divided by the shrink
    factor), whose average over all 2n outcomes is exactly the true loss vector.
    """
    i = outcome.index - 1
    scale = n * observed_loss * outcome.sign * basis.get_eigenvalue(i) ** 0.5 / outcome.shrink
    return scale * basis.get_eigenvector(i)

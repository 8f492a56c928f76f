"""Exact and per-run verification oracles for the bandit reduction and the FTRL regret bound."""
import numpy as np
from scrible.algorithms import loss_arrays, best_in_hindsight
from scrible.errors import ArgumentError, SizeError
from scrible.estimator import enumerate_outcomes, estimate_loss_vector
from scrible.geometry import symmetric_eigendecomposition
from scrible.globals import MAX_REDUCTION_BRANCHES
from scrible.logging_utils import get_logger
from scrible.newton import analytic_center, minimize
from scrible.objects.barrier import BarrierOracle
from scrible.objects.objective import Objective
from scrible.objects.run_trace import RunTrace

logger = get_logger(__name__)


def normalized_barrier_value(barrier: BarrierOracle, x, center=None) -> float:
    """R(x) - min R, the barrier shifted so that its minimum (at the analytic center) is 0."""
    if center is None:
        center = analytic_center(barrier)
    return barrier.value(x) - barrier.value(center)


def enumerate_reduction_check(losses, barrier: BarrierOracle, eta: float, tol: float = 1e-9) -> tuple[float, float, bool]:
    """
    Exact check that bandit play has the same expected regret as FTRL on the estimated losses.

    Every (direction, sign) outcome of every round is enumerated with probability 1 / (2n) each,
    carrying the deterministic FTRL state along each branch. The left side averages the regret of
    the played points y_t on the true losses; the right side averages the regret of FTRL's own
    points x_t on that branch's estimated losses. Both use the best vertex in hindsight of the
    true losses as comparator.

    Args:
        losses: A LossSequence or a T x n array of loss vectors.
        barrier (BarrierOracle): The regularizer.
        eta (float): The FTRL learning rate.
        tol (float): Allowed |lhs - rhs|.

    Returns:
        tuple[float, float, bool]: (lhs, rhs, |lhs - rhs| <= tol).

    Raises:
        SizeError: If (2n)^T exceeds 10^5 branches.
    """
    body = barrier.get_domain()
    n = body.get_dimension()
    vectors, offsets, _ = loss_arrays(losses, n)
    T = vectors.shape[0]
    if not eta > 0:
        raise ArgumentError(f"eta must be positive, got {eta}")
    if (2 * n) ** T > MAX_REDUCTION_BRANCHES:
        raise SizeError(f"(2n)^T = {(2 * n) ** T} branches exceeds {MAX_REDUCTION_BRANCHES}")
    comparator, _ = best_in_hindsight(body, vectors.sum(axis=0))
    comparator_losses = vectors @ comparator + offsets

    def explore(t: int, x: np.ndarray, accumulated: np.ndarray, probability: float) -> tuple[float, float]:
        if t == T:
            return 0.0, 0.0
        basis = symmetric_eigendecomposition(barrier.hessian(x))
        branch_probability = probability / (2 * n)
        lhs = rhs = 0.0
        for outcome in enumerate_outcomes(x, basis):
            loss = float(vectors[t] @ outcome.prediction) + float(offsets[t])
            estimate = estimate_loss_vector(loss, outcome, basis, n)
            lhs += branch_probability * (loss - comparator_losses[t])
            rhs += branch_probability * float(estimate @ (x - comparator))
            if t + 1 < T:
                next_accumulated = accumulated + eta * estimate
                x_next = minimize(Objective(next_accumulated, barrier), x)
                tail_lhs, tail_rhs = explore(t + 1, x_next, next_accumulated, branch_probability)
                lhs += tail_lhs
                rhs += tail_rhs
        return lhs, rhs

    lhs, rhs = explore(0, analytic_center(barrier), np.zeros(n), 1.0)
    logger.info("reduction check: lhs %.12g, rhs %.12g", lhs, rhs)
    return lhs, rhs, abs(lhs - rhs) <= tol


def lemma_regret_bound_check(trace: RunTrace, barrier: BarrierOracle, comparator) -> tuple[float, float, bool]:
    """
    Both sides of the FTRL regret bound for an interior comparator u:
    sum_t f_t^T (x_t - u) <= 2 eta sum_t (||f_t||*_{x_t})^2 + (R(u) - min R) / eta,
    with f_t the loss vectors FTRL consumed and x_t its points.

    Returns:
        tuple[float, float, bool]: (regret against u, bound, regret <= bound).
    """
    if trace.eta is None:
        raise ArgumentError("trace has no learning rate; it was not produced by an FTRL run")
    u = np.asarray(comparator, dtype=float)
    if len(trace) == 0:
        return 0.0, normalized_barrier_value(barrier, u) / trace.eta, True
    estimates = trace.get_estimates()
    centers = trace.get_centers()
    lhs = float(np.sum(estimates * centers) - estimates.sum(axis=0) @ u)
    dual_norms = np.array([r.estimate_dual_norm for r in trace.get_rounds()])
    rhs = 2.0 * trace.eta * float(np.sum(dual_norms ** 2)) + normalized_barrier_value(barrier, u) / trace.eta
    return lhs, rhs, lhs <= rhs + 1e-9 * (1.0 + abs(rhs))

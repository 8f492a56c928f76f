import math
import numpy as np
from scrible.errors import ConvergenceError, DomainError
from scrible.geometry import spd_solve
from scrible.globals import NEWTON_MAX_BACKTRACKS, NEWTON_MAX_ITER, NEWTON_TOL
from scrible.logging_utils import get_logger
from scrible.objects.barrier import BarrierOracle
from scrible.objects.objective import Objective

logger = get_logger(__name__)


def _newton_direction(obj: Objective, x) -> tuple[np.ndarray, float]:
    _, gradient, hessian = obj.evaluate(x)
    direction = spd_solve(hessian, gradient)
    return direction, math.sqrt(max(float(gradient @ direction), 0.0))


def newton_decrement(obj: Objective, x) -> float:
    """
    The Newton decrement sqrt(grad F(x)^T Hess R(x)^{-1} grad F(x)), i.e. the dual local norm of
    the gradient of F at x.
    """
    return _newton_direction(obj, x)[1]


def _take_step(obj: Objective, x: np.ndarray, direction: np.ndarray, decrement: float) -> tuple[np.ndarray, int]:
    body = obj.get_barrier().get_domain()
    step = 1.0 / (1.0 + decrement)
    for backtracks in range(NEWTON_MAX_BACKTRACKS + 1):
        candidate = x - step * direction
        if body.is_interior(candidate):
            if backtracks:
                logger.warning("damped Newton step needed %d halvings to stay interior", backtracks)
            return candidate, backtracks
        step *= 0.5
    raise DomainError(f"damped Newton step from {x} could not be kept interior")


def damped_newton_step(obj: Objective, x, with_info: bool = False):
    """
    One damped Newton iteration x+ = x - (1 / (1 + lambda(x))) Hess^{-1} grad F(x).

    For a self-concordant F the step stays interior; if rounding puts it on or past the boundary
    the step is halved until it is interior again.

    Args:
        obj (Objective): The objective F.
        x: A strictly interior point.
        with_info (bool): Also return the decrement at x and the number of halvings used.

    Returns:
        np.ndarray | tuple[np.ndarray, float, int]: The next iterate (and the step info).
    """
    x = obj.get_barrier().check_interior(x)
    direction, decrement = _newton_direction(obj, x)
    x_next, backtracks = _take_step(obj, x, direction, decrement)
    if with_info:
        return x_next, decrement, backtracks
    return x_next


def minimize(obj: Objective, start, tol: float = NEWTON_TOL, max_iter: int = NEWTON_MAX_ITER) -> np.ndarray:
    """
    Minimizes F by damped Newton steps until the Newton decrement is at most `tol`.

    Args:
        obj (Objective): The objective F.
        start: A strictly interior starting point.
        tol (float): Target Newton decrement.
        max_iter (int): Maximum number of damped steps.

    Returns:
        np.ndarray: A point whose Newton decrement is at most `tol`.

    Raises:
        ConvergenceError: If `max_iter` steps do not reach the tolerance.
    """
    x = obj.get_barrier().check_interior(start).copy()
    decrement = math.inf
    for iteration in range(max_iter + 1):
        direction, decrement = _newton_direction(obj, x)
        if decrement <= tol:
            logger.debug("minimize converged in %d steps (decrement %.3e)", iteration, decrement)
            return x
        if iteration == max_iter:
            break
        x, _ = _take_step(obj, x, direction, decrement)
    raise ConvergenceError(
        f"damped Newton did not reach decrement {tol:g} in {max_iter} steps (last {decrement:.3e})",
        last_decrement=decrement
    )


def analytic_center(barrier: BarrierOracle, tol: float = NEWTON_TOL) -> np.ndarray:
    """The minimizer of the barrier, started from the domain's known interior point."""
    objective = Objective(np.zeros(barrier.get_dimension()), barrier)
    return minimize(objective, barrier.get_domain().get_interior_point(), tol=tol)

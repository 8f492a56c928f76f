import math
import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scrible.errors import ArgumentError, DomainError, NumericError
from scrible.globals import (
    BARRIER_PARAMETER_SLACK,
    JACOBI_MAX_SWEEPS,
    JACOBI_OFFDIAG_TOL,
    SELF_CONCORDANCE_SLACK,
    SYMMETRY_TOL,
)
from scrible.logging_utils import get_logger
from scrible.objects.barrier import BarrierOracle
from scrible.objects.eigenbasis import EigenBasis
from scrible.objects.polytope import BOX, SIMPLEX, ConvexPolytope

logger = get_logger(__name__)


def make_box(lower, upper) -> ConvexPolytope:
    """
    Builds the axis-aligned box {x : lower <= x <= upper}.

    Args:
        lower: Per-coordinate lower bounds (or a scalar together with a vector `upper`).
        upper: Per-coordinate upper bounds.

    Returns:
        ConvexPolytope: The box, tagged 'box', with its center as interior point.
    """
    lower, upper = np.broadcast_arrays(np.atleast_1d(np.asarray(lower, dtype=float)),
                                       np.atleast_1d(np.asarray(upper, dtype=float)))
    if np.any(upper <= lower):
        raise ArgumentError(f"box needs lower < upper, got {lower} and {upper}")
    n = lower.shape[0]
    eye = np.eye(n)
    A = np.vstack([eye, -eye])
    b = np.concatenate([upper, -lower])
    return ConvexPolytope(
        A, b,
        interior_point=(lower + upper) / 2.0,
        shape=BOX,
        shape_params={"lower": lower.copy(), "upper": upper.copy()}
    )


def make_simplex(n: int, scale: float = 1.0) -> ConvexPolytope:
    """Builds the full-dimensional simplex {x >= 0, sum(x) <= scale} in R^n, tagged 'simplex'."""
    if n < 1 or not scale > 0:
        raise ArgumentError(f"simplex needs n >= 1 and a positive scale, got n={n}, scale={scale}")
    A = np.vstack([-np.eye(n), np.ones((1, n))])
    b = np.concatenate([np.zeros(n), [scale]])
    return ConvexPolytope(
        A, b,
        interior_point=np.full(n, scale / (n + 1)),
        shape=SIMPLEX,
        shape_params={"scale": float(scale)}
    )


def make_log_barrier(body: ConvexPolytope) -> BarrierOracle:
    """
    The logarithmic barrier R(x) = -sum_i log(b_i - a_i^T x), a theta-self-concordant barrier with
    theta equal to the number of constraints.

    Args:
        body (ConvexPolytope): The body the barrier lives on.

    Returns:
        BarrierOracle: An oracle producing the closed-form value, gradient and Hessian.
    """
    A, b = body.A, body.b

    def evaluate(x: np.ndarray):
        slacks = b - A @ x
        scaled = A / slacks[:, None]
        value = -float(np.sum(np.log(slacks)))
        gradient = scaled.sum(axis=0)
        hessian = scaled.T @ scaled
        return value, gradient, hessian

    return BarrierOracle(body.get_constraint_count(), body, evaluate, name="log-barrier")


def spd_solve(H: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solves H z = rhs for a symmetric positive definite H by Cholesky factorization."""
    try:
        factor = cho_factor(H, lower=True, check_finite=True)
    except (LinAlgError, ValueError) as err:
        raise NumericError(f"matrix is not positive definite: {err}") from err
    return cho_solve(factor, rhs)


def local_norm(barrier: BarrierOracle, x, v) -> float:
    """||v||_x = sqrt(v^T Hess R(x) v)."""
    H = barrier.hessian(x)
    v = np.asarray(v, dtype=float)
    return math.sqrt(max(float(v @ H @ v), 0.0))


def dual_local_norm(barrier: BarrierOracle, x, v) -> float:
    """||v||_x^* = sqrt(v^T Hess R(x)^{-1} v), computed by a linear solve."""
    H = barrier.hessian(x)
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        return 0.0
    return math.sqrt(max(float(v @ spd_solve(H, v)), 0.0))


def dikin_membership(barrier: BarrierOracle, x, y) -> bool:
    """Whether y lies in the open unit Dikin ellipsoid at x."""
    x = barrier.check_interior(x)
    return local_norm(barrier, x, np.asarray(y, dtype=float) - x) < 1.0


def _stencil_step(body: ConvexPolytope, x: np.ndarray, h: np.ndarray, fd_step: float) -> float:
    if not fd_step > 0:
        raise ArgumentError(f"finite-difference step must be positive, got {fd_step}")
    reach = min(body.max_step(x, h), body.max_step(x, -h))
    step = fd_step * reach
    if not (body.is_interior(x + step * h) and body.is_interior(x - step * h)):
        raise DomainError(f"finite-difference stencil with step {fd_step} leaves the domain")
    return step


def verify_self_concordance(barrier: BarrierOracle, x, h, fd_step: float = 1e-4) -> bool:
    """
    Checks |D^3 R(x)[h,h,h]| <= 2 (D^2 R(x)[h,h])^{3/2} at one point and direction.

    The third derivative is a central difference of h^T Hess R h along h with step
    `fd_step` times the distance from x to the boundary along +-h. The second derivative is exact.

    Args:
        barrier (BarrierOracle): The barrier to check.
        x: A strictly interior point.
        h: The direction.
        fd_step (float): Relative finite-difference step in (0, 1).

    Returns:
        bool: True if the inequality holds up to a relative slack of 1e-3.

    Raises:
        DomainError: If x is not interior or the stencil leaves the domain.
    """
    x = barrier.check_interior(x)
    h = np.asarray(h, dtype=float)
    if not np.any(h):
        return True
    step = _stencil_step(barrier.get_domain(), x, h, fd_step)
    second = float(h @ barrier.hessian(x) @ h)
    forward = float(h @ barrier.hessian(x + step * h) @ h)
    backward = float(h @ barrier.hessian(x - step * h) @ h)
    third = (forward - backward) / (2.0 * step)
    return abs(third) <= 2.0 * second ** 1.5 * (1.0 + SELF_CONCORDANCE_SLACK)


def verify_barrier_parameter(barrier: BarrierOracle, x, h) -> bool:
    """Checks |DR(x)[h]| <= sqrt(theta * D^2 R(x)[h,h]) from the exact gradient and Hessian."""
    _, gradient, hessian = barrier.evaluate(x)
    h = np.asarray(h, dtype=float)
    lhs = abs(float(gradient @ h))
    rhs = math.sqrt(barrier.get_theta() * max(float(h @ hessian @ h), 0.0))
    return lhs <= rhs * (1.0 + BARRIER_PARAMETER_SLACK)


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int):
    apq = a[p, q]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    col_p, col_q = a[:, p].copy(), a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p, row_q = a[p, :].copy(), a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    a[p, q] = a[q, p] = 0.0
    vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
    v[:, p] = c * vec_p - s * vec_q
    v[:, q] = s * vec_p + c * vec_q


def _off_diagonal_norm(a: np.ndarray) -> float:
    return math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))


def symmetric_eigendecomposition(H) -> EigenBasis:
    """
    Eigendecomposition of a symmetric positive definite matrix by cyclic Jacobi rotations.

    Output is deterministic: eigenvalues are sorted in descending order (ties keep sweep order)
    and the first nonzero component of every eigenvector is positive.

    Args:
        H: An n x n symmetric positive definite matrix.

    Returns:
        EigenBasis: The eigenvalues and orthonormal eigenvectors (as columns).

    Raises:
        ArgumentError: If H is not square or not symmetric within 1e-12.
        NumericError: If an eigenvalue is not positive or the sweeps do not converge.
    """
    H = np.array(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ArgumentError(f"expected a square matrix, got shape {H.shape}")
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    if H.size and float(np.max(np.abs(H - H.T))) > SYMMETRY_TOL * scale:
        raise ArgumentError("matrix is not symmetric")

    n = H.shape[0]
    a = 0.5 * (H + H.T)
    v = np.eye(n)
    threshold = JACOBI_OFFDIAG_TOL * np.linalg.norm(a, "fro")
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_diagonal_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] != 0.0:
                    _rotate(a, v, p, q)
    else:
        if _off_diagonal_norm(a) > threshold:
            raise NumericError(f"Jacobi sweeps did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    eigenvalues = np.diag(a).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    eigenvectors = v[:, order]
    for j in range(n):
        nonzero = np.flatnonzero(np.abs(eigenvectors[:, j]) > 1e-12)
        if nonzero.size and eigenvectors[nonzero[0], j] < 0:
            eigenvectors[:, j] = -eigenvectors[:, j]
    if n and eigenvalues[-1] <= 0.0:
        raise NumericError(f"matrix is not positive definite (smallest eigenvalue {eigenvalues[-1]:.3e})")

    eigenvalues.setflags(write=False)
    eigenvectors.setflags(write=False)
    return EigenBasis(eigenvalues, eigenvectors)


def sample_interior_point(body: ConvexPolytope, rng: np.random.Generator, max_fraction: float = 0.99) -> np.ndarray:
    """
    Draws a strictly interior point on a random ray from the body's interior point, at a uniform
    fraction in [0, max_fraction) of the distance to the boundary.
    """
    center = body.get_interior_point()
    direction = rng.standard_normal(body.get_dimension())
    direction /= np.linalg.norm(direction)
    return center + rng.uniform(0.0, max_fraction) * body.max_step(center, direction) * direction

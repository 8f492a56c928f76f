import dataclasses
import math
import warnings
import numpy as np
from scrible.environments import Environment
from scrible.errors import (
    ArgumentError,
    ConfigError,
    ContractViolationError,
    NumericError,
    RunAbortedError,
    ScribleError,
    TheoremConditionWarning,
)
from scrible.estimator import estimate_loss_vector, round_stream, sample_dikin_boundary
from scrible.geometry import dual_local_norm, symmetric_eigendecomposition
from scrible.globals import PRECONDITION_LIMIT
from scrible.logging_utils import get_logger
from scrible.newton import analytic_center, damped_newton_step, minimize
from scrible.objects.barrier import BarrierOracle
from scrible.objects.loss_sequence import LossSequence
from scrible.objects.objective import Objective
from scrible.objects.polytope import BOX, SIMPLEX, ConvexPolytope
from scrible.objects.round_record import RoundRecord
from scrible.objects.run_config import ARGMIN, BANDIT_PGD, FTL, FTRL_FULL, SCRIBLE, RunConfig
from scrible.objects.run_trace import RunTrace

logger = get_logger(__name__)

_LOSS_TOL = 1e-12


def theorem_condition_holds(theta: float, T: float) -> bool:
    """Whether T / log T > 8 theta, the horizon condition of the regret theorem."""
    return T > 1 and T / math.log(T) > 8.0 * theta


def theorem_eta(theta: float, n: int, L: float, T: float) -> float:
    """
    The learning rate sqrt(theta log T / (2 n^2 L^2 T)) of the regret theorem (natural log).

    Emits a TheoremConditionWarning when T / log T <= 8 theta; callers decide whether to proceed.
    """
    if not (theta > 0 and n > 0 and L > 0):
        raise ArgumentError(f"theta, n and L must be positive, got {theta}, {n}, {L}")
    if not T >= 2:
        raise ArgumentError(f"horizon must be at least 2 so that log T > 0, got {T}")
    if not theorem_condition_holds(theta, T):
        warnings.warn(
            f"T / log T = {T / math.log(T):.4g} <= 8 theta = {8 * theta:g}; the regret theorem does not apply",
            TheoremConditionWarning,
            stacklevel=2
        )
    return math.sqrt(theta * math.log(T) / (2.0 * n * n * L * L * T))


def theorem_bound(theta: float, n: int, L: float, T: float) -> float:
    """The expected-regret bound n L sqrt(8 theta T log T) + 2 L."""
    if T < 2:
        return 2.0 * L
    return n * L * math.sqrt(8.0 * theta * T * math.log(T)) + 2.0 * L


def regret(losses, plays, comparator) -> float:
    """sum_t f_t^T y_t - sum_t f_t^T u for loss vectors f_t, plays y_t and comparator u."""
    losses = np.asarray(losses, dtype=float)
    plays = np.asarray(plays, dtype=float)
    if losses.size == 0:
        return 0.0
    return float(np.sum(losses * plays) - losses.sum(axis=0) @ np.asarray(comparator, dtype=float))


def best_in_hindsight(body: ConvexPolytope, cumulative_loss) -> tuple[np.ndarray, float]:
    """
    The vertex minimizing the cumulative linear loss; ties go to the lexicographically smallest.

    Args:
        body (ConvexPolytope): The decision set.
        cumulative_loss: The summed loss vector.

    Returns:
        tuple[np.ndarray, float]: The minimizing vertex and its loss.

    Raises:
        SizeError: If vertex enumeration exceeds the desk-scale guard.
    """
    c = np.asarray(cumulative_loss, dtype=float)
    vertices = body.get_vertices()
    values = vertices @ c
    best = float(np.min(values))
    ties = np.flatnonzero(values <= best + 1e-12 * (1.0 + abs(best)))
    index = int(ties[0])
    return vertices[index].copy(), float(values[index])


def _check_loss(loss: float, bound: float, t: int):
    if abs(loss) > bound * (1.0 + _LOSS_TOL) + _LOSS_TOL:
        raise ContractViolationError(f"round {t + 1}: observed loss {loss:.6g} exceeds the loss bound {bound:g}")


def _finish(
        config: RunConfig,
        rounds: list[RoundRecord],
        body: ConvexPolytope,
        vectors: np.ndarray,
        offsets: np.ndarray,
        theta: float,
        eta: float
) -> RunTrace:
    n = body.get_dimension()
    vectors = np.asarray(vectors, dtype=float).reshape(len(rounds), n)
    offsets = np.asarray(offsets, dtype=float).reshape(len(rounds))
    comparator, _ = best_in_hindsight(body, vectors.sum(axis=0))
    comparator_losses = vectors @ comparator + offsets
    rounds = [dataclasses.replace(r, comparator_loss=float(c)) for r, c in zip(rounds, comparator_losses)]
    return RunTrace(config, rounds, comparator, float(np.sum(comparator_losses)),
                    theta=theta, dimension=n, eta=eta)


def _finish_from_env(config, rounds, body, env: Environment, theta, eta) -> RunTrace:
    T = len(rounds)
    vectors = np.array([env.loss_vector(t) for t in range(T)]).reshape(T, body.get_dimension())
    offsets = np.array([env.loss_offset(t) for t in range(T)])
    return _finish(config, rounds, body, vectors, offsets, theta, eta)


def _abort(message: str, err: Exception, partial) -> RunAbortedError:
    try:
        trace = partial()
    except ScribleError:
        trace = None
    return RunAbortedError(f"{message}: {err}", trace=trace)


def resolve_eta(config: RunConfig, theta: float, n: int) -> float:
    """The configured learning rate, or the theorem's rate when eta is 'auto'."""
    if not config.is_auto_eta():
        return float(config.eta)
    T = config.horizon
    if not theorem_condition_holds(theta, T) and not config.allow_condition_violation:
        raise ConfigError(
            f"auto eta needs T / log T > 8 theta (T={T}, theta={theta:g}); set allow_condition_violation to override"
        )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TheoremConditionWarning)
        return theorem_eta(theta, n, config.loss_bound, max(T, 2))


def _check_environment(env: Environment, config: RunConfig, n: int):
    if env.get_dimension() != n:
        raise ConfigError(f"environment has dimension {env.get_dimension()}, decision set has {n}")
    if env.get_loss_bound() > config.loss_bound * (1.0 + _LOSS_TOL):
        raise ConfigError(f"environment declares loss bound {env.get_loss_bound():g} above the configured {config.loss_bound:g}")
    if env.get_horizon() is not None and env.get_horizon() < config.horizon:
        raise ConfigError(f"environment has {env.get_horizon()} rounds, the run needs {config.horizon}")


def run_scrible(env: Environment, config: RunConfig, barrier: BarrierOracle) -> RunTrace:
    """
    Runs SCRiBLe: follow-the-regularized-leader with a self-concordant barrier, playing points on
    the Dikin ellipsoid around the leader and feeding FTRL one-point loss estimates.

    Each round eigendecomposes the barrier Hessian at x_t, samples y_t, observes only the scalar
    loss of y_t, builds the unbiased estimate and moves x_{t+1} to the minimizer of
    eta * sum(estimates)^T x + R(x) ('argmin') or one damped Newton step towards it
    ('single_newton'). Regret is measured against the best vertex in hindsight.

    Args:
        env (Environment): The adversary; only `observe` is used during play.
        config (RunConfig): Horizon, learning rate, loss bound, seed and update mode.
        barrier (BarrierOracle): The regularizer R on the decision set.

    Returns:
        RunTrace: The per-round records, comparator and regret.

    Raises:
        ConfigError: If the environment does not match or auto eta is used outside the theorem's range.
        RunAbortedError: If any round fails; the partial trace is attached.
    """
    body = barrier.get_domain()
    n = body.get_dimension()
    theta = barrier.get_theta()
    _check_environment(env, config, n)
    T = config.horizon
    if T == 0:
        return _finish(config, [], body, np.zeros((0, n)), np.zeros(0), theta, None)
    eta = resolve_eta(config, theta, n)
    enforce_precondition = config.is_auto_eta() and theorem_condition_holds(theta, T)
    logger.info("scrible: T=%d n=%d theta=%g eta=%.6g mode=%s seed=%d",
                T, n, theta, eta, config.update_mode, config.seed)

    rounds: list[RoundRecord] = []
    x = analytic_center(barrier, tol=config.newton_tol)
    accumulated = np.zeros(n)
    cumulative_loss = 0.0
    try:
        for t in range(T):
            basis = symmetric_eigendecomposition(barrier.hessian(x))
            outcome = sample_dikin_boundary(x, basis, round_stream(config.seed, t),
                                            body=body, shrink=config.sample_shrink)
            loss = env.observe(t, outcome.prediction)
            _check_loss(loss, config.loss_bound, t)
            estimate = estimate_loss_vector(loss, outcome, basis, n)

            dual_norm = math.sqrt(float(np.sum((basis.eigenvectors.T @ estimate) ** 2 / basis.eigenvalues)))
            expected = n * abs(loss) / config.sample_shrink
            if abs(dual_norm - expected) > 1e-9 * (1.0 + expected):
                raise NumericError(f"round {t + 1}: estimate dual norm {dual_norm:.12g} != n|loss| = {expected:.12g}")
            if enforce_precondition and eta * dual_norm > PRECONDITION_LIMIT * (1.0 + 1e-12):
                raise ContractViolationError(f"round {t + 1}: eta * ||f~||* = {eta * dual_norm:.6g} exceeds 1/4")

            cumulative_loss += loss
            rounds.append(RoundRecord(t + 1, x, outcome.prediction, loss, estimate, dual_norm, cumulative_loss, outcome))

            accumulated = accumulated + eta * estimate
            objective = Objective(accumulated, barrier)
            if config.update_mode == ARGMIN:
                x = minimize(objective, x, tol=config.newton_tol)
            else:
                x = damped_newton_step(objective, x)
            logger.debug("round %d: loss %.6g, next center %s", t + 1, loss, x)
    except ScribleError as err:
        raise _abort(f"scrible run aborted in round {len(rounds) + 1}", err,
                     lambda: _finish_from_env(config, rounds, body, env, theta, eta)) from err

    trace = _finish_from_env(config, rounds, body, env, theta, eta)
    logger.info("scrible: regret %.6g (bound %.6g)", trace.regret, theorem_bound(theta, n, config.loss_bound, T))
    return trace


def loss_arrays(losses, n: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Loss vectors, offsets and declared bound (None for raw arrays) of a LossSequence or T x n array."""
    if isinstance(losses, LossSequence):
        return losses.get_vectors(), losses.get_offsets(), losses.get_declared_bound()
    vectors = np.asarray(losses, dtype=float).reshape(-1, n)
    if not np.all(np.isfinite(vectors)):
        raise ArgumentError("loss vectors must be finite")
    return vectors, np.zeros(vectors.shape[0]), None


def run_ftrl_full_info(losses, eta: float, barrier: BarrierOracle, newton_tol: float = 1e-8) -> RunTrace:
    """
    Full-information FTRL with the barrier as regularizer: plays x_t itself, sees f_t, and moves to
    the minimizer of eta * sum_{s<=t} f_s^T x + R(x).

    Args:
        losses: A LossSequence or a T x n array of loss vectors.
        eta (float): The learning rate.
        barrier (BarrierOracle): The regularizer.
        newton_tol (float): Newton decrement tolerance of each update.

    Returns:
        RunTrace: Records hold the dual local norm ||f_t||*_{x_t} used by the local-norm regret bound.
    """
    body = barrier.get_domain()
    n = body.get_dimension()
    vectors, offsets, declared = loss_arrays(losses, n)
    if not eta > 0:
        raise ArgumentError(f"eta must be positive, got {eta}")
    T = vectors.shape[0]
    if declared is None:
        declared = LossSequence(vectors, 1.0).vertex_bound(body) or 1.0
    config = RunConfig(horizon=T, eta=eta, loss_bound=declared, algorithm=FTRL_FULL, newton_tol=newton_tol)

    rounds: list[RoundRecord] = []
    x = analytic_center(barrier, tol=newton_tol)
    accumulated = np.zeros(n)
    cumulative_loss = 0.0
    try:
        for t in range(T):
            f = vectors[t]
            loss = float(f @ x) + float(offsets[t])
            cumulative_loss += loss
            rounds.append(RoundRecord(t + 1, x, x, loss, f.copy(), dual_local_norm(barrier, x, f), cumulative_loss))
            accumulated = accumulated + eta * f
            x = minimize(Objective(accumulated, barrier), x, tol=newton_tol)
    except ScribleError as err:
        raise _abort(f"full-information FTRL aborted in round {len(rounds) + 1}", err,
                     lambda: _finish(config, rounds, body, vectors[:len(rounds)], offsets[:len(rounds)],
                                     barrier.get_theta(), eta)) from err
    return _finish(config, rounds, body, vectors, offsets, barrier.get_theta(), eta)


def shrunk_body_check(body: ConvexPolytope, delta: float):
    """Raises ConfigError unless K_delta, the points at distance >= delta from the boundary, is nonempty."""
    if body.get_shape() == BOX:
        params = body.get_shape_params()
        if np.any(params["upper"] - params["lower"] <= 2.0 * delta):
            raise ConfigError(f"delta {delta} leaves an empty shrunk box")
    elif body.get_shape() == SIMPLEX:
        n = body.get_dimension()
        if body.get_shape_params()["scale"] - delta * (n + math.sqrt(n)) <= 0.0:
            raise ConfigError(f"delta {delta} leaves an empty shrunk simplex")
    else:
        raise ConfigError("projected gradient descent supports box and simplex bodies only")


def _project_simplex(v: np.ndarray, radius: float) -> np.ndarray:
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u)
    rho = np.nonzero(u * np.arange(1, v.shape[0] + 1) > (cssv - radius))[0][-1]
    theta = (cssv[rho] - radius) / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def project_onto_shrunk_body(body: ConvexPolytope, x, delta: float) -> np.ndarray:
    """
    Euclidean projection onto K_delta: the box shrunk by delta on every side, or the simplex
    {x >= delta, sum(x) <= scale - delta sqrt(n)}.
    """
    shrunk_body_check(body, delta)
    x = np.asarray(x, dtype=float)
    if body.get_shape() == BOX:
        params = body.get_shape_params()
        return np.clip(x, params["lower"] + delta, params["upper"] - delta)
    n = body.get_dimension()
    radius = body.get_shape_params()["scale"] - delta * math.sqrt(n) - n * delta
    z = np.maximum(x - delta, 0.0)
    if z.sum() > radius:
        z = _project_simplex(x - delta, radius)
    return z + delta


def run_bandit_pgd(env: Environment, config: RunConfig, body: ConvexPolytope) -> RunTrace:
    """
    Bandit projected gradient descent: keeps x_t in K_delta, plays y_t = x_t + delta s for s
    uniform on the unit sphere, estimates f~ = (n / delta) (f_t^T y_t) s and updates
    x_{t+1} = Proj_{K_delta}(x_t - eta f~). With eta 'auto' the rate is delta / (n L sqrt(T)).

    Raises:
        ConfigError: For bodies other than boxes and simplices, or a delta that empties K_delta.
        RunAbortedError: If any round fails; the partial trace is attached.
    """
    n = body.get_dimension()
    _check_environment(env, config, n)
    delta = config.pgd_delta
    if delta is None:
        raise ConfigError("bandit_pgd requires pgd_delta")
    shrunk_body_check(body, delta)
    T = config.horizon
    eta = float(config.eta) if not config.is_auto_eta() else delta / (n * config.loss_bound * math.sqrt(max(T, 1)))
    logger.info("bandit pgd: T=%d n=%d delta=%g eta=%.6g seed=%d", T, n, delta, eta, config.seed)

    rounds: list[RoundRecord] = []
    x = project_onto_shrunk_body(body, body.get_interior_point(), delta)
    cumulative_loss = 0.0
    try:
        for t in range(T):
            direction = round_stream(config.seed, t).standard_normal(n)
            direction /= np.linalg.norm(direction)
            y = x + delta * direction
            loss = env.observe(t, y)
            _check_loss(loss, config.loss_bound, t)
            estimate = (n / delta) * loss * direction
            cumulative_loss += loss
            rounds.append(RoundRecord(t + 1, x, y, loss, estimate, float(np.linalg.norm(estimate)), cumulative_loss))
            x = project_onto_shrunk_body(body, x - eta * estimate, delta)
    except ScribleError as err:
        raise _abort(f"bandit pgd aborted in round {len(rounds) + 1}", err,
                     lambda: _finish_from_env(config, rounds, body, env, None, eta)) from err
    return _finish_from_env(config, rounds, body, env, None, eta)


def run_follow_the_leader(losses, body: ConvexPolytope) -> RunTrace:
    """
    Unregularized follow-the-leader with full information: plays the best vertex for the losses
    seen so far. Included to show the linear regret that motivates regularization and randomization.
    """
    n = body.get_dimension()
    vectors, offsets, declared = loss_arrays(losses, n)
    T = vectors.shape[0]
    if declared is None:
        declared = LossSequence(vectors, 1.0).vertex_bound(body) or 1.0
    config = RunConfig(horizon=T, eta=1.0, loss_bound=declared, algorithm=FTL)
    rounds: list[RoundRecord] = []
    seen = np.zeros(n)
    cumulative_loss = 0.0
    for t in range(T):
        x, _ = best_in_hindsight(body, seen)
        loss = float(vectors[t] @ x) + float(offsets[t])
        cumulative_loss += loss
        rounds.append(RoundRecord(t + 1, x, x, loss, vectors[t].copy(), float(np.linalg.norm(vectors[t])), cumulative_loss))
        seen = seen + vectors[t]
    return _finish(config, rounds, body, vectors, offsets, None, None)


def run_algorithm(env: Environment, config: RunConfig, barrier: BarrierOracle) -> RunTrace:
    """Dispatches on config.algorithm. Full-information algorithms read the whole loss sequence."""
    body = barrier.get_domain()
    if config.algorithm == SCRIBLE:
        return run_scrible(env, config, barrier)
    if config.algorithm == BANDIT_PGD:
        return run_bandit_pgd(env, config, body)
    _check_environment(env, config, body.get_dimension())
    T = config.horizon
    vectors = np.array([env.loss_vector(t) for t in range(T)]).reshape(T, body.get_dimension())
    offsets = np.array([env.loss_offset(t) for t in range(T)])
    sequence = LossSequence(vectors, env.get_loss_bound(), offsets=offsets)
    if config.algorithm == FTL:
        return run_follow_the_leader(sequence, body)
    eta = resolve_eta(config, barrier.get_theta(), body.get_dimension()) if T else 1.0
    trace = run_ftrl_full_info(sequence, eta, barrier, newton_tol=config.newton_tol)
    trace.config = config
    return trace

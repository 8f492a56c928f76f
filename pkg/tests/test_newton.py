import math
import numpy as np
import pytest
from scipy.optimize import minimize_scalar
from scrible.errors import ConvergenceError, DomainError
from scrible.geometry import make_box, make_log_barrier, sample_interior_point
from scrible.newton import analytic_center, damped_newton_step, minimize, newton_decrement
from scrible.objects.objective import Objective


def _interval_minimizer(g: float) -> float:
    # stationarity of g x - log(1 - x) - log(1 + x)
    return 0.0 if g == 0 else (1.0 - math.sqrt(1.0 + g * g)) / g


def _grid_minimize(body, g, rounds=150, points=41, shrink=0.8):
    """Nested grid refinement of g^T x + R(x) in two dimensions."""
    A, b = body.A, body.b
    center = np.array(body.get_interior_point(), dtype=float)
    half_width = float(np.max(np.abs(body.get_vertices() - center))) + 1.0
    offsets = np.linspace(-1.0, 1.0, points)
    for _ in range(rounds):
        X, Y = np.meshgrid(center[0] + half_width * offsets, center[1] + half_width * offsets, indexing="ij")
        pts = np.stack([X.ravel(), Y.ravel()], axis=1)
        slacks = b[None, :] - pts @ A.T
        with np.errstate(invalid="ignore", divide="ignore"):
            values = pts @ g - np.sum(np.log(np.where(slacks > 0, slacks, np.nan)), axis=1)
        values[np.isnan(values)] = np.inf
        center = pts[int(np.argmin(values))]
        half_width *= shrink
    return center


def test_newton_decrement_examples(interval_barrier, square_barrier):
    objective = Objective([0.0], interval_barrier)
    assert newton_decrement(objective, [0.5]) == pytest.approx(math.sqrt(0.4))
    assert newton_decrement(Objective([0.0, 0.0], square_barrier), [0.0, 0.0]) == pytest.approx(0.0, abs=1e-15)

    x = np.array([0.3, -0.6])
    stationary = Objective(-square_barrier.gradient(x), square_barrier)
    assert newton_decrement(stationary, x) == pytest.approx(0.0, abs=1e-12)


def test_damped_step_examples(interval_barrier, square_barrier):
    objective = Objective([0.0], interval_barrier)
    assert damped_newton_step(objective, [0.5]) == pytest.approx(np.array([0.5 - 0.3 / (1 + math.sqrt(0.4))]))
    assert damped_newton_step(objective, [0.0]) == pytest.approx(np.array([0.0]), abs=1e-15)

    x = np.array([0.2, 0.4])
    stationary = Objective(-square_barrier.gradient(x), square_barrier)
    assert damped_newton_step(stationary, x) == pytest.approx(x, abs=1e-15)


def test_damped_step_reports_its_decrement(interval_barrier):
    objective = Objective([1.0], interval_barrier)
    _, decrement, backtracks = damped_newton_step(objective, [0.5], with_info=True)
    assert decrement == pytest.approx(newton_decrement(objective, [0.5]))
    assert backtracks == 0


def test_damped_steps_descend_and_stay_interior(rng, random_polytope):
    steps = backtracked = 0
    for _ in range(100):
        n = int(rng.integers(1, 5))
        body = random_polytope(n)
        barrier = make_log_barrier(body)
        objective = Objective(rng.uniform(-3.0, 3.0, size=n), barrier)
        x = sample_interior_point(body, rng)
        for _ in range(10):
            x_next, decrement, backtracks = damped_newton_step(objective, x, with_info=True)
            assert body.is_interior(x_next)
            before, after = objective.value(x), objective.value(x_next)
            if decrement > 1e-6:
                assert after < before
            else:
                # the decrease is below double rounding of F here
                assert after <= before + 1e-12 * (1 + abs(before))
            steps += 1
            backtracked += backtracks > 0
            x = x_next
    assert backtracked <= 0.01 * steps


def test_minimize_examples(interval_barrier, square_barrier, triangle_barrier):
    assert minimize(Objective([0.0, 0.0], square_barrier), [0.5, -0.7]) == pytest.approx(np.zeros(2), abs=1e-8)
    assert minimize(Objective([1.0], interval_barrier), [0.0]) == pytest.approx(np.array([1 - math.sqrt(2)]), abs=1e-8)
    assert minimize(Objective([0.0, 0.0], triangle_barrier), [0.1, 0.1]) == pytest.approx(np.full(2, 1 / 3), abs=1e-8)


def test_minimize_matches_one_dimensional_oracles(rng, interval_barrier):
    for _ in range(50):
        g = float(rng.uniform(-5.0, 5.0))
        start = np.array([rng.uniform(-0.9, 0.9)])
        x = minimize(Objective([g], interval_barrier), start)
        assert x[0] == pytest.approx(_interval_minimizer(g), abs=1e-6)
        reference = minimize_scalar(lambda z: g * z - math.log(1 - z) - math.log(1 + z),
                                    bounds=(-1 + 1e-12, 1 - 1e-12), method="bounded", options={"xatol": 1e-10})
        assert x[0] == pytest.approx(reference.x, abs=1e-6)


def test_minimize_matches_two_dimensional_grid_refinement(rng, triangle, random_polytope):
    bodies = [triangle] + [random_polytope(2) for _ in range(49)]
    for body in bodies:
        barrier = make_log_barrier(body)
        g = rng.uniform(-1.0, 1.0, size=2)
        x = minimize(Objective(g, barrier), body.get_interior_point())
        assert x == pytest.approx(_grid_minimize(body, g), abs=1e-6)


def test_minimize_reports_non_convergence(interval_barrier):
    with pytest.raises(ConvergenceError) as info:
        minimize(Objective([1.0], interval_barrier), [0.5], max_iter=0)
    assert info.value.last_decrement > 0


def test_minimize_needs_an_interior_start(interval_barrier):
    with pytest.raises(DomainError):
        minimize(Objective([0.0], interval_barrier), [1.0])


def test_analytic_centers(square_barrier, triangle_barrier):
    assert analytic_center(square_barrier) == pytest.approx(np.zeros(2), abs=1e-8)
    assert analytic_center(make_log_barrier(make_box([0.0, 0.0], [1.0, 3.0]))) == pytest.approx(np.array([0.5, 1.5]), abs=1e-8)
    assert analytic_center(triangle_barrier) == pytest.approx(np.full(2, 1 / 3), abs=1e-8)

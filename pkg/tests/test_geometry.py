import math
import numpy as np
import pytest
from scrible.errors import ArgumentError, DomainError, NumericError, SizeError
from scrible.geometry import (
    dikin_membership,
    dual_local_norm,
    local_norm,
    make_box,
    make_log_barrier,
    make_simplex,
    sample_interior_point,
    symmetric_eigendecomposition,
    verify_barrier_parameter,
    verify_self_concordance,
)
from scrible.objects.polytope import BOX, SIMPLEX, ConvexPolytope


def test_interval_barrier_closed_form(interval_barrier):
    value, gradient, hessian = interval_barrier.evaluate([0.0])
    assert value == pytest.approx(0.0, abs=1e-15)
    assert gradient == pytest.approx(np.array([0.0]), abs=1e-15)
    assert hessian == pytest.approx(np.array([[2.0]]))

    value, gradient, hessian = interval_barrier.evaluate([0.5])
    assert value == pytest.approx(-math.log(0.5) - math.log(1.5))
    assert gradient == pytest.approx(np.array([4.0 / 3.0]))
    assert hessian == pytest.approx(np.array([[40.0 / 9.0]]))


def test_barrier_blows_up_near_the_boundary(interval_barrier, square_barrier):
    assert interval_barrier.value([0.999]) > 6.2
    assert square_barrier.gradient([0.0, 0.0]) == pytest.approx(np.array([0.0, 0.0]), abs=1e-15)
    assert square_barrier.get_theta() == 4


def test_barrier_rejects_non_interior_points(interval_barrier):
    for x in ([1.0], [-1.0], [1.5], [float("nan")]):
        with pytest.raises(DomainError):
            interval_barrier.evaluate(x)


def test_barrier_derivatives_match_finite_differences(rng, random_polytope):
    for _ in range(100):
        n = int(rng.integers(1, 5))
        body = random_polytope(n)
        barrier = make_log_barrier(body)
        x = sample_interior_point(body, rng, max_fraction=0.9)
        _, gradient, hessian = barrier.evaluate(x)
        fd_gradient = np.zeros(n)
        fd_hessian = np.zeros((n, n))
        for j in range(n):
            e = np.eye(n)[j]
            step = 1e-5 * min(body.max_step(x, e), body.max_step(x, -e))
            fd_gradient[j] = (barrier.value(x + step * e) - barrier.value(x - step * e)) / (2 * step)
            fd_hessian[:, j] = (barrier.gradient(x + step * e) - barrier.gradient(x - step * e)) / (2 * step)
        assert np.linalg.norm(fd_gradient - gradient) <= 1e-5 * (1 + np.linalg.norm(gradient))
        assert np.linalg.norm(fd_hessian - hessian) <= 1e-5 * (1 + np.linalg.norm(hessian))


def test_local_norms(square_barrier, interval_barrier, rng, random_polytope):
    assert local_norm(square_barrier, [0.0, 0.0], [1.0, 0.0]) == pytest.approx(math.sqrt(2))
    assert local_norm(square_barrier, [0.3, -0.2], [0.0, 0.0]) == 0.0
    assert dual_local_norm(interval_barrier, [0.0], [1.0]) == pytest.approx(1 / math.sqrt(2))
    assert dual_local_norm(square_barrier, [0.1, 0.1], [0.0, 0.0]) == 0.0

    body = random_polytope(3)
    barrier = make_log_barrier(body)
    x = sample_interior_point(body, rng)
    v = rng.standard_normal(3)
    # the dual norm of H v is the primal norm of v
    assert dual_local_norm(barrier, x, barrier.hessian(x) @ v) == pytest.approx(local_norm(barrier, x, v), rel=1e-9)


def test_dikin_membership_excludes_the_boundary(square_barrier):
    assert not dikin_membership(square_barrier, [0.0, 0.0], [0.5, 0.5])
    assert dikin_membership(square_barrier, [0.0, 0.0], [0.5, 0.0])
    assert dikin_membership(square_barrier, [0.2, 0.1], [0.2, 0.1])


def _dikin_containment(rng, random_polytope, points, directions):
    for _ in range(points):
        n = int(rng.integers(1, 5))
        body = random_polytope(n)
        barrier = make_log_barrier(body)
        x = sample_interior_point(body, rng)
        for _ in range(directions):
            h = rng.standard_normal(n)
            y = x + 0.999 * h / local_norm(barrier, x, h)
            assert body.is_interior(y)


def test_dikin_ellipsoid_lies_inside_the_body(rng, random_polytope):
    _dikin_containment(rng, random_polytope, points=50, directions=20)


@pytest.mark.slow
def test_dikin_ellipsoid_lies_inside_the_body_exhaustive(rng, random_polytope):
    _dikin_containment(rng, random_polytope, points=1000, directions=100)


def test_dikin_boundary_lies_in_the_closed_body(rng, random_polytope):
    for _ in range(50):
        n = int(rng.integers(1, 5))
        body = random_polytope(n)
        barrier = make_log_barrier(body)
        x = sample_interior_point(body, rng)
        for _ in range(20):
            h = rng.standard_normal(n)
            y = x + h / local_norm(barrier, x, h)
            assert body.in_closed(y, 1e-9), np.min(body.slacks(y))


@pytest.mark.parametrize("x", [0.0, 0.5, 0.9, 0.99])
def test_dikin_radius_shrinks_toward_the_boundary(interval_barrier, x):
    # the longest Dikin semi-axis never reaches past the nearer endpoint
    smallest = symmetric_eigendecomposition(interval_barrier.hessian([x])).eigenvalues[-1]
    assert smallest ** -0.5 <= 1 - abs(x) + 1e-12


def test_self_concordance_examples(square_barrier, interval_barrier):
    assert verify_self_concordance(square_barrier, [0.0, 0.0], [1.0, 0.0], fd_step=1e-4)
    assert verify_self_concordance(square_barrier, [0.0, 0.0], [0.0, 0.0])
    assert verify_self_concordance(interval_barrier, [0.5], [1.0], fd_step=1e-4)


def test_self_concordance_stencil_must_stay_inside(interval_barrier):
    with pytest.raises(ArgumentError):
        verify_self_concordance(interval_barrier, [0.5], [1.0], fd_step=0.0)
    with pytest.raises(DomainError):
        verify_self_concordance(interval_barrier, [0.5], [1.0], fd_step=1.0)


def test_barrier_parameter_examples(interval_barrier, triangle_barrier):
    assert verify_barrier_parameter(interval_barrier, [0.0], [1.0])
    assert verify_barrier_parameter(interval_barrier, [0.9], [1.0])
    assert verify_barrier_parameter(triangle_barrier, [1 / 3, 1 / 3], [1.0, -1.0])


def test_verifiers_on_random_log_barriers(rng, random_polytope):
    for _ in range(100):
        n = int(rng.integers(1, 5))
        body = random_polytope(n, cuts=int(rng.integers(0, 5)))
        barrier = make_log_barrier(body)
        x = sample_interior_point(body, rng)
        h = rng.standard_normal(n)
        assert verify_self_concordance(barrier, x, h)
        assert verify_barrier_parameter(barrier, x, h)


def test_eigendecomposition_examples():
    basis = symmetric_eigendecomposition(np.diag([2.0, 2.0]))
    assert basis.eigenvalues == pytest.approx(np.array([2.0, 2.0]))
    assert basis.eigenvectors == pytest.approx(np.eye(2))

    basis = symmetric_eigendecomposition([[2.0, 1.0], [1.0, 2.0]])
    assert basis.eigenvalues == pytest.approx(np.array([3.0, 1.0]), abs=1e-12)
    assert basis.get_eigenvector(0) == pytest.approx(np.array([1.0, 1.0]) / math.sqrt(2), abs=1e-12)
    assert basis.get_eigenvector(1) == pytest.approx(np.array([1.0, -1.0]) / math.sqrt(2), abs=1e-12)

    assert symmetric_eigendecomposition(np.eye(4)).eigenvalues == pytest.approx(np.ones(4))


def test_eigendecomposition_matches_numpy_on_random_spd_matrices(rng):
    for n in range(1, 9):
        M = rng.standard_normal((n, n))
        H = M @ M.T + n * np.eye(n)
        basis = symmetric_eigendecomposition(H)
        assert np.all(np.diff(basis.eigenvalues) <= 0)
        assert basis.eigenvalues == pytest.approx(np.sort(np.linalg.eigvalsh(H))[::-1], rel=1e-10)
        assert basis.eigenvectors.T @ basis.eigenvectors == pytest.approx(np.eye(n), abs=1e-10)
        assert basis.reconstruct() == pytest.approx(H, rel=1e-9, abs=1e-9)
        for j in range(n):
            first = np.flatnonzero(np.abs(basis.eigenvectors[:, j]) > 1e-12)[0]
            assert basis.eigenvectors[first, j] > 0


def test_eigendecomposition_converges_on_many_spd_matrices(rng):
    for _ in range(200):
        n = int(rng.integers(2, 9))
        M = rng.standard_normal((n, n))
        H = M @ M.T + n * np.eye(n)
        basis = symmetric_eigendecomposition(H)
        assert np.linalg.norm(basis.reconstruct() - H) <= 1e-10 * np.linalg.norm(H)


def test_eigendecomposition_keeps_tiny_off_diagonal_entries():
    H = np.diag([1e3, 1.0, 2.0])
    H[0, 1] = H[1, 0] = 1e-7
    basis = symmetric_eigendecomposition(H)
    assert np.linalg.norm(basis.reconstruct() - H) <= 1e-10 * np.linalg.norm(H)
    assert basis.eigenvalues == pytest.approx(np.sort(np.linalg.eigvalsh(H))[::-1], rel=1e-12)


def test_eigendecomposition_is_deterministic(rng):
    M = rng.standard_normal((5, 5))
    H = M @ M.T + np.eye(5)
    first = symmetric_eigendecomposition(H)
    second = symmetric_eigendecomposition(H.copy())
    assert np.array_equal(first.eigenvalues, second.eigenvalues)
    assert np.array_equal(first.eigenvectors, second.eigenvectors)


def test_eigendecomposition_rejects_bad_matrices():
    with pytest.raises(ArgumentError):
        symmetric_eigendecomposition([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(ArgumentError):
        symmetric_eigendecomposition(np.ones((2, 3)))
    with pytest.raises(NumericError):
        symmetric_eigendecomposition([[1.0, 0.0], [0.0, -1.0]])


def test_box_and_simplex_builders():
    box = make_box([0.0, 0.0], [1.0, 3.0])
    assert box.get_shape() == BOX
    assert box.get_interior_point() == pytest.approx(np.array([0.5, 1.5]))
    simplex = make_simplex(3)
    assert simplex.get_shape() == SIMPLEX
    assert simplex.get_interior_point() == pytest.approx(np.array([0.25, 0.25, 0.25]))
    assert simplex.get_constraint_count() == 4
    with pytest.raises(ArgumentError):
        make_box([1.0], [1.0])
    with pytest.raises(ArgumentError):
        make_simplex(0)


def test_polytope_validation():
    with pytest.raises(ArgumentError):
        ConvexPolytope([[1.0]], [1.0])
    with pytest.raises(ArgumentError):
        ConvexPolytope([[1.0, 0.0]], [1.0, 2.0])
    with pytest.raises(ArgumentError):
        ConvexPolytope([[1.0], [-1.0]], [1.0, 1.0], interior_point=[1.0])
    with pytest.raises(ArgumentError):
        ConvexPolytope([[0.0], [-1.0]], [1.0, 1.0])


def test_polytope_without_hint_finds_an_interior_point(triangle):
    body = ConvexPolytope(triangle.A, triangle.b)
    assert body.is_interior(body.get_interior_point())
    assert body.get_interior_point() == pytest.approx(np.full(2, 1 - 1 / math.sqrt(2)), abs=1e-5)


def test_polytope_with_empty_interior_is_rejected():
    with pytest.raises(ArgumentError):
        ConvexPolytope([[1.0], [-1.0]], [0.0, 0.0])


def test_polytope_json_round_trip(triangle):
    body = ConvexPolytope.from_json({**triangle.to_json(), "interior_point": [0.2, 0.2]})
    assert np.array_equal(body.A, triangle.A)
    assert np.array_equal(body.b, triangle.b)
    with pytest.raises(ArgumentError):
        ConvexPolytope.from_json({"A": [[1.0]]})


def test_vertices(triangle, square):
    assert triangle.get_vertices() == pytest.approx(np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]), abs=1e-12)
    assert len(square.get_vertices()) == 4
    assert square.get_vertices()[0] == pytest.approx(np.array([-1.0, -1.0]))


def test_vertex_enumeration_guard():
    n = 12
    A = np.vstack([np.eye(n), -np.eye(n), np.ones((40, n)) / n])
    b = np.ones(A.shape[0])
    body = ConvexPolytope(A, b, interior_point=np.zeros(n))
    with pytest.raises(SizeError):
        body.get_vertices()


def test_sampled_interior_points_are_interior(rng, random_polytope):
    body = random_polytope(3)
    for _ in range(200):
        assert body.is_interior(sample_interior_point(body, rng))

import numpy as np
import pytest
from scrible.geometry import make_box, make_log_barrier
from scrible.objects.polytope import ConvexPolytope


def cut_box(rng: np.random.Generator, n: int, cuts: int = 3) -> ConvexPolytope:
    """[-1, 1]^n with `cuts` random halfspaces that keep the origin at distance >= 0.3 from them."""
    eye = np.eye(n)
    normals = rng.standard_normal((cuts, n))
    bounds = rng.uniform(0.3, 1.0, size=cuts) * np.linalg.norm(normals, axis=1)
    A = np.vstack([eye, -eye, normals])
    b = np.concatenate([np.ones(2 * n), bounds])
    return ConvexPolytope(A, b, interior_point=np.zeros(n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def interval():
    return make_box([-1.0], [1.0])


@pytest.fixture
def square():
    return make_box([-1.0, -1.0], [1.0, 1.0])


@pytest.fixture
def triangle():
    return ConvexPolytope([[-1.0, 0.0], [0.0, -1.0], [1.0, 1.0]], [0.0, 0.0, 1.0], interior_point=[0.25, 0.25])


@pytest.fixture
def interval_barrier(interval):
    return make_log_barrier(interval)


@pytest.fixture
def square_barrier(square):
    return make_log_barrier(square)


@pytest.fixture
def triangle_barrier(triangle):
    return make_log_barrier(triangle)


@pytest.fixture
def random_polytope(rng):
    """Factory for random bounded polytopes with the origin strictly inside."""
    def build(n: int, cuts: int = 3) -> ConvexPolytope:
        return cut_box(rng, n, cuts)
    return build

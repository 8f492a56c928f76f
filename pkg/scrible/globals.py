DEFAULT_OUT_DIR = "out"

# A point is strictly interior when every slack exceeds INTERIOR_TOL * (1 + |b_i|).
INTERIOR_TOL = 1e-12
# Closed-body membership tolerance for sampled predictions.
CLOSED_TOL = 1e-9

SYMMETRY_TOL = 1e-12
JACOBI_OFFDIAG_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

NEWTON_TOL = 1e-8
NEWTON_MAX_ITER = 200
NEWTON_MAX_BACKTRACKS = 60

SELF_CONCORDANCE_SLACK = 1e-3
BARRIER_PARAMETER_SLACK = 1e-9

MAX_VERTEX_SUBSETS = 10**6
MAX_PATHS = 10**4
MAX_REDUCTION_BRANCHES = 10**5

PRECONDITION_LIMIT = 0.25
THREADS_ENV_VAR = "SCRIBLE_THREADS"

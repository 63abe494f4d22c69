"""Central tolerance record.

Every routine that compares floats against a threshold takes its default
from :data:`DEFAULT_TOLERANCES`; callers may pass a modified copy made with
:func:`dataclasses.replace`.
"""
from dataclasses import dataclass

# Dense kernels are stored as full n x n arrays; beyond this the O(n^3)
# Householder reduction stops being a desk-scale computation.
DENSE_MAX_N = 4096

# |D_k| = C(2k, k); k = 12 already gives 2 704 156 loop paths.
LOOP_PATH_MAX_K = 12

CATALAN_MAX_R = 30


@dataclass(frozen=True)
class Tolerances:
    row_sum: float = 1e-12
    probability_sum: float = 1e-12
    symmetric_input: float = 1e-12
    symmetric_output: float = 1e-14
    eig_accuracy: float = 1e-10
    max_ql_sweeps: int = 50
    unit_eigenvalue: float = 1e-9
    quantile_bisection: float = 1e-12
    wasserstein_nodes: int = 100_000
    levy_resolution: float = 1e-6
    quad_rtol: float = 1e-12
    quad_atol: float = 1e-15


DEFAULT_TOLERANCES = Tolerances()

"""Spectra of random reversible Markov kernels on the complete graph and the chain."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ContractError,
    DomainError,
    MspecError,
    NumericError,
    ParameterError,
    SizeError,
    ValidityError,
)
from .randlaw import (  # noqa: E402
    AtomZeroMixture,
    Beta,
    PointMass,
    SeededRng,
    Uniform,
    UniformUnion,
    beta_moment,
    law_moment,
    normalized_sigma,
    parse_law,
    sample_weight,
)
from .kernels import (  # noqa: E402
    DenseKernel,
    TridiagonalKernel,
    build_chain_kernel_ergodic,
    build_chain_kernel_iid,
    build_complete_kernel,
    invariant_measure,
    symmetrize,
    tv_distance,
)
from .spectra import (  # noqa: E402
    EmpiricalDistribution,
    Spectrum,
    eig_sym_dense,
    eig_sym_tridiagonal,
    esd,
    esd_moment,
    kernel_spectrum,
    spectral_gap,
    varsigma,
)
from .pathcomb import catalan, chain_limit_moment, crossing_counts, enumerate_loop_paths  # noqa: E402
from .limitlaws import ArcSine, Semicircle, build_wigner, law_moment_ref, levy_cube_bound, wasserstein_p  # noqa: E402
from .walks import (  # noqa: E402
    ergodic_moment_estimate,
    return_normalization_check,
    return_probability_exact,
    return_probability_mc,
    trace_identity_check,
)
from .edge import chain_gap_lower_bound, dense_edge_scaled  # noqa: E402

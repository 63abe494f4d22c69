"""Random reversible Markov kernels on the complete graph and on the chain.

States are labelled ``1..n`` in the documentation and in exported files;
arrays are 0-based as usual.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np
from scipy.special import logsumexp

from .config import DEFAULT_TOLERANCES, DENSE_MAX_N
from .errors import ContractError, DomainError, SizeError, ValidityError
from .randlaw import DistributionSpec, SeededRng, sample_weights

__all__ = [
    "DenseKernel",
    "TridiagonalKernel",
    "SymTridiagonal",
    "Kernel",
    "symmetric_weights",
    "build_complete_kernel",
    "build_chain_kernel_iid",
    "chain_kernel_from_environment",
    "build_chain_kernel_ergodic",
    "reflect_left",
    "reflect_right",
    "invariant_measure",
    "chain_log_weights",
    "symmetrize",
    "tv_distance",
]

# substream tags, see SeededRng.substream
_WEIGHT_ROWS = 1
_CHAIN_ENV = 2


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DenseKernel:
    """Complete-graph kernel ``K[i, j] = U[i, j] / rho[i]``.

    ``U`` is the full symmetric weight matrix (loops included).  A row with
    ``rho[i] == 0`` is an isolated vertex and gets ``K[i] = e_i``.
    """

    K: np.ndarray
    rho: np.ndarray
    U: np.ndarray

    @property
    def n(self) -> int:
        return self.K.shape[0]

    @property
    def isolated(self) -> np.ndarray:
        return np.flatnonzero(self.rho == 0)

    def to_dense(self) -> np.ndarray:
        return np.array(self.K)


@dataclass(frozen=True, eq=False)
class TridiagonalKernel:
    """Birth-and-death kernel with rows ``(c_i, a_i, b_i)``.

    ``c`` is the probability of stepping down, ``a`` of staying, ``b`` of
    stepping up.  ``c[0]`` and ``b[-1]`` are zero.
    """

    c: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        n = len(self.a)
        if n < 2 or len(self.b) != n or len(self.c) != n:
            raise ValidityError("chain kernel needs n >= 2 rows of equal length")
        if self.c[0] != 0 or self.b[-1] != 0:
            raise ValidityError("chain kernel needs c_1 = b_n = 0")
        rows = np.stack([self.c, self.a, self.b])
        if np.any(rows < 0) or np.any(rows > 1):
            raise ValidityError("chain kernel entries must lie in [0, 1]")
        if np.max(np.abs(rows.sum(axis=0) - 1.0)) > DEFAULT_TOLERANCES.row_sum:
            raise ValidityError("chain kernel rows must sum to 1")
        if np.any(self.b[:-1] <= 0) or np.any(self.c[1:] <= 0):
            raise ValidityError("chain kernel needs b_i > 0 and c_{i+1} > 0 for i < n (irreducibility)")

    @property
    def n(self) -> int:
        return len(self.a)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.a) + np.diag(self.b[:-1], 1) + np.diag(self.c[1:], -1)

    def mirrored(self) -> "TridiagonalKernel":
        """The same chain with states relabelled ``i -> n + 1 - i``."""
        return TridiagonalKernel(c=_frozen(self.b[::-1]), a=_frozen(self.a[::-1]), b=_frozen(self.c[::-1]))


Kernel = Union[DenseKernel, TridiagonalKernel]


class SymTridiagonal(NamedTuple):
    diag: np.ndarray
    offdiag: np.ndarray


def symmetric_weights(n: int, law: DistributionSpec, rng: SeededRng) -> np.ndarray:
    """Symmetric ``n x n`` matrix of i.i.d. weights ``U[i, j] = U[j, i]``.

    Row ``i`` of the upper triangle (``j >= i``) is drawn from its own
    substream, so the matrix for ``n`` is the leading block of the one for
    any larger ``n`` built from the same seed.
    """
    if n > DENSE_MAX_N:
        raise SizeError(f"dense models are capped at n = {DENSE_MAX_N}, got {n}")
    U = np.zeros((n, n))
    for i in range(n):
        U[i, i:] = sample_weights(law, rng.substream(_WEIGHT_ROWS, i), n - i)
    iu = np.triu_indices(n, 1)
    U[iu[1], iu[0]] = U[iu]
    return U


def build_complete_kernel(n: int, law: DistributionSpec, rng: SeededRng) -> DenseKernel:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if law.support[0] < 0:
        raise DomainError("weights must be nonnegative")
    U = symmetric_weights(n, law, rng)
    return _dense_from_weights(U)


def _dense_from_weights(U: np.ndarray) -> DenseKernel:
    rho = U.sum(axis=1)
    K = np.zeros_like(U)
    live = rho > 0
    K[live] = U[live] / rho[live, None]
    dead = np.flatnonzero(~live)
    K[dead, dead] = 1.0
    return DenseKernel(K=_frozen(K), rho=_frozen(rho), U=_frozen(U))


def chain_kernel_from_environment(v: np.ndarray) -> TridiagonalKernel:
    """Kernel with ``b_1 = c_n = 1``, zero diagonal and ``b_i = 1 - c_i = v_i`` inside.

    ``v`` holds ``V_2, ..., V_{n-1}`` so the chain has ``len(v) + 2`` states.
    """
    v = np.asarray(v, dtype=float)
    n = len(v) + 2
    if np.any(v < 0) or np.any(v > 1):
        raise DomainError("environment values must lie in [0, 1]")
    b = np.zeros(n)
    c = np.zeros(n)
    b[0], c[-1] = 1.0, 1.0
    b[1:-1] = v
    c[1:-1] = 1.0 - v
    return TridiagonalKernel(c=_frozen(c), a=_frozen(np.zeros(n)), b=_frozen(b))


def build_chain_kernel_iid(n: int, law: DistributionSpec, rng: SeededRng) -> TridiagonalKernel:
    if n < 2:
        raise DomainError(f"chain needs n >= 2, got {n}")
    lo, hi = law.support
    if lo < 0 or hi > 1:
        raise DomainError(f"chain environment law must live on [0, 1], got support {law.support}")
    v = sample_weights(law, rng.substream(_CHAIN_ENV), n - 2)
    return chain_kernel_from_environment(v)


def reflect_left(v) -> tuple[float, float, float]:
    """``v_- = (v1 + v3, v2, 0)``"""
    return (v[0] + v[2], v[1], 0.0)


def reflect_right(v) -> tuple[float, float, float]:
    """``v_+ = (0, v2, v1 + v3)``"""
    return (0.0, v[1], v[0] + v[2])


def build_chain_kernel_ergodic(n: int, field, boundary: str = "reflect") -> TridiagonalKernel:
    """Chain kernel read off a field of ``(c, a, b)`` triples.

    ``field`` is indexable at ``0..n-1`` (state ``i`` uses ``field[i-1]``).
    Rows ``2..n-1`` copy the field; the end rows are its reflections.
    Only the reflecting boundary is implemented.
    """
    if boundary != "reflect":
        raise DomainError(f"unsupported boundary {boundary!r}; only 'reflect' is implemented")
    if n < 2:
        raise DomainError(f"chain needs n >= 2, got {n}")
    rows = np.array([tuple(field[i]) for i in range(n)], dtype=float)
    if rows.shape != (n, 3):
        raise ValidityError("field entries must be (c, a, b) triples")
    if np.any(rows < 0) or np.max(np.abs(rows.sum(axis=1) - 1)) > DEFAULT_TOLERANCES.row_sum:
        raise ValidityError("field entries must lie in the simplex Lambda_3")
    rows[0] = reflect_right(rows[0])
    rows[-1] = reflect_left(rows[-1])
    return TridiagonalKernel(c=_frozen(rows[:, 0]), a=_frozen(rows[:, 1]), b=_frozen(rows[:, 2]))


def chain_log_weights(kernel: TridiagonalKernel) -> np.ndarray:
    """``log rho_i`` with ``rho_1 = 1`` and ``rho_i = prod_{k<i} b_k / c_{k+1}``."""
    steps = np.log(kernel.b[:-1]) - np.log(kernel.c[1:])
    return np.concatenate([[0.0], np.cumsum(steps)])


def invariant_measure(kernel: Kernel) -> np.ndarray:
    """Reversible invariant probability vector of ``kernel``."""
    if isinstance(kernel, DenseKernel):
        rho = np.asarray(kernel.rho)
        if np.any(np.isnan(rho)):
            raise DomainError("NaN in row sums")
        if np.any(rho == 0):
            # isolated vertices are absorbing: no single invariant law
            raise DomainError("kernel has isolated vertices and is not irreducible")
        return rho / rho.sum()
    logw = chain_log_weights(kernel)
    if np.any(np.isnan(logw)):
        raise DomainError("NaN in chain coefficients")
    return np.exp(logw - logsumexp(logw))


def symmetrize(kernel: Kernel, tol=DEFAULT_TOLERANCES):
    """Symmetric conjugate ``S = D^{1/2} K D^{-1/2}`` with ``D = diag(rho)``.

    Dense kernels give an ``n x n`` array; chain kernels give a
    :class:`SymTridiagonal` with off-diagonal ``sqrt(b_i c_{i+1})``, which
    never touches the (possibly huge) ``rho`` products.
    """
    if isinstance(kernel, TridiagonalKernel):
        return SymTridiagonal(np.array(kernel.a), np.sqrt(kernel.b[:-1] * kernel.c[1:]))
    rho = np.asarray(kernel.rho)
    if np.any(rho <= 0):
        raise DomainError(
            f"cannot symmetrize: rho vanishes at states {(kernel.isolated + 1).tolist()}"
        )
    r = np.sqrt(rho)
    S = kernel.U / r[:, None] / r[None, :]
    S = 0.5 * (S + S.T)
    return S


def tv_distance(mu, nu) -> float:
    mu, nu = np.asarray(mu, dtype=float), np.asarray(nu, dtype=float)
    if mu.shape != nu.shape:
        raise ContractError(f"dimension mismatch: {mu.shape} vs {nu.shape}")
    return 0.5 * float(np.abs(mu - nu).sum())

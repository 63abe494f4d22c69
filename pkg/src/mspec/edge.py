"""Edge functionals: scaled extreme eigenvalues and the Hardy-type chain gap bound."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError
from .kernels import DenseKernel, TridiagonalKernel, chain_log_weights
from .spectra import Spectrum, kernel_spectrum

__all__ = [
    "EdgeReport",
    "dense_edge_scaled",
    "chain_gap_lower_bound",
    "chain_gap_bound_terms",
    "best_chain_gap_lower_bound",
    "sinai_drift",
]


@dataclass(frozen=True)
class EdgeReport:
    n: int
    sigma: Optional[float] = None
    sqrtn_lambda2: Optional[float] = None
    sqrtn_lambdan: Optional[float] = None
    lambda2: Optional[float] = None
    gap_bound: Optional[float] = None


def dense_edge_scaled(kernel: DenseKernel, spectrum: Optional[Spectrum] = None) -> tuple[float, float]:
    """``(sqrt(n) lambda_2, sqrt(n) lambda_n)``"""
    if kernel.n < 2:
        raise DomainError("need n >= 2")
    spectrum = spectrum if spectrum is not None else kernel_spectrum(kernel)
    r = math.sqrt(kernel.n)
    return r * spectrum.lam(2), r * spectrum.lam(spectrum.n)


def _log_cumsum(x: np.ndarray) -> np.ndarray:
    return np.logaddexp.accumulate(x) if len(x) else x


def chain_gap_bound_terms(kernel: TridiagonalKernel, k: int = 2) -> tuple[float, float]:
    """``(log B_k^+, log B_k^-)`` for the chain kernel.

    With ``rho`` the reversible measure (``rho_1 = 1``),

        B_k^+ = max_{i > k} (sum_{j=k+1}^{i} 1 / (rho_j c_j)) (sum_{j >= i} rho_j)
        B_k^- = max_{i < k} (sum_{j=i}^{k-1} 1 / (rho_j b_j)) (sum_{j <= i} rho_j)

    with 1-based states.  All sums are accumulated in log space.
    """
    n = kernel.n
    if not 2 <= k <= n - 1:
        raise DomainError(f"k must satisfy 2 <= k <= n - 1 = {n - 1}, got {k}")
    logrho = chain_log_weights(kernel)
    with np.errstate(divide="ignore"):
        logc = np.log(kernel.c)
        logb = np.log(kernel.b)
    # 0-based: states k .. n-1 on the right, 0 .. k-2 on the left
    right = slice(k, n)
    resist = _log_cumsum(-(logrho[right] + logc[right]))
    tail = np.logaddexp.accumulate(logrho[::-1])[::-1][right]
    log_plus = float(np.max(resist + tail))
    left = slice(0, k - 1)
    resist_l = _log_cumsum((-(logrho[left] + logb[left]))[::-1])[::-1]
    head = np.logaddexp.accumulate(logrho)[left]
    log_minus = float(np.max(resist_l + head))
    return log_plus, log_minus


def chain_gap_lower_bound(kernel: TridiagonalKernel, k: int = 2) -> float:
    """``1 / (4 max(B_k^+, B_k^-))``, a lower bound on ``1 - lambda_2(K)``."""
    log_plus, log_minus = chain_gap_bound_terms(kernel, k)
    return math.exp(-math.log(4.0) - max(log_plus, log_minus))


def best_chain_gap_lower_bound(kernel: TridiagonalKernel) -> tuple[float, int]:
    """Largest bound over all admissible ``k`` and the ``k`` achieving it."""
    best, arg = -math.inf, 2
    for k in range(2, kernel.n):
        val = chain_gap_lower_bound(kernel, k)
        if val > best:
            best, arg = val, k
    return best, arg


def sinai_drift(kernel: TridiagonalKernel) -> float:
    """Empirical mean of ``log(b_i / c_i)`` over interior states (diagnostic only)."""
    b, c = kernel.b[1:-1], kernel.c[1:-1]
    if len(b) == 0:
        return 0.0
    return float(np.mean(np.log(b) - np.log(c)))

"""Return probabilities: exact propagation, Monte Carlo, and trace identities.

Sites are 1-based in this module's public API (``1 <= i <= n``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .kernels import DenseKernel, Kernel, TridiagonalKernel, build_chain_kernel_iid
from .randlaw import DistributionSpec, SeededRng
from .spectra import Spectrum, esd, esd_moment, kernel_spectrum

__all__ = [
    "ReturnProfile",
    "return_probability_exact",
    "return_probabilities",
    "return_probability_mc",
    "trace_identity_check",
    "ergodic_moment_estimate",
    "return_normalization_check",
]

_BLOCK = 256


@dataclass(frozen=True)
class ReturnProfile:
    start: int
    steps: int
    exact: Optional[float] = None
    estimate: Optional[float] = None
    trials: int = 0
    stderr: Optional[float] = None


def _check_site(kernel: Kernel, i: int) -> None:
    if not 1 <= i <= kernel.n:
        raise DomainError(f"site {i} outside 1..{kernel.n}")


def _push_chain(v: np.ndarray, kernel: TridiagonalKernel) -> np.ndarray:
    """Row vector(s) ``v`` times the chain kernel (last axis = states)."""
    out = v * kernel.a
    out[..., 1:] += v[..., :-1] * kernel.b[:-1]
    out[..., :-1] += v[..., 1:] * kernel.c[1:]
    return out


def return_probability_exact(kernel: Kernel, i: int, ell: int) -> float:
    """``(K^ell)_{ii}`` by pushing the indicator of ``i`` through ``K``."""
    _check_site(kernel, i)
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    v = np.zeros(kernel.n)
    v[i - 1] = 1.0
    for _ in range(ell):
        v = _push_chain(v, kernel) if isinstance(kernel, TridiagonalKernel) else v @ kernel.K
    return float(v[i - 1])


def return_probabilities(kernel: Kernel, ell: int) -> np.ndarray:
    """``r_ell(i)`` for every site at once (array index ``i - 1``)."""
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    n = kernel.n
    if ell == 0:
        return np.ones(n)
    if isinstance(kernel, TridiagonalKernel):
        return _chain_returns(kernel, ell)
    out = np.empty(n)
    K = np.asarray(kernel.K)
    for start in range(0, n, _BLOCK):
        idx = np.arange(start, min(start + _BLOCK, n))
        V = np.zeros((len(idx), n))
        V[np.arange(len(idx)), idx] = 1.0
        for _ in range(ell):
            V = V @ K
        out[idx] = V[np.arange(len(idx)), idx]
    return out


def _chain_returns(kernel: TridiagonalKernel, ell: int) -> np.ndarray:
    # a walk of ell steps from i stays in [i - ell, i + ell]: propagate every
    # start at once on a window of width 2 ell + 1 around it
    n, w = kernel.n, ell
    offsets = np.arange(-w, w + 1)
    pos = np.arange(n)[:, None] + offsets[None, :]
    valid = (pos >= 0) & (pos < n)
    p = np.clip(pos, 0, n - 1)
    a = np.where(valid, kernel.a[p], 0.0)
    b = np.where(valid, kernel.b[p], 0.0)
    c = np.where(valid, kernel.c[p], 0.0)
    V = np.zeros((n, 2 * w + 1))
    V[:, w] = 1.0
    for _ in range(ell):
        new = V * a
        new[:, 1:] += V[:, :-1] * b[:, :-1]
        new[:, :-1] += V[:, 1:] * c[:, 1:]
        V = new
    return V[:, w]


def return_probability_mc(kernel: Kernel, i: int, ell: int, trials: int, rng: SeededRng) -> ReturnProfile:
    """Monte Carlo estimate of ``(K^ell)_{ii}`` from ``trials`` independent walks."""
    _check_site(kernel, i)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if ell == 0:
        return ReturnProfile(i, 0, estimate=1.0, trials=trials, stderr=0.0)
    gen = rng.generator
    state = np.full(trials, i - 1)
    if isinstance(kernel, TridiagonalKernel):
        for _ in range(ell):
            u = gen.random(trials)
            down = u < kernel.c[state]
            up = u >= kernel.c[state] + kernel.a[state]
            state = state - down + up
    else:
        cum = np.cumsum(kernel.K, axis=1)
        cum[:, -1] = np.inf
        for _ in range(ell):
            u = gen.random(trials)
            state = (cum[state] <= u[:, None]).sum(axis=1)
    p_hat = float(np.mean(state == i - 1))
    return ReturnProfile(i, ell, estimate=p_hat, trials=trials, stderr=math.sqrt(p_hat * (1 - p_hat) / trials))


def trace_identity_check(kernel: Kernel, ell: int, spectrum: Optional[Spectrum] = None) -> tuple[float, float, float]:
    """``(lhs, rhs, diff)``: ESD moment from eigenvalues vs mean return probability."""
    spectrum = spectrum if spectrum is not None else kernel_spectrum(kernel)
    lhs = esd_moment(esd(spectrum), ell)
    rhs = float(np.mean(return_probabilities(kernel, ell)))
    return lhs, rhs, abs(lhs - rhs)


def ergodic_moment_estimate(law: DistributionSpec, ell: int, n: int, rng: SeededRng) -> float:
    """``(1/n) sum_i r_ell(i)`` for one chain of size ``n`` drawn from ``law``."""
    if ell % 2:
        return 0.0
    kernel = build_chain_kernel_iid(n, law, rng)
    return float(np.mean(return_probabilities(kernel, ell)))


def return_normalization_check(kernel: DenseKernel, k: int) -> float:
    """``n^{-1 + k/2} (sum_i r_k(i) - 1)``"""
    if not isinstance(kernel, DenseKernel):
        raise DomainError("return normalization is defined for the complete-graph model")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    n = kernel.n
    total = float(np.sum(return_probabilities(kernel, k)))
    return n ** (-1 + k / 2) * (total - 1.0)

"""Reference limit laws, Wasserstein distances, and the Levy-distance bound."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import ContractError, DomainError
from .kernels import symmetric_weights
from .pathcomb import catalan
from .randlaw import DistributionSpec, SeededRng, law_moment
from .spectra import EmpiricalDistribution

__all__ = [
    "Semicircle",
    "ArcSine",
    "ReferenceLaw",
    "law_moment_ref",
    "wasserstein_p",
    "levy_cube_bound",
    "levy_distance",
    "build_wigner",
]


@dataclass(frozen=True)
class Semicircle:
    """Semicircle law on ``[-2 sigma, 2 sigma]``."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"Semicircle needs sigma > 0, got {self.sigma}")

    @property
    def support(self) -> tuple[float, float]:
        return (-2 * self.sigma, 2 * self.sigma)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        s2 = self.sigma**2
        return np.sqrt(np.clip(4 * s2 - x * x, 0, None)) / (2 * np.pi * s2)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), -2 * self.sigma, 2 * self.sigma)
        s2 = self.sigma**2
        root = np.sqrt(np.clip(4 * s2 - x * x, 0, None))
        val = (x * root / 2 + 2 * s2 * np.arcsin(x / (2 * self.sigma))) / (2 * np.pi * s2) + 0.5
        return np.clip(val, 0.0, 1.0)

    def quantile(self, t, tol: float = DEFAULT_TOLERANCES.quantile_bisection):
        """Inverse CDF by vectorized bisection (the CDF is strictly increasing)."""
        t = np.asarray(t, dtype=float)
        lo = np.full(t.shape, -2 * self.sigma)
        hi = np.full(t.shape, 2 * self.sigma)
        steps = int(math.ceil(math.log2(4 * self.sigma / tol))) + 1
        for _ in range(steps):
            mid = 0.5 * (lo + hi)
            below = self.cdf(mid) < t
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    def moment(self, k: int) -> float:
        if k % 2:
            return 0.0
        return self.sigma**k * catalan(k // 2)


@dataclass(frozen=True)
class ArcSine:
    """Arc-sine law on ``[-a, a]`` with density ``1 / (pi sqrt(a^2 - x^2))``."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError(f"ArcSine needs a > 0, got {self.a}")

    @property
    def support(self) -> tuple[float, float]:
        return (-self.a, self.a)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < self.a
        out = np.zeros(x.shape)
        out[inside] = 1.0 / (np.pi * np.sqrt(self.a**2 - x[inside] ** 2))
        return out

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), -self.a, self.a)
        return 0.5 + np.arcsin(x / self.a) / np.pi

    def quantile(self, t):
        t = np.asarray(t, dtype=float)
        return self.a * np.sin(np.pi * (t - 0.5))

    def moment(self, k: int) -> float:
        if k % 2:
            return 0.0
        h = k // 2
        return (self.a / 2) ** k * math.comb(k, h)


ReferenceLaw = Union[Semicircle, ArcSine]


def law_moment_ref(law: ReferenceLaw, k: int) -> float:
    if k < 0:
        raise DomainError(f"moment order must be >= 0, got {k}")
    return float(law.moment(int(k)))


@lru_cache(maxsize=32)
def _reference_quantile_grid(law: ReferenceLaw, nodes: int) -> np.ndarray:
    t = (np.arange(nodes) + 0.5) / nodes
    q = np.asarray(law.quantile(t), dtype=float)
    q.setflags(write=False)
    return q


def _empirical_vs_empirical(mu: EmpiricalDistribution, nu: EmpiricalDistribution, p: float) -> float:
    if len(mu.atoms) == len(nu.atoms) and np.allclose(mu.weights, mu.weights[0], rtol=0, atol=1e-15) and np.allclose(
        nu.weights, nu.weights[0], rtol=0, atol=1e-15
    ):
        return float(np.mean(np.abs(mu.atoms - nu.atoms) ** p)) ** (1 / p)
    # quantiles are step functions; integrate exactly over the merged breakpoints
    cuts = np.union1d(np.cumsum(mu.weights)[:-1], np.cumsum(nu.weights)[:-1])
    cuts = np.concatenate([[0.0], cuts[(cuts > 0) & (cuts < 1)], [1.0]])
    mids = 0.5 * (cuts[1:] + cuts[:-1])
    lengths = np.diff(cuts)
    gap = np.abs(mu.quantile(mids) - nu.quantile(mids))
    return float(np.dot(lengths, gap**p)) ** (1 / p)


def wasserstein_p(mu, nu, p: float = 1.0, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``W_p`` on the real line as the ``L^p`` distance of quantile functions.

    Each argument is an :class:`EmpiricalDistribution` or a reference law.
    Two empirical measures are compared exactly.  Otherwise the integral
    over ``t`` uses the midpoint rule on ``tol.wasserstein_nodes`` nodes,
    which never evaluates a quantile at the endpoints 0 and 1.
    """
    if p < 1:
        raise DomainError(f"W_p needs p >= 1, got {p}")
    if isinstance(mu, EmpiricalDistribution) and isinstance(nu, EmpiricalDistribution):
        return _empirical_vs_empirical(mu, nu, p)
    nodes = tol.wasserstein_nodes
    t = (np.arange(nodes) + 0.5) / nodes
    qs = []
    for law in (mu, nu):
        if isinstance(law, EmpiricalDistribution):
            qs.append(law.quantile(t))
        else:
            qs.append(_reference_quantile_grid(law, nodes))
    return float(np.mean(np.abs(qs[0] - qs[1]) ** p)) ** (1 / p)


def levy_cube_bound(A, B) -> float:
    """``(1/n) sum_ij (A_ij - B_ij)^2``, an upper bound on ``L(F_A, F_B)^3``."""
    A, B = np.asarray(A, dtype=float), np.asarray(B, dtype=float)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractError(f"dimension mismatch: {A.shape} vs {B.shape}")
    tol = DEFAULT_TOLERANCES.symmetric_input
    for M in (A, B):
        if np.max(np.abs(M - M.T), initial=0.0) > tol * max(1.0, np.max(np.abs(M), initial=0.0)):
            raise ContractError("levy_cube_bound expects symmetric matrices")
    return float(np.sum((A - B) ** 2)) / A.shape[0]


def levy_distance(mu: EmpiricalDistribution, nu: EmpiricalDistribution, resolution: float = DEFAULT_TOLERANCES.levy_resolution) -> float:
    """Levy distance between two atomic laws, by bisection on epsilon.

    For a trial ``eps`` the condition ``F(x - eps) - eps <= G(x) <= F(x + eps) + eps``
    only has to be checked at the jump points of the two step functions.
    """

    def ok(eps: float) -> bool:
        xs = np.concatenate([nu.atoms, mu.atoms - eps, mu.atoms + eps])
        g = nu.cdf(xs)
        upper = mu.cdf(xs + eps) + eps
        lower = mu.cdf(xs - eps) - eps
        return bool(np.all(g <= upper + 1e-15) and np.all(lower <= g + 1e-15))

    # eps = 1 always works since both CDFs take values in [0, 1]
    lo, hi = 0.0, 1.0
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def build_wigner(n: int, law: DistributionSpec, rng: SeededRng, centered: bool = True) -> np.ndarray:
    """``(U - m) / sqrt(n)`` if ``centered`` else ``U / sqrt(n)``.

    ``U`` is drawn exactly as in :func:`mspec.kernels.build_complete_kernel`,
    so the same seed gives the weights of the corresponding kernel.
    """
    U = symmetric_weights(n, law, rng)
    if centered:
        U = U - law_moment(law, 1)
    return U / math.sqrt(n)

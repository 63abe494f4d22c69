"""Weight and environment laws, seeded sampling, and moment functionals.

A law is one of a handful of frozen dataclasses (``PointMass``, ``Uniform``,
``UniformUnion``, ``Beta``, ``AtomZeroMixture``).  Laws are *not* normalized
to mean one; the complete-graph kernel is invariant under ``U -> t U`` so the
normalization only matters for reported constants, see :func:`normalized_sigma`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Union

import numpy as np
from scipy.special import betaln

from .config import DEFAULT_TOLERANCES
from .errors import DomainError, ParameterError

__all__ = [
    "PointMass",
    "Uniform",
    "UniformUnion",
    "Beta",
    "AtomZeroMixture",
    "DistributionSpec",
    "SeededRng",
    "sample_weight",
    "sample_weights",
    "law_moment",
    "law_variance",
    "normalized_sigma",
    "beta_moment",
    "parse_law",
    "format_law",
]


class SeededRng:
    """Deterministic random stream with addressable substreams.

    ``SeededRng(seed).substream(1, i)`` always yields the same stream no
    matter how much of the parent (or of any sibling) has been consumed, so
    matrix rows and Monte Carlo trials can be drawn independently and in any
    order.
    """

    def __init__(self, seed: int, key: tuple[int, ...] = ()):
        if not 0 <= int(seed) < 2**64:
            raise ParameterError(f"seed must fit in 64 bits, got {seed}")
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def substream(self, *key: int) -> "SeededRng":
        return SeededRng(self.seed, self.key + tuple(key))

    def __repr__(self) -> str:
        return f"SeededRng(seed={self.seed}, key={self.key})"


@dataclass(frozen=True)
class PointMass:
    c: float

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c >= 0):
            raise ParameterError(f"PointMass requires c >= 0, got {self.c}")

    @property
    def support(self) -> tuple[float, float]:
        return (self.c, self.c)

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, float(self.c))

    def raw_moment(self, k: int) -> float:
        return float(self.c) ** k


@dataclass(frozen=True)
class Uniform:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ParameterError("Uniform bounds must be finite")
        if not self.a < self.b:
            raise ParameterError(f"Uniform requires a < b, got ({self.a}, {self.b})")
        if self.a < 0:
            raise ParameterError(f"Uniform support must lie in [0, inf), got a={self.a}")

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.b)

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        return self.a + (self.b - self.a) * gen.random(size)

    def raw_moment(self, k: int) -> float:
        a, b = self.a, self.b
        return (b ** (k + 1) - a ** (k + 1)) / ((k + 1) * (b - a))


@dataclass(frozen=True)
class UniformUnion:
    """Uniform law on ``[a, b] U [c, d]`` (requires ``a < b <= c < d``)."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        vals = (self.a, self.b, self.c, self.d)
        if not all(math.isfinite(v) for v in vals):
            raise ParameterError("UniformUnion bounds must be finite")
        if not (self.a < self.b <= self.c < self.d):
            raise ParameterError(f"UniformUnion requires a < b <= c < d, got {vals}")
        if self.a < 0:
            raise ParameterError(f"UniformUnion support must lie in [0, inf), got a={self.a}")

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.d)

    @property
    def pieces(self) -> tuple[tuple[float, float, float], ...]:
        """``(left, right, probability)`` of each interval."""
        l1, l2 = self.b - self.a, self.d - self.c
        return ((self.a, self.b, l1 / (l1 + l2)), (self.c, self.d, l2 / (l1 + l2)))

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        (a, b, w), (c, d, _) = self.pieces
        u = gen.random(size)
        # one uniform per draw: split [0, 1) proportionally to the two lengths
        left = u < w
        out = np.empty(size)
        out[left] = a + (b - a) * (u[left] / w)
        out[~left] = c + (d - c) * ((u[~left] - w) / (1.0 - w))
        return out

    def raw_moment(self, k: int) -> float:
        return sum(p * Uniform(lo, hi).raw_moment(k) for lo, hi, p in self.pieces)


@dataclass(frozen=True)
class Beta:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ParameterError(f"Beta requires alpha, beta > 0, got ({self.alpha}, {self.beta})")

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, 1.0)

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        return gen.beta(self.alpha, self.beta, size)

    def raw_moment(self, k: int) -> float:
        out = 1.0
        for r in range(k):
            out *= (self.alpha + r) / (self.alpha + self.beta + r)
        return out


@dataclass(frozen=True)
class AtomZeroMixture:
    """``0`` with probability ``1 - p``, otherwise a draw from ``inner``."""

    p: float
    inner: "DistributionSpec" = field(default_factory=lambda: PointMass(1.0))

    def __post_init__(self):
        if not 0 < self.p <= 1:
            raise ParameterError(f"AtomZeroMixture requires p in (0, 1], got {self.p}")

    @property
    def support(self) -> tuple[float, float]:
        lo, hi = self.inner.support
        return (0.0, hi) if self.p < 1 else (lo, hi)

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        keep = gen.random(size) < self.p
        vals = self.inner.sample(gen, size)
        return np.where(keep, vals, 0.0)

    def raw_moment(self, k: int) -> float:
        return self.p * self.inner.raw_moment(k)


DistributionSpec = Union[PointMass, Uniform, UniformUnion, Beta, AtomZeroMixture]
_LAW_TYPES = (PointMass, Uniform, UniformUnion, Beta, AtomZeroMixture)


def _check_law(law) -> None:
    if not isinstance(law, _LAW_TYPES):
        raise ParameterError(f"not a distribution spec: {law!r}")


def sample_weights(law: DistributionSpec, rng: SeededRng, size: int) -> np.ndarray:
    """Draw ``size`` i.i.d. values from ``law`` out of ``rng``'s stream."""
    _check_law(law)
    return law.sample(rng.generator, int(size))


def sample_weight(law: DistributionSpec, rng: SeededRng) -> float:
    return float(sample_weights(law, rng, 1)[0])


def law_moment(law: DistributionSpec, order: int) -> float:
    """Raw moment ``E[X^order]`` in closed form."""
    _check_law(law)
    if order < 0:
        raise ParameterError(f"moment order must be >= 0, got {order}")
    return float(law.raw_moment(int(order)))


def law_variance(law: DistributionSpec) -> float:
    m1 = law_moment(law, 1)
    return max(law_moment(law, 2) - m1 * m1, 0.0)


def normalized_sigma(law: DistributionSpec) -> float:
    """Standard deviation of ``X / E[X]``, i.e. sigma after rescaling to mean one."""
    m = law_moment(law, 1)
    if m <= 0:
        raise DomainError("law has zero mean; sigma is undefined")
    return math.sqrt(law_variance(law)) / m


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> float:
    half, mid = 0.5 * (b - a), 0.5 * (a + b)
    return float(half * np.dot(_GL_WEIGHTS, f(mid + half * _GL_NODES)))


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rtol: float = DEFAULT_TOLERANCES.quad_rtol,
    atol: float = DEFAULT_TOLERANCES.quad_atol,
    depth: int = 40,
) -> float:
    """Adaptive 20-point Gauss-Legendre quadrature of a vectorized ``f``."""
    whole = _gauss_legendre(f, a, b)
    return _refine(f, a, b, whole, rtol, atol, depth)


def _refine(f, a, b, whole, rtol, atol, depth):
    m = 0.5 * (a + b)
    left, right = _gauss_legendre(f, a, m), _gauss_legendre(f, m, b)
    if depth <= 0 or abs(left + right - whole) <= max(atol, rtol * abs(left + right)):
        return left + right
    return _refine(f, a, m, left, rtol, atol / 2, depth - 1) + _refine(
        f, m, b, right, rtol, atol / 2, depth - 1
    )


def beta_moment(law: DistributionSpec, m: int, n: int) -> float:
    """``E[V^m (1 - V)^n]`` for a law supported in ``[0, 1]``."""
    _check_law(law)
    if m < 0 or n < 0:
        raise ParameterError(f"beta_moment exponents must be >= 0, got ({m}, {n})")
    lo, hi = law.support
    if lo < 0 or hi > 1:
        raise DomainError(f"beta_moment needs support in [0, 1], got {law.support}")
    return _beta_moment(law, int(m), int(n))


@lru_cache(maxsize=4096)
def _beta_moment(law, m: int, n: int) -> float:
    if isinstance(law, PointMass):
        return law.c**m * (1.0 - law.c) ** n
    if isinstance(law, Beta):
        return math.exp(betaln(law.alpha + m, law.beta + n) - betaln(law.alpha, law.beta))
    if isinstance(law, AtomZeroMixture):
        at_zero = 1.0 if m == 0 else 0.0
        return (1.0 - law.p) * at_zero + law.p * _beta_moment(law.inner, m, n)
    if isinstance(law, Uniform) and law.a == 0 and law.b == 1:
        return math.factorial(m) * math.factorial(n) / math.factorial(m + n + 1)
    if isinstance(law, Uniform):
        pieces = ((law.a, law.b, 1.0),)
    else:
        pieces = law.pieces
    total = 0.0
    for lo, hi, p in pieces:
        integral = integrate_adaptive(lambda x: x**m * (1.0 - x) ** n, lo, hi)
        total += p * integral / (hi - lo)
    return total


def parse_law(text: str) -> DistributionSpec:
    """Parse the CLI law syntax.

    ``pointmass:c``, ``uniform:a,b``, ``uniform2:a,b,c,d``, ``beta:alpha,beta``
    and ``atom0:p,<inner>`` where ``<inner>`` is itself a law string.
    """
    name, sep, rest = text.strip().partition(":")
    if not sep:
        raise ParameterError(f"law must look like name:params, got {text!r}")
    name = name.lower()
    try:
        if name == "atom0":
            p, sep, inner = rest.partition(",")
            if not sep:
                raise ParameterError(f"atom0 needs p,<inner law>, got {text!r}")
            return AtomZeroMixture(float(p), parse_law(inner))
        args = [float(x) for x in rest.split(",")]
    except ValueError as exc:
        raise ParameterError(f"cannot parse law {text!r}: {exc}") from None
    ctors = {"pointmass": (PointMass, 1), "uniform": (Uniform, 2), "uniform2": (UniformUnion, 4), "beta": (Beta, 2)}
    if name not in ctors:
        raise ParameterError(f"unknown law {name!r}")
    ctor, arity = ctors[name]
    if len(args) != arity:
        raise ParameterError(f"{name} takes {arity} parameter(s), got {len(args)}")
    return ctor(*args)


def format_law(law: DistributionSpec) -> str:
    if isinstance(law, PointMass):
        return f"pointmass:{law.c!r}"
    if isinstance(law, Uniform):
        return f"uniform:{law.a!r},{law.b!r}"
    if isinstance(law, UniformUnion):
        return f"uniform2:{law.a!r},{law.b!r},{law.c!r},{law.d!r}"
    if isinstance(law, Beta):
        return f"beta:{law.alpha!r},{law.beta!r}"
    return f"atom0:{law.p!r},{format_law(law.inner)}"

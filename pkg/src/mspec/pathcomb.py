"""Loop paths of the simple walk on Z and the chain limit-moment formula.

The ``2k``-th moment of the limiting spectral law of the i.i.d. chain is a
sum over loop paths ``gamma`` of length ``2k`` of

    prod_i E[ V^{N(i)} (1 - V)^{N(i-1)} ]

where ``N(i)`` counts the up-steps ``i -> i+1`` of ``gamma``.  Two routes are
provided: brute-force path enumeration, and a sum over crossing profiles
weighted by the number of paths sharing each profile.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Mapping

from .config import CATALAN_MAX_R, LOOP_PATH_MAX_K
from .errors import DomainError, SizeError
from .randlaw import DistributionSpec, beta_moment

__all__ = [
    "LoopPath",
    "iter_loop_paths",
    "enumerate_loop_paths",
    "crossing_counts",
    "iter_crossing_profiles",
    "profile_path_count",
    "chain_limit_moment",
    "chain_limit_moment_joint",
    "chain_moment",
    "catalan",
]

Profile = Mapping[int, int]
# joint(site_exponents) = E[prod_i V_i^{up_i} (1 - V_i)^{down_i}] where
# site_exponents maps site i -> (up_i, down_i) = (N(i), N(i-1))
JointMoment = Callable[[Mapping[int, tuple[int, int]]], float]


@dataclass(frozen=True)
class LoopPath:
    gamma: tuple[int, ...]

    def __post_init__(self):
        g = self.gamma
        if len(g) < 1 or len(g) % 2 != 1 or g[0] != 0 or g[-1] != 0:
            raise DomainError(f"not a loop path: {g}")
        if any(abs(b - a) != 1 for a, b in zip(g, g[1:])):
            raise DomainError(f"loop path must take unit steps: {g}")

    @property
    def k(self) -> int:
        return (len(self.gamma) - 1) // 2

    @cached_property
    def crossings(self) -> dict[int, int]:
        return crossing_counts(self)

    @property
    def height(self) -> int:
        """``max |gamma_l|``"""
        return max(abs(x) for x in self.gamma)

    @property
    def is_nonnegative(self) -> bool:
        return min(self.gamma) >= 0


def crossing_counts(path) -> dict[int, int]:
    """``N(i)`` = number of steps ``(i, i+1)``; only nonzero levels are listed."""
    g = path.gamma if isinstance(path, LoopPath) else tuple(path)
    out: dict[int, int] = {}
    for a, b in zip(g, g[1:]):
        if b == a + 1:
            out[a] = out.get(a, 0) + 1
    return out


def _check_k(k: int) -> None:
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if k > LOOP_PATH_MAX_K:
        raise SizeError(f"loop-path enumeration is capped at k = {LOOP_PATH_MAX_K}, got {k}")


def iter_loop_paths(k: int) -> Iterator[tuple[int, ...]]:
    """All loop paths of length ``2k`` in lexicographic order."""
    _check_k(k)
    length = 2 * k
    path = [0] * (length + 1)

    def walk(t: int) -> Iterator[tuple[int, ...]]:
        if t == length:
            yield tuple(path)
            return
        h = path[t]
        left = length - t - 1
        for step in (-1, 1):
            nxt = h + step
            if abs(nxt) <= left:
                path[t + 1] = nxt
                yield from walk(t + 1)

    yield from walk(0)


def enumerate_loop_paths(k: int) -> list[LoopPath]:
    return [LoopPath(g) for g in iter_loop_paths(k)]


def _compositions(total: int) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


def iter_crossing_profiles(k: int) -> Iterator[dict[int, int]]:
    """Every crossing profile ``{i: N(i)}`` realized by some path in ``D_k``.

    Realizable profiles are exactly those whose support is a run of
    consecutive levels containing 0 or -1 with positive counts summing to k.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    for r in range(k + 1):
        for right in _compositions(r):
            for left in _compositions(k - r):
                prof = {i: c for i, c in enumerate(right)}
                prof.update({-1 - i: c for i, c in enumerate(left)})
                yield prof


def profile_path_count(profile: Profile) -> int:
    """Number of loop paths with the given up-crossing profile.

    Order the departures from each visited site: at 0 any interleaving of
    the ``N(0)`` up and ``N(-1)`` down departures; at a site ``i > 0`` (resp.
    ``i < 0``) the last departure is forced down (resp. up).
    """
    N = lambda i: profile.get(i, 0)  # noqa: E731
    count = math.comb(N(0) + N(-1), N(0))
    i = 1
    while N(i - 1):
        count *= math.comb(N(i) + N(i - 1) - 1, N(i))
        i += 1
    i = -1
    while N(i):
        count *= math.comb(N(i) + N(i - 1) - 1, N(i - 1))
        i -= 1
    return count


def _site_exponents(profile: Profile) -> dict[int, tuple[int, int]]:
    sites = set(profile) | {i + 1 for i in profile}
    return {i: (profile.get(i, 0), profile.get(i - 1, 0)) for i in sites}


def chain_limit_moment_joint(k: int, joint: JointMoment, method: str = "paths") -> float:
    """``2k``-th limit moment for a stationary environment given its joint moments.

    ``joint`` receives ``{site: (N(site), N(site - 1))}`` and must return
    ``E[prod V_site^{N(site)} (1 - V_site)^{N(site-1)}]``.
    """
    if method == "paths":
        total = 0.0
        for g in iter_loop_paths(k):
            total += joint(_site_exponents(crossing_counts(g)))
        return total
    if method == "profiles":
        if k < 1:
            raise DomainError(f"k must be >= 1, got {k}")
        return sum(profile_path_count(p) * joint(_site_exponents(p)) for p in iter_crossing_profiles(k))
    raise DomainError(f"unknown method {method!r}")


def chain_limit_moment(law: DistributionSpec, k: int, method: str = "paths") -> float:
    """``2k``-th moment of the limiting spectral law for i.i.d. environment ``law``.

    ``method="paths"`` enumerates ``D_k`` (capped at ``k = 12``);
    ``method="profiles"`` sums over crossing profiles and is much faster.
    """
    if method == "paths":
        _check_k(k)
    table: dict[tuple[int, int], float] = {}

    def site(m: int, n: int) -> float:
        if (m, n) not in table:
            table[(m, n)] = beta_moment(law, m, n)
        return table[(m, n)]

    def joint(exps: Mapping[int, tuple[int, int]]) -> float:
        out = 1.0
        for up, down in exps.values():
            out *= site(up, down)
        return out

    return chain_limit_moment_joint(k, joint, method)


def chain_moment(law: DistributionSpec, ell: int, method: str = "paths") -> float:
    """Limit moment of order ``ell``; odd orders vanish by symmetry."""
    if ell < 0:
        raise DomainError(f"moment order must be >= 0, got {ell}")
    if ell == 0:
        return 1.0
    if ell % 2:
        return 0.0
    return chain_limit_moment(law, ell // 2, method)


def catalan(r: int) -> int:
    if r < 0:
        raise DomainError(f"catalan needs r >= 0, got {r}")
    if r > CATALAN_MAX_R:
        raise SizeError(f"catalan({r}) exceeds the 64-bit cap r <= {CATALAN_MAX_R}")
    return math.comb(2 * r, r) // (r + 1)

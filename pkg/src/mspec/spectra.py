"""Symmetric eigensolvers, kernel spectra and empirical spectral distributions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _linalg
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import ContractError, DomainError, NumericError
from .kernels import DenseKernel, Kernel, TridiagonalKernel, symmetrize

__all__ = [
    "Spectrum",
    "EmpiricalDistribution",
    "eig_sym_tridiagonal",
    "eig_sym_dense",
    "sturm_count",
    "kernel_spectrum",
    "esd",
    "esd_moment",
    "spectral_gap",
    "varsigma",
]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Real eigenvalues with multiplicity, stored in ascending order.

    ``spec.lam(1)`` is the largest eigenvalue and ``spec.lam(n)`` the
    smallest, following the usual ``lambda_n <= ... <= lambda_1`` labelling.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float))
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return len(self.values)

    def lam(self, k: int) -> float:
        if not 1 <= k <= self.n:
            raise IndexError(f"eigenvalue index {k} outside 1..{self.n}")
        return float(self.values[self.n - k])

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Finite atomic probability measure on the real line."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if atoms.shape != weights.shape or atoms.ndim != 1 or len(atoms) == 0:
            raise ContractError("atoms and weights must be matching non-empty vectors")
        if np.any(weights <= 0):
            raise ContractError("weights must be positive")
        if abs(weights.sum() - 1.0) > DEFAULT_TOLERANCES.probability_sum:
            raise ContractError(f"weights sum to {weights.sum()!r}, not 1")
        order = np.argsort(atoms, kind="stable")
        atoms, weights = atoms[order], weights[order]
        atoms.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, atoms) -> "EmpiricalDistribution":
        atoms = np.asarray(atoms, dtype=float)
        return cls(atoms, np.full(len(atoms), 1.0 / len(atoms)))

    def cdf(self, x):
        cum = np.cumsum(self.weights)
        idx = np.searchsorted(self.atoms, x, side="right")
        return np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0.0)

    def quantile(self, t):
        """Left-continuous generalized inverse ``inf{x : F(x) >= t}``."""
        cum = np.cumsum(self.weights)
        cum[-1] = 1.0
        idx = np.searchsorted(cum, t, side="left")
        return self.atoms[np.clip(idx, 0, len(self.atoms) - 1)]

    def moment(self, ell: int) -> float:
        return float(np.dot(self.weights, self.atoms**ell))

    def mix(self, other: "EmpiricalDistribution", w: float) -> "EmpiricalDistribution":
        """``(1 - w) * self + w * other``"""
        return EmpiricalDistribution(
            np.concatenate([self.atoms, other.atoms]),
            np.concatenate([(1 - w) * self.weights, w * other.weights]),
        )

    def merged(self) -> "EmpiricalDistribution":
        """Same measure with equal atoms collapsed into one."""
        atoms, inv = np.unique(self.atoms, return_inverse=True)
        weights = np.bincount(inv, weights=self.weights)
        return EmpiricalDistribution(atoms, weights / weights.sum())


def eig_sym_tridiagonal(diag, offdiag, tol: Tolerances = DEFAULT_TOLERANCES, validate: bool = True) -> Spectrum:
    """All eigenvalues of the symmetric tridiagonal matrix ``(diag, offdiag)``.

    Implicit-shift QL, eigenvalues only, O(n^2).  With ``validate`` five
    eigenvalues spread over the spectrum are checked against Sturm counts at
    ``lambda +- tol.eig_accuracy * max|entry|``.
    """
    d = np.array(diag, dtype=float)
    off = np.array(offdiag, dtype=float)
    n = len(d)
    if n == 0:
        raise ContractError("empty matrix")
    if len(off) != n - 1:
        raise ContractError(f"offdiag must have length {n - 1}, got {len(off)}")
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(off))):
        raise ContractError("non-finite entries")
    e = np.zeros(n)
    e[: n - 1] = off
    bad = _linalg.tql_eigenvalues(d, e, tol.max_ql_sweeps)
    if bad >= 0:
        raise NumericError(f"implicit QL did not converge for eigenvalue {bad} within {tol.max_ql_sweeps} sweeps")
    spec = Spectrum(d)
    if validate:
        _validate_sturm(np.asarray(diag, float), np.asarray(offdiag, float), spec.values, tol)
    return spec


def sturm_count(diag, offdiag, x: float) -> int:
    """Number of eigenvalues strictly below ``x``."""
    return int(_linalg.sturm_count(np.asarray(diag, float), np.asarray(offdiag, float), float(x)))


def _validate_sturm(diag, offdiag, values, tol):
    n = len(values)
    scale = max(np.max(np.abs(diag)), np.max(np.abs(offdiag)) if n > 1 else 0.0, 1e-300)
    slack = tol.eig_accuracy * scale
    for k in sorted(set(np.linspace(0, n - 1, 5).round().astype(int))):
        lam = values[k]
        below = _linalg.sturm_count(diag, offdiag, lam - slack)
        upto = _linalg.sturm_count(diag, offdiag, lam + slack)
        if not (below <= k < upto):
            raise NumericError(f"eigenvalue #{k} = {lam!r} fails the Sturm count check")


def eig_sym_dense(S, tol: Tolerances = DEFAULT_TOLERANCES, validate: bool = True) -> Spectrum:
    """Eigenvalues of a dense symmetric matrix: Householder reduction, then QL."""
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {S.shape}")
    scale = max(float(np.max(np.abs(S))), 1.0) if S.size else 1.0
    if S.size and np.max(np.abs(S - S.T)) > tol.symmetric_input * scale:
        raise ContractError("matrix is not symmetric")
    if S.shape[0] == 1:
        return Spectrum(S[0].copy())
    d, e = _linalg.householder_tridiagonal(np.array(S, order="C"))
    return eig_sym_tridiagonal(d, e, tol, validate)


def kernel_spectrum(kernel: Kernel, tol: Tolerances = DEFAULT_TOLERANCES) -> Spectrum:
    """Spectrum of a reversible kernel through its symmetric conjugate.

    Isolated vertices of a dense kernel each contribute an eigenvalue 1 and
    are split off before symmetrizing the remaining block.
    """
    if isinstance(kernel, TridiagonalKernel):
        diag, off = symmetrize(kernel)
        return eig_sym_tridiagonal(diag, off, tol)
    if not isinstance(kernel, DenseKernel):
        raise ContractError(f"not a kernel: {type(kernel).__name__}")
    dead = kernel.isolated
    if len(dead):
        live = np.flatnonzero(kernel.rho > 0)
        parts = [np.ones(len(dead))]
        if len(live):
            sub = DenseKernel(kernel.K[np.ix_(live, live)], kernel.rho[live], kernel.U[np.ix_(live, live)])
            parts.append(kernel_spectrum(sub, tol).values)
        return Spectrum(np.concatenate(parts))
    return eig_sym_dense(symmetrize(kernel), tol)


def esd(spectrum: Spectrum, scale: float = 1.0, trim_top: bool = False) -> EmpiricalDistribution:
    """ESD of ``scale * K``; ``trim_top`` drops ``lambda_1`` and reweights by ``1/(n-1)``."""
    vals = spectrum.values
    if trim_top:
        if len(vals) < 2:
            raise DomainError("cannot trim the top eigenvalue of a 1 x 1 spectrum")
        vals = vals[:-1]
    return EmpiricalDistribution.uniform(scale * vals)


def esd_moment(dist: EmpiricalDistribution, ell: int) -> float:
    if ell == 0:
        return 1.0
    return dist.moment(ell)


def spectral_gap(spectrum: Spectrum) -> float:
    """``1 - lambda_2``"""
    if spectrum.n < 2:
        raise DomainError("spectral gap needs n >= 2")
    return 1.0 - spectrum.lam(2)


def varsigma(spectrum: Spectrum) -> float:
    """``1 - max(-lambda_n, lambda_2)``, the discrete-time rate."""
    if spectrum.n < 2:
        raise DomainError("varsigma needs n >= 2")
    return 1.0 - max(-spectrum.lam(spectrum.n), spectrum.lam(2))

"""End-to-end acceptance gate: one test per criterion, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per
criterion in the terminal summary.
"""
import itertools
import math
import time

import numpy as np
import pytest

from mspec.edge import chain_gap_lower_bound
from mspec.kernels import build_chain_kernel_iid, build_complete_kernel, invariant_measure, tv_distance
from mspec.limitlaws import Semicircle, levy_cube_bound, levy_distance, wasserstein_p
from mspec.pathcomb import LoopPath, catalan, chain_limit_moment, iter_loop_paths
from mspec.randlaw import Beta, PointMass, SeededRng, Uniform, UniformUnion, normalized_sigma
from mspec.spectra import EmpiricalDistribution, eig_sym_dense, eig_sym_tridiagonal, esd, esd_moment, kernel_spectrum, spectral_gap
from mspec.walks import return_normalization_check, return_probabilities

LAW = Uniform(0, 2)
SIGMA = normalized_sigma(LAW)  # sqrt(1/3)
SEMI = Semicircle(SIGMA)
SEEDS = (1, 2, 3)


@pytest.fixture(scope="module")
def dense_2000():
    """Kernels and spectra at n = 2000 for the three seeds, shared by #4 to #7."""
    t0 = time.perf_counter()
    out = {}
    for s in SEEDS:
        k = build_complete_kernel(2000, LAW, SeededRng(s))
        out[s] = (k, kernel_spectrum(k))
    return out, time.perf_counter() - t0


def test_01_exact_combinatorics(acceptance):
    t0 = time.perf_counter()
    ok = True
    for k in range(1, 9):
        paths = list(iter_loop_paths(k))
        ok &= len(paths) == math.comb(2 * k, k)
        ok &= sum(LoopPath(g).is_nonnegative for g in paths) == catalan(k)
    worst = max(abs(chain_limit_moment(PointMass(0.5), k) - math.comb(2 * k, k) / 4**k) for k in range(1, 7))
    dt = time.perf_counter() - t0
    acceptance(1, ok and worst <= 1e-12 and dt < 10, f"path counts ok={ok}, arc-sine moment err={worst:.1e}, {dt:.1f}s")


def test_02_trace_identity(acceptance):
    t0 = time.perf_counter()
    worst = 0.0
    for k in (build_complete_kernel(200, LAW, SeededRng(1)), build_chain_kernel_iid(500, Uniform(0, 1), SeededRng(1))):
        dist = esd(kernel_spectrum(k))
        for ell in range(0, 7):
            worst = max(worst, abs(esd_moment(dist, ell) - float(np.mean(return_probabilities(k, ell)))))
    dt = time.perf_counter() - t0
    acceptance(2, worst <= 1e-8 and dt < 30, f"max |moment - mean return| = {worst:.1e}, {dt:.1f}s")


def test_03_semicircle_bulk(acceptance):
    t0 = time.perf_counter()
    table = {}
    for s in SEEDS:
        for n in (250, 500, 1000):
            spec = kernel_spectrum(build_complete_kernel(n, LAW, SeededRng(s)))
            table[s, n] = wasserstein_p(esd(spec, scale=math.sqrt(n), trim_top=True), SEMI, 1)
    decreasing = all(table[s, 250] > table[s, 500] > table[s, 1000] for s in SEEDS)
    at_1000 = max(table[s, 1000] for s in SEEDS)
    dt = time.perf_counter() - t0
    acceptance(3, decreasing and at_1000 <= 0.08 and dt < 300, f"decreasing={decreasing}, max W1 at n=1000 = {at_1000:.4f}, {dt:.1f}s")


def test_04_edge(dense_2000, acceptance):
    data, build_time = dense_2000
    devs = []
    for s, (k, spec) in data.items():
        r = math.sqrt(k.n)
        devs.append(abs(r * spec.lam(2) - 2 * SIGMA) / (2 * SIGMA))
        devs.append(abs(r * spec.lam(k.n) + 2 * SIGMA) / (2 * SIGMA))
    worst = max(devs)
    acceptance(4, worst <= 0.15 and build_time < 1200, f"max relative edge deviation = {worst:.3f}, {build_time:.1f}s")


def test_05_wasserstein_regimes(dense_2000, acceptance):
    data, _ = dense_2000
    w1, w2, w3 = [], [], []
    for s, (k, spec) in data.items():
        full = esd(spec, scale=math.sqrt(k.n))
        w1.append(wasserstein_p(full, SEMI, 1))
        w2.append(wasserstein_p(full, SEMI, 2))
        w3.append(wasserstein_p(full, SEMI, 3))
    ok = max(w1) <= 0.1 and max(abs(x - 1) for x in w2) <= 0.15 and min(w3) >= 2
    acceptance(5, ok, f"W1 max={max(w1):.4f}, W2 range=[{min(w2):.3f}, {max(w2):.3f}], W3 min={min(w3):.2f}")


def test_06_invariant_measure(dense_2000, acceptance):
    data, _ = dense_2000
    tvs = [tv_distance(invariant_measure(k), np.full(k.n, 1 / k.n)) for k, _ in data.values()]
    acceptance(6, max(tvs) <= 0.05, f"max TV to uniform = {max(tvs):.4f}")


def test_07_return_normalization(dense_2000, acceptance):
    data, _ = dense_2000
    vals = [return_normalization_check(k, 2) for k, _ in data.values()]
    worst = max(abs(v - SIGMA**2) for v in vals)
    acceptance(7, worst <= 0.1, f"k=2 functional range=[{min(vals):.4f}, {max(vals):.4f}] vs 1/3")


def test_08_chain_moments(acceptance):
    t0 = time.perf_counter()
    law = Uniform(0, 1)
    worst = 0.0
    for s in SEEDS:
        dist = esd(kernel_spectrum(build_chain_kernel_iid(5000, law, SeededRng(s))))
        for k in (1, 2, 3):
            worst = max(worst, abs(esd_moment(dist, 2 * k) - chain_limit_moment(law, k)))
    dt = time.perf_counter() - t0
    acceptance(8, worst <= 0.01 and dt < 120, f"max |ESD moment - limit moment| = {worst:.4f}, {dt:.1f}s")


def test_09_chain_edge(acceptance):
    lam_flat = [kernel_spectrum(build_chain_kernel_iid(5000, Uniform(0, 1), SeededRng(s))).lam(2) for s in SEEDS]
    lam_quarter = [
        kernel_spectrum(build_chain_kernel_iid(n, Uniform(0, 0.25), SeededRng(s))).lam(2) for n in (500, 2000, 5000) for s in SEEDS
    ]
    ok = min(lam_flat) >= 0.995 and max(lam_quarter) <= 11 / 12
    acceptance(9, ok, f"Uniform(0,1) min lambda2 = {min(lam_flat):.6f}; Uniform(0,1/4) max lambda2 = {max(lam_quarter):.4f}")


def test_10_bound_soundness(acceptance):
    laws = [PointMass(0.3), Uniform(0, 1), Uniform(0, 0.25), UniformUnion(0, 0.25, 0.75, 1), Beta(2, 5)]
    violations = 0
    for idx in range(50):
        n = (50, 200)[idx % 2]
        k = build_chain_kernel_iid(n, laws[idx % len(laws)], SeededRng(500 + idx))
        gap = spectral_gap(kernel_spectrum(k))
        violations += chain_gap_lower_bound(k, 2) > gap + 1e-9
    acceptance(10, violations == 0, f"{violations} violations on 50 random chains")


def test_11_metric_oracles(acceptance):
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(50):
        m = int(rng.integers(1, 6))
        x, y = rng.normal(size=m), rng.normal(size=m)
        for p in (1, 2, 3):
            brute = min(np.mean(np.abs(x - y[list(perm)]) ** p) for perm in itertools.permutations(range(m))) ** (1 / p)
            got = wasserstein_p(EmpiricalDistribution.uniform(x), EmpiricalDistribution.uniform(y), p)
            worst = max(worst, abs(got - brute))
    dominated = 0
    for _ in range(100):
        G, H = rng.normal(size=(20, 20)), rng.normal(size=(20, 20))
        A = G + G.T
        B = A + 0.05 * (H + H.T)  # nearby pairs keep the bound from being trivially loose
        L = levy_distance(esd(eig_sym_dense(A)), esd(eig_sym_dense(B)))
        dominated += L**3 <= levy_cube_bound(A, B)
    acceptance(11, worst <= 1e-10 and dominated == 100, f"W_p vs brute force err={worst:.1e}; Levy bound held {dominated}/100")


def test_12_eigensolver_oracle(acceptance):
    rng = np.random.default_rng(12)
    worst_agree = worst_ident = 0.0
    for _ in range(100):
        d, e = rng.normal(size=50), rng.normal(size=49)
        a = eig_sym_tridiagonal(d, e).values
        T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        Q, _ = np.linalg.qr(rng.normal(size=(50, 50)))
        A = Q @ T @ Q.T
        b = eig_sym_dense((A + A.T) / 2).values
        worst_agree = max(worst_agree, float(np.max(np.abs(a - b))))
        worst_ident = max(worst_ident, abs(a.sum() - np.trace(T)), abs(np.sum(a**2) - np.sum(T**2)) / np.sum(T**2))
    ok = worst_agree <= 1e-9 and worst_ident <= 1e-9
    acceptance(12, ok, f"tridiagonal vs dense err={worst_agree:.1e}; trace/Frobenius err={worst_ident:.1e}")

import numpy as np
import pytest

from mspec.errors import DomainError
from mspec.kernels import build_chain_kernel_iid, build_complete_kernel
from mspec.pathcomb import chain_moment
from mspec.randlaw import PointMass, SeededRng, Uniform
from mspec.walks import (
    ergodic_moment_estimate,
    return_normalization_check,
    return_probabilities,
    return_probability_exact,
    return_probability_mc,
    trace_identity_check,
)


def test_exact_examples():
    two = build_complete_kernel(2, PointMass(1), SeededRng(0))
    assert return_probability_exact(two, 1, 0) == 1
    assert return_probability_exact(two, 1, 1) == 0.5
    assert return_probability_exact(two, 2, 3) == 0.5
    chain2 = build_chain_kernel_iid(2, Uniform(0, 1), SeededRng(0))
    assert return_probability_exact(chain2, 1, 1) == 0
    assert return_probability_exact(chain2, 1, 2) == 1
    with pytest.raises(DomainError):
        return_probability_exact(two, 3, 1)


def test_chain_odd_returns_vanish():
    k = build_chain_kernel_iid(40, Uniform(0, 1), SeededRng(2))
    for ell in (1, 3, 5):
        assert np.all(return_probabilities(k, ell) == 0)


@pytest.mark.parametrize("ell", [0, 1, 2, 5, 8])
def test_vectorized_matches_matrix_powers(ell):
    for k in (build_complete_kernel(30, Uniform(0, 2), SeededRng(1)), build_chain_kernel_iid(30, Uniform(0, 1), SeededRng(1))):
        P = np.linalg.matrix_power(k.to_dense(), ell)
        assert np.max(np.abs(return_probabilities(k, ell) - np.diag(P))) <= 1e-13
        assert return_probability_exact(k, 7, ell) == pytest.approx(P[6, 6], abs=1e-14)


def test_dense_block_boundary():
    # more sites than one propagation block
    k = build_complete_kernel(300, Uniform(0, 2), SeededRng(4))
    P = k.to_dense() @ k.to_dense()
    assert np.allclose(return_probabilities(k, 2), np.diag(P), atol=1e-14, rtol=0)


def test_monte_carlo_within_four_standard_errors():
    k = build_complete_kernel(50, Uniform(0, 2), SeededRng(3))
    exact = return_probabilities(k, 4)
    hits = 0
    for t in range(100):
        i = 1 + (7 * t) % 50
        prof = return_probability_mc(k, i, 4, 4000, SeededRng(3).substream(9, t))
        se = np.sqrt(exact[i - 1] * (1 - exact[i - 1]) / prof.trials)
        hits += abs(prof.estimate - exact[i - 1]) <= 4 * se
    assert hits >= 95


def test_monte_carlo_chain():
    k = build_chain_kernel_iid(20, Uniform(0, 1), SeededRng(6))
    exact = return_probability_exact(k, 10, 6)
    prof = return_probability_mc(k, 10, 6, 20000, SeededRng(1))
    assert abs(prof.estimate - exact) <= 4 * np.sqrt(exact * (1 - exact) / 20000)
    assert return_probability_mc(k, 10, 5, 100, SeededRng(1)).estimate == 0


@pytest.mark.parametrize("ell", range(0, 7))
def test_trace_identity(ell):
    for k in (build_complete_kernel(200, Uniform(0, 2), SeededRng(5)), build_chain_kernel_iid(500, Uniform(0, 1), SeededRng(5))):
        lhs, rhs, diff = trace_identity_check(k, ell)
        assert diff <= 1e-10


def test_ergodic_estimate_near_limit():
    est = ergodic_moment_estimate(Uniform(0, 1), 2, 5000, SeededRng(1))
    assert abs(est - chain_moment(Uniform(0, 1), 2)) <= 0.01
    assert ergodic_moment_estimate(Uniform(0, 1), 3, 100, SeededRng(1)) == 0
    # point mass is deterministic: only the boundary sites differ from the limit
    est = ergodic_moment_estimate(PointMass(0.5), 4, 2000, SeededRng(0))
    assert abs(est - chain_moment(PointMass(0.5), 4)) <= 4 / 2000


def test_interior_returns_do_not_see_system_size():
    small = build_chain_kernel_iid(200, Uniform(0, 1), SeededRng(13))
    big = build_chain_kernel_iid(400, Uniform(0, 1), SeededRng(13))
    ell = 8
    a = return_probabilities(small, ell)
    b = return_probabilities(big, ell)
    # sites 1-based in [1, n - ell - 1] never reach the right boundary of the smaller chain
    interior = slice(0, 200 - ell - 1)
    assert np.max(np.abs(a[interior] - b[interior])) <= 1e-15


def test_return_normalization_examples():
    two = build_complete_kernel(2, PointMass(1), SeededRng(0))
    assert return_normalization_check(two, 2) == 0
    flat = build_complete_kernel(10, PointMass(3), SeededRng(0))
    # K = J / n: r_k(i) = 1/n for every k >= 1
    assert abs(return_normalization_check(flat, 3)) <= 1e-13
    with pytest.raises(DomainError):
        return_normalization_check(build_chain_kernel_iid(5, Uniform(0, 1), SeededRng(0)), 2)

import math
from collections import Counter

import numpy as np
import pytest

from mspec.errors import DomainError, SizeError
from mspec.pathcomb import (
    LoopPath,
    catalan,
    chain_limit_moment,
    chain_limit_moment_joint,
    chain_moment,
    crossing_counts,
    enumerate_loop_paths,
    iter_crossing_profiles,
    iter_loop_paths,
    profile_path_count,
)
from mspec.randlaw import Beta, PointMass, Uniform, UniformUnion, beta_moment


def test_small_path_sets():
    assert list(iter_loop_paths(1)) == [(0, -1, 0), (0, 1, 0)]
    assert len(enumerate_loop_paths(2)) == 6


@pytest.mark.parametrize("k", range(1, 9))
def test_path_counts(k):
    paths = list(iter_loop_paths(k))
    assert len(paths) == math.comb(2 * k, k)
    assert len(set(paths)) == len(paths)
    assert paths == sorted(paths)
    nonneg = sum(LoopPath(g).is_nonnegative for g in paths)
    assert nonneg == catalan(k)


def test_crossing_counts_examples():
    assert crossing_counts((0, 1, 0)) == {0: 1}
    assert crossing_counts((0, -1, 0)) == {-1: 1}
    assert crossing_counts((0, 1, 2, 1, 0, 1, 0)) == {0: 2, 1: 1}
    p = LoopPath((0, -1, -2, -1, 0))
    assert p.k == 2 and p.height == 2 and not p.is_nonnegative
    assert p.crossings == {-1: 1, -2: 1}


def test_loop_path_validation():
    with pytest.raises(DomainError):
        LoopPath((0, 1))
    with pytest.raises(DomainError):
        LoopPath((0, 2, 0))


def test_crossings_sum_to_k():
    for g in iter_loop_paths(6):
        assert sum(crossing_counts(g).values()) == 6


def test_point_mass_half_central_binomial():
    for k in range(1, 9):
        assert chain_limit_moment(PointMass(0.5), k) == pytest.approx(math.comb(2 * k, k) / 4**k, rel=1e-13)


@pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.8])
def test_point_mass_second_moment(p):
    assert chain_limit_moment(PointMass(p), 1) == pytest.approx(2 * p * (1 - p), rel=1e-14)


@pytest.mark.parametrize("p", [0.2, 0.5, 0.7])
def test_point_mass_matches_arcsine_moments(p):
    from mspec.limitlaws import ArcSine

    arc = ArcSine(2 * math.sqrt(p * (1 - p)))
    for k in range(1, 7):
        assert chain_limit_moment(PointMass(p), k) == pytest.approx(arc.moment(2 * k), rel=1e-12)


def test_uniform_second_moment():
    assert chain_limit_moment(Uniform(0, 1), 1) == pytest.approx(0.5, rel=1e-15)


def test_profiles_are_exactly_the_realized_ones():
    for k in range(1, 8):
        realized = Counter(tuple(sorted(crossing_counts(g).items())) for g in iter_loop_paths(k))
        listed = [tuple(sorted(p.items())) for p in iter_crossing_profiles(k)]
        assert len(listed) == len(set(listed))
        assert set(listed) == set(realized)
        for prof in listed:
            assert profile_path_count(dict(prof)) == realized[prof]


@pytest.mark.parametrize("law", [Uniform(0, 1), Beta(2, 3), UniformUnion(0, 0.25, 0.75, 1), PointMass(0.35)])
def test_paths_and_profiles_agree(law):
    for k in range(1, 9):
        a = chain_limit_moment(law, k, method="paths")
        b = chain_limit_moment(law, k, method="profiles")
        assert a == pytest.approx(b, rel=1e-12)


@pytest.mark.parametrize("law", [Uniform(0, 1), Beta(0.5, 0.5), UniformUnion(0, 0.125, 0.875, 1), Uniform(0, 0.25)])
def test_moments_bounded_and_nonincreasing(law):
    vals = [chain_limit_moment(law, k) for k in range(1, 9)]
    assert all(0 <= v <= 1 for v in vals)
    assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("law", [Uniform(0, 1), Beta(2, 2), UniformUnion(0, 0.25, 0.75, 1)])
def test_hankel_matrix_is_psd(law):
    m = [chain_moment(law, ell) for ell in range(7)]
    H = np.array([[m[i + j] for j in range(4)] for i in range(4)])
    assert np.min(np.linalg.eigvalsh(H)) >= -1e-12


def test_chain_moment_orders():
    assert chain_moment(Uniform(0, 1), 0) == 1
    assert chain_moment(Uniform(0, 1), 3) == 0
    assert chain_moment(Uniform(0, 1), 2) == chain_limit_moment(Uniform(0, 1), 1)
    with pytest.raises(DomainError):
        chain_moment(Uniform(0, 1), -2)


def test_joint_hook_reproduces_iid():
    law = Beta(2, 5)

    def joint(exps):
        return math.prod(beta_moment(law, up, down) for up, down in exps.values())

    for k in (1, 3, 5):
        assert chain_limit_moment_joint(k, joint) == pytest.approx(chain_limit_moment(law, k), rel=1e-14)


def test_catalan():
    assert [catalan(r) for r in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]
    assert catalan(30) == 3814986502092304
    with pytest.raises(SizeError):
        catalan(31)


def test_enumeration_cap():
    with pytest.raises(SizeError):
        next(iter_loop_paths(13))
    with pytest.raises(SizeError):
        chain_limit_moment(Uniform(0, 1), 13)
    # the profile route has no such cap
    assert 0 < chain_limit_moment(Uniform(0, 1), 13, method="profiles") < 1

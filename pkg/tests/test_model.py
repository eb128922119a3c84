import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crpmap import (
    DimensionError,
    ModelParams,
    NotSPDError,
    Partition,
    cluster_log_marginal,
    crp_log_prior,
    enumerate_partitions,
    log_score_constant,
    partition_log_score,
    sample_crp,
    sample_dpmm,
)
from oracles import crp_prior_direct, log_marginal_quad_1d, log_marginal_quad_diag, singleton_density


def make_params(dim=1, alpha=1.0, sigma2=1.0, tau2=1.0):
    return ModelParams(
        dim=dim,
        alpha=alpha,
        within_cov=np.eye(dim) * sigma2,
        between_cov=np.eye(dim) * tau2,
    )


def test_params_validation():
    with pytest.raises(NotSPDError):
        ModelParams(dim=2, alpha=1.0, within_cov=np.array([[1.0, 2.0], [2.0, 1.0]]),
                    between_cov=np.eye(2))
    with pytest.raises(DimensionError):
        ModelParams(dim=0, alpha=1.0, within_cov=np.eye(1), between_cov=np.eye(1))
    with pytest.raises(DimensionError):
        make_params(dim=2).__class__(
            dim=2, alpha=1.0, within_cov=np.eye(3), between_cov=np.eye(2)
        )


@pytest.mark.parametrize("sigma2,tau2", [(1.0, 1.0), (0.25, 2.0), (3.0, 0.5)])
def test_block_marginal_matches_quadrature_1d(sigma2, tau2):
    rng = np.random.default_rng(17)
    params = make_params(sigma2=sigma2, tau2=tau2)
    for m in range(1, 7):
        xs = rng.normal(scale=1.5, size=(m, 1))
        ours = cluster_log_marginal(xs, params)
        ref = log_marginal_quad_1d(xs, sigma2, tau2)
        assert ours == pytest.approx(ref, abs=1e-8)


def test_block_marginal_matches_quadrature_2d_diagonal():
    rng = np.random.default_rng(23)
    sig, tau = [0.5, 1.5], [2.0, 0.75]
    params = ModelParams(dim=2, alpha=1.0, within_cov=np.diag(sig), between_cov=np.diag(tau))
    for m in (1, 2, 4):
        pts = rng.normal(size=(m, 2))
        ours = cluster_log_marginal(pts, params)
        ref = log_marginal_quad_diag(pts, sig, tau)
        assert ours == pytest.approx(ref, abs=1e-8)


def test_singleton_marginal_is_sum_covariance_gaussian():
    rng = np.random.default_rng(5)
    for dim in (1, 2, 3):
        a = rng.normal(size=(dim, dim))
        b = rng.normal(size=(dim, dim))
        within = a @ a.T + np.eye(dim) * 0.2
        between = b @ b.T + np.eye(dim) * 0.3
        params = ModelParams(dim=dim, alpha=1.0, within_cov=within, between_cov=between)
        for _ in range(20):
            x = rng.normal(size=(1, dim)) * 2.0
            ours = cluster_log_marginal(x, params)
            assert ours == pytest.approx(
                math.log(singleton_density(x, within, between)), abs=1e-8
            )


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_prior_normalizes_over_all_partitions(alpha):
    for n in (1, 2, 5, 7):
        total = sum(math.exp(crp_log_prior(p, alpha)) for p in enumerate_partitions(n))
        assert total == pytest.approx(1.0, abs=1e-12)


def test_score_factorizes_into_prior_times_marginals():
    # score == log prior + sum of block marginals + data-only constant
    rng = np.random.default_rng(11)
    for trial in range(10):
        dim = 1 + trial % 2
        params = ModelParams(
            dim=dim,
            alpha=float(rng.uniform(0.4, 2.5)),
            within_cov=np.eye(dim) * rng.uniform(0.3, 2.0),
            between_cov=np.eye(dim) * rng.uniform(0.3, 2.0),
        )
        pts = rng.normal(size=(6, dim))
        const = log_score_constant(pts, params)
        for part in enumerate_partitions(6):
            direct = crp_log_prior(part, params.alpha) + sum(
                cluster_log_marginal(pts[list(b)], params) for b in part.blocks
            )
            score = partition_log_score(part, pts, params)
            assert score == pytest.approx(direct + const, abs=1e-10)


def test_score_requires_matching_sizes():
    params = make_params()
    pts = np.zeros((4, 1))
    from crpmap import InvalidPartitionError

    with pytest.raises(InvalidPartitionError):
        partition_log_score(Partition.one_block(5), pts, params)
    with pytest.raises(DimensionError):
        partition_log_score(Partition.one_block(4), np.zeros((4, 2)), params)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=7), st.integers(min_value=0, max_value=10_000))
def test_score_equivariant_under_point_relabeling(n, seed):
    # moving points and labels by the same permutation keeps every block intact
    rng = np.random.default_rng(seed)
    params = make_params(sigma2=0.6, tau2=1.4)
    pts = rng.normal(size=(n, 1))
    part = sample_crp(n, 1.0, rng)
    perm = list(rng.permutation(n))
    moved = np.empty_like(pts)
    for i, t in enumerate(perm):
        moved[t] = pts[i]
    assert partition_log_score(part.permuted(perm), moved, params) == pytest.approx(
        partition_log_score(part, pts, params), rel=1e-12
    )


def test_sample_crp_matches_exact_law():
    # frequency TV against the exact prior over partitions of [4]
    alpha = 1.3
    rng = np.random.default_rng(99)
    draws = 200_000
    counts: dict = {}
    for _ in range(draws):
        key = sample_crp(4, alpha, rng).labels
        counts[key] = counts.get(key, 0) + 1
    tv = 0.0
    for part in enumerate_partitions(4):
        exact = crp_prior_direct([list(b) for b in part.blocks], alpha)
        tv += abs(counts.get(part.labels, 0) / draws - exact)
    assert 0.5 * tv < 0.01


def test_sample_dpmm_shapes_and_grouping():
    rng = np.random.default_rng(7)
    params = make_params(dim=2, sigma2=0.01, tau2=4.0)
    part, means, data = sample_dpmm(40, params, rng)
    assert data.shape == (40, 2)
    assert means.shape == (part.n_blocks, 2)
    # tight within-cov: points sit near their own block mean
    for b, block in enumerate(part.blocks):
        spread = np.linalg.norm(data[list(block)] - means[b], axis=1).max()
        assert spread < 1.0

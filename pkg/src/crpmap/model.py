"""Two-level Gaussian mixture with a Chinese-restaurant-process prior.

Cluster means are drawn from N(0, between_cov), observations from
N(mean, within_cov), and the partition from CRP(alpha).  The prior mean of
cluster centers is hard-fixed at the origin; callers wanting another
center must translate their data.

Writing R = within_cov^{-1/2}, U = between_cov^{-1/2} and, for a block of
size m, R_m = (R^2 + U^2/m)^{1/2}, the marginal density of a block and the
posterior partition score decompose additively over blocks; both are
evaluated in log space throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import DimensionError, InvalidPartitionError
from .linalg import as_cov_matrix, logdet_spd, spd_power
from .partitions import Partition

LOG_2PI = math.log(2.0 * math.pi)


def as_points(data, dim: int | None = None) -> np.ndarray:
    """Coerce a dataset to an (n, d) float array; 1-D input means d=1.

    Floating dtypes wider than float64 (np.longdouble) pass through so
    extreme-magnitude data keeps its precision.
    """
    pts = np.asarray(data)
    if not np.issubdtype(pts.dtype, np.floating):
        pts = pts.astype(float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise DimensionError(f"dataset must be a non-empty (n, d) array, got {pts.shape}")
    if dim is not None and pts.shape[1] != dim:
        raise DimensionError(f"dataset has d={pts.shape[1]}, model has d={dim}")
    return pts


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Model parameters plus the derived precision-root matrices.

    within_cov / between_cov accept scalars (v -> v*I), diagonals, or full
    matrices; both must be SPD.  Derived quantities and the per-block-size
    cache are computed lazily and shared; instances are immutable and safe
    to share across threads (the cache is a plain dict, filled once per
    size).
    """

    dim: int
    alpha: float
    within_cov: np.ndarray
    between_cov: np.ndarray
    _size_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("dim must be >= 1")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        object.__setattr__(self, "within_cov", as_cov_matrix(self.within_cov, self.dim, "within_cov"))
        object.__setattr__(self, "between_cov", as_cov_matrix(self.between_cov, self.dim, "between_cov"))
        rw = spd_power(self.within_cov, -0.5, "within_cov")
        rb = spd_power(self.between_cov, -0.5, "between_cov")
        object.__setattr__(self, "root_prec_within", rw)
        object.__setattr__(self, "root_prec_between", rb)
        object.__setattr__(self, "prec_within", rw @ rw)
        object.__setattr__(self, "prec_between", rb @ rb)
        object.__setattr__(self, "logdet_root_within", logdet_spd(rw))
        object.__setattr__(self, "logdet_root_between", logdet_spd(rb))
        # per-block constant: log(alpha * det U)
        object.__setattr__(
            self, "log_new_block_const", math.log(self.alpha) + self.logdet_root_between
        )

    # -- per-size derived terms ------------------------------------------

    def size_terms(self, m: int):
        """(log det R_m, R_m^{-1} R^2) for block size m, cached per size."""
        hit = self._size_cache.get(m)
        if hit is None:
            pooled = self.prec_within + self.prec_between / m
            root_m = spd_power(pooled, 0.5)
            logdet_m = logdet_spd(root_m)
            shrink = np.linalg.solve(root_m, self.prec_within)
            hit = (logdet_m, shrink)
            self._size_cache[m] = hit
        return hit

    def block_log_score(self, m: int, mean: np.ndarray) -> float:
        """Per-block term of the posterior score for size m and block mean."""
        logdet_m, shrink = self.size_terms(m)
        quad = float(np.dot(shrink @ mean, shrink @ mean))
        return (
            self.log_new_block_const
            + math.lgamma(m + 1)
            - 0.5 * (self.dim + 2) * math.log(m)
            - logdet_m
            + 0.5 * m * quad
        )

    def interval_score_tables(self, n: int):
        """Vectorized per-size tables for 1-D contiguous-block scoring.

        Returns (const, coef) arrays indexed by size m in 1..n such that a
        block of size m with mean x̄ scores const[m] + 0.5*coef[m]*m*x̄².
        Only valid for dim == 1.
        """
        if self.dim != 1:
            raise DimensionError("interval score tables require d=1")
        rw2 = float(self.prec_within[0, 0])
        u2 = float(self.prec_between[0, 0])
        m = np.arange(1, n + 1, dtype=float)
        root_m = np.sqrt(rw2 + u2 / m)
        const = np.empty(n + 1)
        coef = np.empty(n + 1)
        const[0] = np.nan
        coef[0] = np.nan
        const[1:] = (
            self.log_new_block_const
            + gammaln(m + 1)
            - 1.5 * np.log(m)
            - np.log(root_m)
        )
        coef[1:] = (rw2 / root_m) ** 2
        return const, coef


def crp_log_prior(partition: Partition, alpha: float) -> float:
    """log P(partition) under CRP(alpha): alpha^k / alpha^(n) * prod (|J|-1)!."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    n = partition.n
    log_rising = sum(math.log(alpha + j) for j in range(n))
    return (
        partition.n_blocks * math.log(alpha)
        + sum(math.lgamma(size) for size in partition.block_sizes)
        - log_rising
    )


def cluster_log_marginal(block_points, params: ModelParams) -> float:
    """Log marginal density of one block's observations (mean integrated out).

    Depends on the block only through its size, mean, and sum of squared
    within-precision norms, hence is invariant to point order.
    """
    pts = as_points(block_points, params.dim)
    m = pts.shape[0]
    mean = pts.mean(axis=0)
    logdet_m, shrink = params.size_terms(m)
    quad_mean = float(np.dot(shrink @ mean, shrink @ mean))
    sq_norms = float(((pts @ params.root_prec_within.T) ** 2).sum())
    return (
        m * (params.logdet_root_within - 0.5 * params.dim * LOG_2PI)
        + params.logdet_root_between
        - 0.5 * params.dim * math.log(m)
        - logdet_m
        + 0.5 * (m * quad_mean - sq_norms)
    )


def partition_log_score(partition: Partition, data, params: ModelParams) -> float:
    """Posterior partition score log Q (prior x marginals, shared constants dropped).

    Additive over blocks; differences of this score across partitions of
    the same data equal the corresponding log posterior-odds.
    """
    pts = as_points(data, params.dim)
    if pts.shape[0] != partition.n:
        raise InvalidPartitionError(
            f"partition covers {partition.n} items, dataset has {pts.shape[0]}"
        )
    total = 0.0
    for block in partition.blocks:
        mean = pts[list(block)].mean(axis=0)
        total += params.block_log_score(len(block), mean)
    return total


def log_score_constant(data, params: ModelParams) -> float:
    """The partition-independent constant log Q - (log prior + sum log marginals).

    Exposed for the factorization check: for fixed data this is the same
    for every partition.
    """
    pts = as_points(data, params.dim)
    n = pts.shape[0]
    log_rising = sum(math.log(params.alpha + j) for j in range(n))
    sq_norms = float(((pts @ params.root_prec_within.T) ** 2).sum())
    return (
        log_rising
        + n * (0.5 * params.dim * LOG_2PI - params.logdet_root_within)
        + 0.5 * sq_norms
    )


def sample_crp(n: int, alpha: float, rng: np.random.Generator) -> Partition:
    """Sequential CRP draw: item i joins a block w.p. |J|/(i+alpha), new w.p. alpha/(i+alpha)."""
    if n < 1:
        raise InvalidPartitionError("n must be >= 1")
    labels = [0]
    sizes = [1]
    for i in range(1, n):
        u = rng.random() * (i + alpha)
        acc = 0.0
        for k, size in enumerate(sizes):
            acc += size
            if u < acc:
                labels.append(k)
                sizes[k] += 1
                break
        else:
            labels.append(len(sizes))
            sizes.append(1)
    return Partition(tuple(labels))


def sample_dpmm(n: int, params: ModelParams, rng: np.random.Generator):
    """Draw (partition, block means, data) from the generative model."""
    partition = sample_crp(n, params.alpha, rng)
    k = partition.n_blocks
    chol_between = np.linalg.cholesky(params.between_cov)
    chol_within = np.linalg.cholesky(params.within_cov)
    means = rng.standard_normal((k, params.dim)) @ chol_between.T
    data = np.empty((n, params.dim))
    noise = rng.standard_normal((n, params.dim)) @ chol_within.T
    for i, lab in enumerate(partition.labels):
        data[i] = means[lab] + noise[i]
    return partition, means, data


@dataclass(frozen=True)
class ClusterStats:
    """Cluster-size summaries, overall and near the origin.

    *_center restricts to blocks whose mean lies in the open ball B(0, r);
    *_intersect restricts to blocks containing at least one point of
    B(0, r).  Min/max over an empty family is None, never 0.
    """

    m_n: int
    M_n: int
    m_r_center: int | None
    M_r_center: int | None
    m_r_intersect: int | None
    M_r_intersect: int | None
    k_r_intersect: int


def cluster_stats(partition: Partition, data, r: float) -> ClusterStats:
    """Compute ClusterStats for the given partition, data, and radius r."""
    pts = as_points(data)
    if pts.shape[0] != partition.n:
        raise InvalidPartitionError("partition/data size mismatch")
    if not r > 0:
        raise ValueError("r must be positive")
    sizes = []
    center_sizes = []
    intersect_sizes = []
    for block in partition.blocks:
        sub = pts[list(block)]
        size = len(block)
        sizes.append(size)
        if np.linalg.norm(sub.mean(axis=0)) < r:
            center_sizes.append(size)
        if (np.linalg.norm(sub, axis=1) < r).any():
            intersect_sizes.append(size)
    return ClusterStats(
        m_n=min(sizes),
        M_n=max(sizes),
        m_r_center=min(center_sizes) if center_sizes else None,
        M_r_center=max(center_sizes) if center_sizes else None,
        m_r_intersect=min(intersect_sizes) if intersect_sizes else None,
        M_r_intersect=max(intersect_sizes) if intersect_sizes else None,
        k_r_intersect=len(intersect_sizes),
    )

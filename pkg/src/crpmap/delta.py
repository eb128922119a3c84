"""The large-sample partition functional and its maximizers.

For a space partition G of R^d and an input law P, the functional is

    sum_G [ (1/2) p_G ||R E(X | X in G)||^2  -  p_G ln(1/p_G) ]

a variance-vs-entropy trade-off: finer partitions raise the first term
and pay entropy for it.  Everything here is deterministic given the
moment method tags and seeds recorded in RegionMoments.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .distributions import MC_SAMPLES, MC_SEED, Exponential, region_moments
from .errors import ConfigError, CoverageError, DegenerateRegionError, DimensionError
from .regions import Interval, SpacePartition, interval_partition

COVER_TOL = 1e-6


def _coerce_r(R, dim: int) -> np.ndarray:
    arr = np.asarray(R, dtype=float)
    if arr.ndim == 0:
        return float(arr) * np.eye(dim)
    if arr.shape != (dim, dim):
        raise DimensionError(f"R must be scalar or ({dim}, {dim}), got {arr.shape}")
    return arr


def _partition_moments(partition: SpacePartition, P, method, n_samples, seed):
    # distinct seeds per region keep Monte-Carlo errors independent
    moms = [
        region_moments(P, reg, method=method, n_samples=n_samples, seed=seed + 7 * i)
        for i, reg in enumerate(partition.regions)
    ]
    if partition.coverage:
        total = sum(m.p for m in moms)
        if abs(total - 1.0) > COVER_TOL + 3.0 * math.sqrt(sum(m.se_p**2 for m in moms)):
            raise CoverageError(f"regions sum to probability {total}, not 1")
    return moms


def delta(
    partition: SpacePartition,
    P,
    R,
    method: str = "auto",
    n_samples: int = MC_SAMPLES,
    seed: int = MC_SEED,
) -> float:
    """Functional value of a space partition under law P and root matrix R."""
    value, _ = delta_with_error(partition, P, R, method=method, n_samples=n_samples, seed=seed)
    return value


def delta_with_error(
    partition: SpacePartition,
    P,
    R,
    method: str = "auto",
    n_samples: int = MC_SAMPLES,
    seed: int = MC_SEED,
) -> tuple[float, float]:
    """Functional value plus a propagated standard error (0 when exact)."""
    rmat = _coerce_r(R, P.dim)
    moms = _partition_moments(partition, P, method, n_samples, seed)
    value = 0.0
    var = 0.0
    gram = rmat.T @ rmat
    for mom in moms:
        rm = rmat @ mom.mean
        quad = float(rm @ rm)
        value += 0.5 * mom.p * quad + mom.p * math.log(mom.p)
        if mom.method == "monte_carlo":
            dp = 0.5 * quad + math.log(mom.p) + 1.0
            dm = mom.p * (gram @ mom.mean)
            var += (dp * mom.se_p) ** 2 + float((dm**2) @ (mom.se_mean**2))
    return value, math.sqrt(var)


def delta_trace_form(
    partition: SpacePartition,
    P,
    R,
    method: str = "auto",
    n_samples: int = MC_SAMPLES,
    seed: int = MC_SEED,
) -> float:
    """Same functional through the covariance and entropy of the quantized
    variable Z = E(X | region of X), plus (1/2)||R E X||^2.

    Algebraically identical to delta() on covering partitions; kept as an
    independent route for cross-checks.
    """
    rmat = _coerce_r(R, P.dim)
    moms = _partition_moments(partition, P, method, n_samples, seed)
    probs = np.array([m.p for m in moms])
    means = np.vstack([m.mean for m in moms])
    ez = probs @ means
    centered = means - ez
    cov_z = (probs[:, None] * centered).T @ centered
    entropy = -float(probs @ np.log(probs))
    mean_x = np.asarray(P.mean(), dtype=float)
    rmx = rmat @ mean_x
    return 0.5 * float(np.trace(rmat @ cov_z @ rmat.T)) - entropy + 0.5 * float(rmx @ rmx)


# ---------------------------------------------------------------------------
# uniform [-1, 1] equal-width closed forms

def delta_equal_width(n_clusters: int, R: float) -> float:
    """Functional of n equal-width intervals for uniform [-1, 1], scalar R."""
    if n_clusters < 1:
        raise ConfigError("cluster count must be >= 1")
    n = float(n_clusters)
    return R * R * (1.0 - n**-2) / 6.0 - math.log(n)


def optimal_equal_width_count(R: float) -> int:
    """Best equal-width cluster count for uniform [-1, 1]: floor or ceil of R/sqrt(3)."""
    if R <= 0:
        raise ConfigError("R must be positive")
    star = R / math.sqrt(3.0)
    lo = max(1, math.floor(star))
    hi = max(1, math.ceil(star))
    best = lo if delta_equal_width(lo, R) >= delta_equal_width(hi, R) else hi
    assert best in (max(1, math.floor(star)), max(1, math.ceil(star)))
    return best


# ---------------------------------------------------------------------------
# breakpoint search for 1-D laws

_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


class IntervalSearchResult(NamedTuple):
    partition: SpacePartition
    value: float
    per_count: dict  # count -> (value, breakpoints tuple)


def _interval_contribution(P, lo: float, hi: float, rsq: float) -> float:
    """One region's term; -inf marks a degenerate (unusable) region."""
    try:
        mom = region_moments(P, Interval(lo, hi), method="auto")
    except DegenerateRegionError:
        return -math.inf
    return 0.5 * rsq * float(mom.mean[0]) ** 2 * mom.p + mom.p * math.log(mom.p)


def _breakpoint_value(P, breaks: np.ndarray, rsq: float) -> float:
    edges = np.concatenate(([-math.inf], breaks, [math.inf]))
    return sum(_interval_contribution(P, edges[i], edges[i + 1], rsq) for i in range(len(edges) - 1))


def _golden_max(fn, lo: float, hi: float, iters: int = 60) -> float:
    a, b = lo, hi
    x1 = b - _GOLD * (b - a)
    x2 = a + _GOLD * (b - a)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLD * (b - a)
            f2 = fn(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLD * (b - a)
            f1 = fn(x1)
    return 0.5 * (a + b)


def maximize_delta_intervals(
    P,
    R,
    max_clusters: int,
    restarts: int = 20,
    seed: int = 0,
    sweeps: int = 120,
    tol: float = 1e-12,
) -> IntervalSearchResult:
    """Coordinate-ascent breakpoint search, best over counts 1..max_clusters.

    Each restart places random breakpoints inside the law's effective
    support, then cycles golden-section line searches per breakpoint; only
    the two adjacent regions change, so each line search is local.  All
    per-count optima are reported for diagnostics.
    """
    if P.dim != 1:
        raise DimensionError("breakpoint search is one-dimensional")
    if max_clusters < 1:
        raise ConfigError("max_clusters must be >= 1")
    rsq = float(np.asarray(R).reshape(-1)[0]) ** 2
    lo_s, hi_s = P.quad_range() if hasattr(P, "quad_range") else (
        float(np.min(P.atoms if hasattr(P, "atoms") else P.points)) - 1.0,
        float(np.max(P.atoms if hasattr(P, "atoms") else P.points)) + 1.0,
    )
    rng = np.random.default_rng(seed)
    per_count: dict[int, tuple[float, tuple[float, ...]]] = {}
    mom_all = region_moments(P, Interval(-math.inf, math.inf), method="auto")
    per_count[1] = (0.5 * rsq * float(mom_all.mean[0]) ** 2, ())

    for count in range(2, max_clusters + 1):
        k = count - 1
        best_val, best_breaks = -math.inf, None
        for start in range(restarts):
            if start == 0:
                breaks = np.linspace(lo_s, hi_s, count + 1)[1:-1].copy()
            else:
                breaks = np.sort(rng.uniform(lo_s, hi_s, size=k))
            current = _breakpoint_value(P, breaks, rsq)
            for _ in range(sweeps):
                previous = current
                for i in range(k):
                    left = breaks[i - 1] if i > 0 else lo_s
                    right = breaks[i + 1] if i + 1 < k else hi_s
                    lo_e = breaks[i - 1] if i > 0 else -math.inf
                    hi_e = breaks[i + 1] if i + 1 < k else math.inf
                    # a dead region anywhere makes the incremental update
                    # ill-defined; fall back to full re-evaluation
                    fixed = (
                        current
                        - _interval_contribution(P, lo_e, breaks[i], rsq)
                        - _interval_contribution(P, breaks[i], hi_e, rsq)
                        if math.isfinite(current)
                        else None
                    )

                    def local(b, lo_e=lo_e, hi_e=hi_e):
                        return _interval_contribution(P, lo_e, b, rsq) + _interval_contribution(
                            P, b, hi_e, rsq
                        )

                    breaks[i] = _golden_max(local, left, right)
                    current = (
                        fixed + local(breaks[i]) if fixed is not None else _breakpoint_value(P, breaks, rsq)
                    )
                if math.isfinite(current) and current - previous <= tol:
                    break
            if current > best_val:
                best_val, best_breaks = float(current), breaks.copy()
        if best_breaks is None:
            # every restart collapsed a region to zero probability: this
            # cluster count is effectively unavailable for this law
            per_count[count] = (-math.inf, ())
        else:
            per_count[count] = (best_val, tuple(float(b) for b in best_breaks))

    best_count = max(per_count, key=lambda c: per_count[c][0])
    value, breaks = per_count[best_count]
    return IntervalSearchResult(interval_partition(breaks), float(value), per_count)


# ---------------------------------------------------------------------------
# splitting one exponential segment at its conditional median

def exponential_split_gain(a: float, L: float, R, P: Exponential | None = None) -> float:
    """Gain from splitting [a, a+L] into its two equally probable halves.

    Positive means the split raises the functional.  The median is found
    by bisection on the law's cdf, moments by the usual region route.
    """
    if a < 0 or L <= 0:
        raise ConfigError("need a >= 0 and L > 0")
    if P is None:
        P = Exponential(1.0)
    rsq = float(np.asarray(R).reshape(-1)[0]) ** 2
    lo, hi = a, a + L
    target = 0.5 * (P.cdf(lo) + P.cdf(hi))
    left, right = lo, hi
    for _ in range(200):
        mid = 0.5 * (left + right)
        if P.cdf(mid) < target:
            left = mid
        else:
            right = mid
    c = 0.5 * (left + right)
    whole = _interval_contribution(P, lo, hi, rsq)
    return _interval_contribution(P, lo, c, rsq) + _interval_contribution(P, c, hi, rsq) - whole

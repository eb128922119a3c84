"""MAP partition search.

Three routes, by regime:
  - map_exhaustive: exact argmax by enumeration (n <= 13);
  - map_interval_dp: exact in d=1 at any n, using the fact that an optimal
    partition's block hulls overlap in at most single points, so some
    optimum is a partition of the sorted data into contiguous runs;
  - map_local_search: hill climbing for d >= 2 where exhaustive search is
    out of reach (heuristic, no optimality guarantee).
"""

from __future__ import annotations

import numpy as np

from .errors import CapacityError, DimensionError
from .geometry import convex_hull, hull_intersection_type
from .gibbs import BlockScorer, BlockState
from .model import ModelParams, as_points, partition_log_score, sample_crp
from .partitions import MAX_ENUM_N, Partition, enumerate_partitions

_EPS_IMPROVE = 1e-12


def map_exhaustive(data, params: ModelParams):
    """Exact MAP by scoring every partition; ties -> smallest growth string."""
    pts = as_points(data, params.dim)
    n = pts.shape[0]
    if n > MAX_ENUM_N:
        raise CapacityError(
            f"map_exhaustive: n={n} exceeds the enumeration guard MAX_ENUM_N={MAX_ENUM_N}"
        )
    # memoize block scores by membership bitmask: partitions share blocks heavily
    cache: dict[int, float] = {}

    def mask_score(mask: int) -> float:
        hit = cache.get(mask)
        if hit is None:
            idx = []
            m, b = mask, 0
            while m:
                if m & 1:
                    idx.append(b)
                m >>= 1
                b += 1
            hit = params.block_log_score(len(idx), pts[idx].mean(axis=0))
            cache[mask] = hit
        return hit

    best_labels = None
    best = -np.inf
    for part in enumerate_partitions(n):
        masks = [0] * part.n_blocks
        for i, lab in enumerate(part.labels):
            masks[lab] |= 1 << i
        score = sum(mask_score(m) for m in masks)
        if score > best:
            best = score
            best_labels = part.labels
    return Partition(best_labels), float(best)


def map_interval_dp(data, params: ModelParams, *, dtype=np.float64):
    """Exact 1-D MAP via O(n^2) dynamic programming over sorted contiguous runs.

    Ties between split points are broken toward the earliest candidate
    (deterministic).  ``dtype`` sets the accumulation precision: pass
    np.longdouble for data whose squared magnitudes overflow float64.
    """
    pts = as_points(data)
    if pts.shape[1] != 1 or params.dim != 1:
        raise DimensionError("map_interval_dp requires d=1")
    n = pts.shape[0]
    x = pts[:, 0]
    order = np.argsort(x, kind="stable")
    xs = x[order].astype(dtype)

    const64, coef64 = params.interval_score_tables(n)
    const = const64.astype(dtype)
    coef = coef64.astype(dtype)
    prefix = np.concatenate([np.zeros(1, dtype=dtype), np.cumsum(xs)])

    dp = np.empty(n + 1, dtype=dtype)
    back = np.zeros(n + 1, dtype=int)
    dp[0] = 0
    for j in range(1, n + 1):
        m = np.arange(j, 0, -1)  # block sizes for split points i = 0..j-1
        diff = prefix[j] - prefix[:j]
        cand = dp[:j] + const[m] + 0.5 * coef[m] * (diff * diff) / m
        b = int(np.argmax(cand))
        dp[j] = cand[b]
        back[j] = b

    labels_sorted = np.empty(n, dtype=int)
    bounds = []
    j = n
    while j > 0:
        bounds.append((back[j], j))
        j = back[j]
    for k, (lo, hi) in enumerate(reversed(bounds)):
        labels_sorted[lo:hi] = k
    labels = np.empty(n, dtype=int)
    labels[order] = labels_sorted
    # keep the accumulation dtype: wide scores can exceed float64 range
    score = dp[n]
    return Partition.from_labels(labels), float(score) if dtype is np.float64 else score


def is_map_weakly_convex(partition: Partition, data) -> bool:
    """True iff every pair of block convex hulls meets in at most one point."""
    pts = as_points(data)
    if pts.shape[1] > 2:
        raise DimensionError("weak-convexity check implemented for d <= 2 only")
    hulls = [convex_hull(pts[list(b)]) for b in partition.blocks]
    for a in range(len(hulls)):
        for b in range(a + 1, len(hulls)):
            if hull_intersection_type(hulls[a], hulls[b]) == "overlap":
                return False
    return True


def _climb(state: BlockState, rng: np.random.Generator, splits_per_block: int) -> None:
    """Greedy local ascent in place: relocate / merge / split until stuck."""
    n = len(state.labels)
    pts = state.points
    scorer = state.scorer
    while True:
        improved = False

        # single-point relocations, repeated to a fixed point
        moved = True
        guard = 0
        while moved and guard < 200:
            moved = False
            guard += 1
            for i in range(n):
                old_lab = state.labels[i]
                before = state.total_score
                state.remove(i)
                labs, logw = state.join_log_weights(i)
                base = state.total_score
                k = int(np.argmax(logw))
                gain = base + logw[k] - before
                if gain > _EPS_IMPROVE:
                    target = labs[k] if k < len(labs) else (max(state.counts, default=-1) + 1)
                    state.insert(i, target)
                    moved = True
                    improved = True
                else:
                    state.insert(i, old_lab)

        # merges: best improving pair, repeated
        while True:
            labs = sorted(state.counts)
            best_gain, best_pair = _EPS_IMPROVE, None
            for a in range(len(labs)):
                for b in range(a + 1, len(labs)):
                    la, lb = labs[a], labs[b]
                    merged = scorer.score(
                        state.counts[la] + state.counts[lb], state.sums[la] + state.sums[lb]
                    )
                    gain = merged - state.block_score(la) - state.block_score(lb)
                    if gain > best_gain:
                        best_gain, best_pair = gain, (la, lb)
            if best_pair is None:
                break
            la, lb = best_pair
            for i in range(n):
                if state.labels[i] == lb:
                    state.remove(i)
                    state.insert(i, la)
            improved = True

        # splits: random hyperplanes through the centroid, plus a median cut
        for lab in sorted(state.counts):
            if state.counts[lab] < 2:
                continue
            members = [i for i in range(n) if state.labels[i] == lab]
            sub = pts[members]
            centroid = sub.mean(axis=0)
            whole = state.block_score(lab)
            dirs = rng.standard_normal((splits_per_block, pts.shape[1]))
            proposals = []
            for v in dirs:
                side = (sub - centroid) @ v > 0
                proposals.append(side)
            # median cut along the first principal axis (deterministic)
            centered = sub - centroid
            _, _, vt = np.linalg.svd(centered, full_matrices=False)
            proj = centered @ vt[0]
            proposals.append(proj > np.median(proj))
            best_gain, best_side = _EPS_IMPROVE, None
            for side in proposals:
                na = int(side.sum())
                if na == 0 or na == len(members):
                    continue
                sa = sub[side].sum(axis=0)
                sb = sub[~side].sum(axis=0)
                if pts.shape[1] == 1:
                    sa, sb = float(sa[0]), float(sb[0])
                gain = (
                    scorer.score(na, sa)
                    + scorer.score(len(members) - na, sb)
                    - whole
                )
                if gain > best_gain:
                    best_gain, best_side = gain, side
            if best_side is not None:
                new_lab = max(state.counts) + 1
                for i, on_side in zip(members, best_side):
                    if on_side:
                        state.remove(i)
                        state.insert(i, new_lab)
                improved = True

        if not improved:
            return


def map_local_search(
    data,
    params: ModelParams,
    restarts: int = 20,
    rng: np.random.Generator | None = None,
    *,
    splits_per_block: int = 4,
):
    """Heuristic MAP by hill climbing from several starts; best result wins.

    Moves: relocate one point, merge two blocks, split one block by a
    hyperplane through its centroid (random directions plus a principal-
    axis median cut).  Weak convexity of the answer is not guaranteed;
    check with is_map_weakly_convex.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    pts = as_points(data, params.dim)
    n = pts.shape[0]
    scorer = BlockScorer(params)

    best_labels, best_score = None, -np.inf
    for r in range(max(1, restarts)):
        if r == 0:
            labels = [0] * n
        elif r == 1:
            labels = list(range(n))
        elif r % 2 == 0:
            labels = list(sample_crp(n, params.alpha, rng).labels)
        else:
            k = int(rng.integers(1, min(n, 8) + 1))
            labels = [int(v) for v in rng.integers(0, k, size=n)]
        state = BlockState(pts, labels, scorer)
        _climb(state, rng, splits_per_block)
        cand = Partition.from_labels(state.labels)
        score = state.total_score
        if score > best_score + _EPS_IMPROVE or (
            abs(score - best_score) <= _EPS_IMPROVE
            and best_labels is not None
            and cand.labels < best_labels
        ):
            best_score = score
            best_labels = cand.labels

    best = Partition(best_labels)
    return best, float(partition_log_score(best, pts, params))

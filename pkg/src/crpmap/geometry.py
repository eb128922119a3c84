"""Convex hulls, intersection classification, and partition distances.

Restricted to d <= 2.  Intersection classification uses a tolerance of
1e-12 scaled by coordinate magnitude; coordinates are doubles, so
adversarially collinear inputs can misclassify.  That trade-off is
documented rather than fought with exact predicates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .distributions import MC_SAMPLES, MC_SEED, region_moments
from .errors import CapacityError, ConfigError, CoverageError, DimensionError
from .partitions import Partition
from .regions import Interval, SpacePartition

BASE_TOL = 1e-12
FAMILY_MAX = 8  # permutation brute force; 8! is the ceiling


def _tol(*arrays) -> float:
    scale = 1.0
    for arr in arrays:
        if arr.size:
            scale = max(scale, float(np.abs(arr).max()))
    return BASE_TOL * scale


@dataclass(frozen=True, eq=False)
class Hull:
    """Convex hull of finitely many points in d <= 2.

    vertices: (k, d) array.  d=1: one vertex (point) or two (interval,
    lo then hi).  d=2: counter-clockwise vertex list; one vertex is a
    point, two a segment, three or more a non-degenerate polygon.
    """

    vertices: np.ndarray

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[0] == 0 or verts.shape[1] not in (1, 2):
            raise DimensionError(f"hull vertices must be (k, 1) or (k, 2), got {verts.shape}")
        object.__setattr__(self, "vertices", verts)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def lo(self) -> float:
        if self.dim != 1:
            raise DimensionError("lo/hi only for 1-D hulls")
        return float(self.vertices[0, 0])

    @property
    def hi(self) -> float:
        if self.dim != 1:
            raise DimensionError("lo/hi only for 1-D hulls")
        return float(self.vertices[-1, 0])

    def contains(self, point, tol: float | None = None) -> bool:
        pt = np.asarray(point, dtype=float).reshape(self.dim)
        eps = self._eps(tol)
        if self.dim == 1:
            return self.lo - eps <= pt[0] <= self.hi + eps
        verts = self.vertices
        if len(verts) == 1:
            return bool(np.linalg.norm(pt - verts[0]) <= eps)
        if len(verts) == 2:
            return _point_segment_dist(pt, verts[0], verts[1]) <= eps
        nxt = np.roll(verts, -1, axis=0)
        edge = nxt - verts
        rel = pt[None, :] - verts
        cross = edge[:, 0] * rel[:, 1] - edge[:, 1] * rel[:, 0]
        return bool((cross >= -eps * np.maximum(1.0, np.linalg.norm(edge, axis=1))).all())

    def _eps(self, tol: float | None) -> float:
        return _tol(self.vertices) if tol is None else tol


def convex_hull(points) -> Hull:
    """Monotone-chain hull; d=1 collapses to [min, max]."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise DimensionError("need a non-empty (n, d) point array")
    d = pts.shape[1]
    if d == 1:
        lo, hi = float(pts.min()), float(pts.max())
        return Hull(np.array([[lo]]) if lo == hi else np.array([[lo], [hi]]))
    if d != 2:
        raise DimensionError("hulls implemented for d <= 2 only")
    uniq = np.unique(pts, axis=0)
    if len(uniq) == 1:
        return Hull(uniq)
    order = np.lexsort((uniq[:, 1], uniq[:, 0]))
    uniq = uniq[order]
    eps = _tol(uniq) * 10.0

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                a, b = out[-2], out[-1]
                if (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) <= eps:
                    out.pop()  # clockwise or collinear: drop the middle point
                else:
                    break
            out.append(p)
        return out

    lower = chain(uniq)
    upper = chain(uniq[::-1])
    verts = np.array(lower[:-1] + upper[:-1])
    if len(verts) == 2 and np.allclose(verts[0], verts[1]):
        verts = verts[:1]
    return Hull(verts)


def hull_family(partition: Partition, data) -> tuple[Hull, ...]:
    """One hull per block, block-aligned with the partition."""
    pts = np.asarray(data, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    return tuple(convex_hull(pts[list(block)]) for block in partition.blocks)


# ---------------------------------------------------------------------------
# intersection classification

def _point_segment_dist(p, a, b) -> float:
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    t = float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    return float(np.linalg.norm(p - (a + t * ab)))


def _clip_polygon(subject: np.ndarray, clip_verts: np.ndarray, eps: float) -> np.ndarray:
    """Sutherland-Hodgman: clip a convex subject by a ccw convex polygon."""
    out = [tuple(v) for v in subject]
    k = len(clip_verts)
    for i in range(k):
        a = clip_verts[i]
        b = clip_verts[(i + 1) % k]
        edge = b - a
        inp, out = out, []
        if not inp:
            break

        def side(p):
            return edge[0] * (p[1] - a[1]) - edge[1] * (p[0] - a[0])

        for j, cur in enumerate(inp):
            prev = inp[j - 1]
            s_cur, s_prev = side(cur), side(prev)
            if s_cur >= -eps:
                if s_prev < -eps:
                    out.append(_edge_intersect(prev, cur, a, b))
                out.append(cur)
            elif s_prev >= -eps:
                out.append(_edge_intersect(prev, cur, a, b))
    return np.array(out) if out else np.empty((0, 2))


def _edge_intersect(p, q, a, b):
    p, q, a, b = (np.asarray(v, dtype=float) for v in (p, q, a, b))
    d1 = q - p
    d2 = b - a
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    if denom == 0.0:
        return tuple(p)
    t = ((a[0] - p[0]) * d2[1] - (a[1] - p[1]) * d2[0]) / denom
    return tuple(p + t * d1)


def _segment_clip_by_hull(seg: np.ndarray, hull: Hull, eps: float) -> np.ndarray:
    """Intersection of a segment with a convex hull, as 0, 1, or 2 points."""
    a, b = seg
    if len(hull.vertices) <= 2:
        return _segment_segment(seg, hull.vertices, eps)
    t_lo, t_hi = 0.0, 1.0
    verts = hull.vertices
    k = len(verts)
    d = b - a
    for i in range(k):
        u = verts[i]
        v = verts[(i + 1) % k]
        edge = v - u
        # inside is left of the edge: cross(edge, x - u) >= 0
        num = edge[0] * (a[1] - u[1]) - edge[1] * (a[0] - u[0])
        den = edge[0] * d[1] - edge[1] * d[0]
        if abs(den) < eps:
            if num < -eps:
                return np.empty((0, 2))
            continue
        t = -num / den
        if den > 0:
            t_lo = max(t_lo, t)
        else:
            t_hi = min(t_hi, t)
        if t_lo > t_hi + eps:
            return np.empty((0, 2))
    p, q = a + t_lo * d, a + min(t_hi, 1.0) * d
    if np.linalg.norm(q - p) <= eps:
        return p[None, :]
    return np.array([p, q])


def _segment_segment(seg1: np.ndarray, seg2: np.ndarray, eps: float) -> np.ndarray:
    p, r = seg1[0], seg1[-1] - seg1[0]
    q, s = seg2[0], seg2[-1] - seg2[0]
    rxs = r[0] * s[1] - r[1] * s[0]
    qp = q - p
    if abs(rxs) > eps:
        t = (qp[0] * s[1] - qp[1] * s[0]) / rxs
        u = (qp[0] * r[1] - qp[1] * r[0]) / rxs
        if -eps <= t <= 1 + eps and -eps <= u <= 1 + eps:
            return (p + t * r)[None, :]
        return np.empty((0, 2))
    # parallel: check collinearity, then 1-D overlap along the long axis
    if abs(qp[0] * r[1] - qp[1] * r[0]) > eps * max(1.0, float(np.linalg.norm(r))):
        return np.empty((0, 2))
    axis = np.argmax(np.abs(r)) if np.abs(r).max() >= np.abs(s).max() else np.argmax(np.abs(s))
    pts = np.vstack([seg1, seg2])
    lo1, hi1 = sorted([seg1[0][axis], seg1[-1][axis]])
    lo2, hi2 = sorted([seg2[0][axis], seg2[-1][axis]])
    lo, hi = max(lo1, lo2), min(hi1, hi2)
    if hi < lo - eps:
        return np.empty((0, 2))
    sel = lambda c: pts[np.argmin(np.abs(pts[:, axis] - c))]
    if abs(hi - lo) <= eps:
        return sel(lo)[None, :]
    return np.array([sel(lo), sel(hi)])


def hull_intersection_type(A: Hull, B: Hull) -> str:
    """Classify a pair of hulls: 'disjoint', 'single_point', or 'overlap'.

    A shared segment counts as overlap (it is not a singleton).
    """
    if A.dim != B.dim:
        raise DimensionError("hulls have different dimensions")
    eps = _tol(A.vertices, B.vertices)
    if A.dim == 1:
        lo, hi = max(A.lo, B.lo), min(A.hi, B.hi)
        if hi < lo - eps:
            return "disjoint"
        return "single_point" if hi - lo <= eps else "overlap"

    for one, other in ((A, B), (B, A)):
        if len(one.vertices) == 1:
            return "single_point" if other.contains(one.vertices[0], eps) else "disjoint"
    if len(A.vertices) == 2 or len(B.vertices) == 2:
        seg, other = (A, B) if len(A.vertices) == 2 else (B, A)
        inter = (
            _segment_segment(seg.vertices, other.vertices, eps)
            if len(other.vertices) == 2
            else _segment_clip_by_hull(seg.vertices, other, eps)
        )
    else:
        inter = _clip_polygon(A.vertices, B.vertices, eps)
    if len(inter) == 0:
        return "disjoint"
    spread = np.ptp(inter, axis=0).max() if len(inter) > 1 else 0.0
    return "single_point" if spread <= 10.0 * eps else "overlap"


# ---------------------------------------------------------------------------
# induced partitions

def induced_partition(space_partition: SpacePartition, data) -> Partition:
    """Blocks are the non-empty region preimages; boundary points go to the
    lowest-index region containing them."""
    pts = np.asarray(data, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[0]
    labels = np.full(n, -1, dtype=int)
    query = pts[:, 0] if space_partition.dim == 1 else pts
    for idx in range(len(space_partition.regions) - 1, -1, -1):
        inside = np.asarray(space_partition.regions[idx].contains(query))
        labels[inside] = idx
    if (labels < 0).any():
        missing = int(np.argmax(labels < 0))
        raise CoverageError(f"point {missing} at {pts[missing]} lies in no region")
    return Partition.from_labels(labels)


# ---------------------------------------------------------------------------
# distances

def hausdorff_distance(A: Hull, B: Hull) -> float:
    """Hausdorff distance; exact for intervals and convex polygons."""
    if A.dim != B.dim:
        raise DimensionError("hulls have different dimensions")
    if A.dim == 1:
        return max(abs(A.lo - B.lo), abs(A.hi - B.hi))

    def directed(src: Hull, dst: Hull) -> float:
        worst = 0.0
        for v in src.vertices:
            if dst.contains(v):
                continue
            verts = dst.vertices
            if len(verts) == 1:
                dist = float(np.linalg.norm(v - verts[0]))
            else:
                k = len(verts)
                dist = min(
                    _point_segment_dist(v, verts[i], verts[(i + 1) % k])
                    for i in range(k if k > 2 else 1)
                )
            worst = max(worst, dist)
        return worst

    return max(directed(A, B), directed(B, A))


def _interval_bounds(obj) -> tuple[float, float] | None:
    if isinstance(obj, Interval):
        return obj.lo, obj.hi
    if isinstance(obj, Hull) and obj.dim == 1:
        return obj.lo, obj.hi
    return None


def _prob_interval(P, lo: float, hi: float) -> float:
    if hi <= lo:
        return 0.0
    if hasattr(P, "atoms"):
        inside = (P.atoms[:, 0] >= lo) & (P.atoms[:, 0] <= hi)
        return float(P.probs[inside].sum())
    if hasattr(P, "points") and P.dim == 1:
        x = P.points[:, 0]
        return float(((x >= lo) & (x <= hi)).mean())
    return P.cdf(hi) - P.cdf(lo)


def _member_mask(obj, pts: np.ndarray) -> np.ndarray:
    bounds = _interval_bounds(obj)
    if bounds is not None:
        x = pts[:, 0]
        return (x >= bounds[0]) & (x <= bounds[1])
    if isinstance(obj, Hull):
        verts = obj.vertices
        eps = _tol(verts, pts)
        if len(verts) == 1:
            return np.linalg.norm(pts - verts[0], axis=1) <= eps
        if len(verts) == 2:
            a, b = verts
            ab = b - a
            t = np.clip((pts - a) @ ab / float(ab @ ab), 0.0, 1.0)
            return np.linalg.norm(pts - (a + t[:, None] * ab), axis=1) <= eps
        nxt = np.roll(verts, -1, axis=0)
        edge = nxt - verts
        scale = eps * np.maximum(1.0, np.linalg.norm(edge, axis=1))
        rel = pts[:, None, :] - verts[None, :, :]
        cross = edge[None, :, 0] * rel[:, :, 1] - edge[None, :, 1] * rel[:, :, 0]
        return (cross >= -scale[None, :]).all(axis=1)
    return np.asarray(obj.contains(pts if pts.shape[1] > 1 else pts[:, 0]), dtype=bool)


def sym_diff_distance_with_error(
    A,
    B,
    P,
    n_samples: int = MC_SAMPLES,
    seed: int = MC_SEED,
) -> tuple[float, float]:
    """P(A symmetric-difference B) and its standard error (0 when exact)."""
    ia, ib = _interval_bounds(A), _interval_bounds(B)
    if ia is not None and ib is not None and P.dim == 1:
        inter_lo, inter_hi = max(ia[0], ib[0]), min(ia[1], ib[1])
        value = (
            _prob_interval(P, *ia)
            + _prob_interval(P, *ib)
            - 2.0 * _prob_interval(P, inter_lo, inter_hi)
        )
        return max(0.0, value), 0.0
    rng = np.random.default_rng(seed)
    pts = P.sample(n_samples, rng)
    xor = _member_mask(A, pts) ^ _member_mask(B, pts)
    p = float(xor.mean())
    return p, math.sqrt(max(p * (1.0 - p), 0.0) / n_samples)


def sym_diff_distance(A, B, P, n_samples: int = MC_SAMPLES, seed: int = MC_SEED) -> float:
    return sym_diff_distance_with_error(A, B, P, n_samples=n_samples, seed=seed)[0]


# ---------------------------------------------------------------------------
# family distance (bottleneck over permutations, empty-set padding)

def _set_probability(obj, P, n_samples: int, seed: int) -> float:
    bounds = _interval_bounds(obj)
    if bounds is not None and P.dim == 1:
        return _prob_interval(P, *bounds)
    if isinstance(obj, Hull):
        rng = np.random.default_rng(seed)
        pts = P.sample(n_samples, rng)
        return float(_member_mask(obj, pts).mean())
    return region_moments(P, obj, n_samples=n_samples, seed=seed).p


def family_distance(
    family_a,
    family_b,
    base: str = "hausdorff",
    P=None,
    K: int | None = None,
    n_samples: int = MC_SAMPLES,
    seed: int = MC_SEED,
) -> float:
    """Bottleneck family distance: min over pairings of the worst pair cost.

    Shorter families are padded with the empty set.  Empty-vs-empty costs
    0; empty-vs-nonempty costs +inf under Hausdorff and P(set) under the
    symmetric-difference base (our extension; the padding rule leaves
    d(empty, .) undefined otherwise).
    """
    sets_a = list(family_a.regions if isinstance(family_a, SpacePartition) else family_a)
    sets_b = list(family_b.regions if isinstance(family_b, SpacePartition) else family_b)
    if K is None:
        K = max(len(sets_a), len(sets_b))
    K = max(K, 1)
    if K > FAMILY_MAX:
        raise CapacityError(f"family distance limited to {FAMILY_MAX} sets, asked for {K}")
    if len(sets_a) > K or len(sets_b) > K:
        raise CapacityError("family larger than K")
    if base == "sym_diff" and P is None:
        raise ConfigError("sym_diff base needs the law P")
    if base not in ("hausdorff", "sym_diff"):
        raise ConfigError(f"unknown base metric {base!r}")

    cost = np.zeros((K, K))
    for i in range(K):
        for j in range(K):
            a = sets_a[i] if i < len(sets_a) else None
            b = sets_b[j] if j < len(sets_b) else None
            if a is None and b is None:
                cost[i, j] = 0.0
            elif a is None or b is None:
                live = b if a is None else a
                if base == "hausdorff":
                    cost[i, j] = math.inf
                else:
                    cost[i, j] = _set_probability(live, P, n_samples, seed)
            elif base == "hausdorff":
                ha = a if isinstance(a, Hull) else _region_as_hull(a)
                hb = b if isinstance(b, Hull) else _region_as_hull(b)
                cost[i, j] = hausdorff_distance(ha, hb)
            else:
                cost[i, j] = sym_diff_distance(a, b, P, n_samples=n_samples, seed=seed)
    best = math.inf
    for perm in itertools.permutations(range(K)):
        worst = max(cost[i, perm[i]] for i in range(K))
        if worst < best:
            best = worst
    return best


def _region_as_hull(region) -> Hull:
    bounds = _interval_bounds(region)
    if bounds is None:
        raise ConfigError(f"cannot take Hausdorff distance of {type(region).__name__}")
    if not (math.isfinite(bounds[0]) and math.isfinite(bounds[1])):
        raise ConfigError("Hausdorff base needs bounded intervals")
    return Hull(np.array([[bounds[0]], [bounds[1]]]))

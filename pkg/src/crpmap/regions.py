"""Regions of R^d and finite families of them.

Regions only need a vectorized membership test plus, where possible,
enough structure for closed-form moments (intervals, disc sectors,
half-planes).  Families are SpacePartition objects; the coverage flag
records whether the family is asserted to cover the support of the input
law (checked numerically where it matters, never assumed).

Membership at shared boundaries can hold for two adjacent regions; users
assigning points to regions resolve this with a lowest-index tie rule
(see geometry.induced_partition).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] on the line; hi may be +inf, lo -inf."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"interval needs lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def dim(self) -> int:
        return 1

    def contains(self, points) -> np.ndarray:
        x = np.asarray(points).reshape(-1)
        return (x >= self.lo) & (x <= self.hi)


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Convex polygon given by counter-clockwise vertices, shape (k, 2), k >= 3."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise DimensionError("ConvexPolygon needs a (k>=3, 2) vertex array")
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self) -> int:
        return 2

    def contains(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        v = self.vertices
        scale = max(1.0, float(np.abs(v).max())) ** 2
        tol = 1e-12 * scale
        inside = np.ones(len(pts), dtype=bool)
        for i in range(len(v)):
            a, b = v[i], v[(i + 1) % len(v)]
            cross = (b[0] - a[0]) * (pts[:, 1] - a[1]) - (b[1] - a[1]) * (pts[:, 0] - a[0])
            inside &= cross >= -tol
        return inside


@dataclass(frozen=True, eq=False)
class HalfPlanes:
    """Intersection of half-planes {x : normals[i] . x <= offsets[i]}."""

    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        nrm = np.asarray(self.normals, dtype=float).reshape(-1, 2)
        off = np.asarray(self.offsets, dtype=float).reshape(-1)
        if len(nrm) != len(off) or len(nrm) == 0:
            raise DimensionError("HalfPlanes needs matching normals and offsets")
        object.__setattr__(self, "normals", nrm)
        object.__setattr__(self, "offsets", off)

    @property
    def dim(self) -> int:
        return 2

    def contains(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return np.all(pts @ self.normals.T <= self.offsets, axis=1)


@dataclass(frozen=True)
class Sector:
    """Angular wedge {x : angle(x) in [theta0, theta1)} (radially unbounded).

    Angles are taken mod 2*pi; width theta1 - theta0 must lie in (0, 2*pi].
    The origin is assigned to every sector (it is null for the continuous
    laws these are used with).
    """

    theta0: float
    theta1: float

    def __post_init__(self):
        width = self.theta1 - self.theta0
        if not 0 < width <= TWO_PI + 1e-12:
            raise ValueError("sector width must be in (0, 2*pi]")

    @property
    def dim(self) -> int:
        return 2

    @property
    def width(self) -> float:
        return min(self.theta1 - self.theta0, TWO_PI)

    def contains(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        ang = np.arctan2(pts[:, 1], pts[:, 0])
        rel = np.mod(ang - self.theta0, TWO_PI)
        at_origin = (pts[:, 0] == 0) & (pts[:, 1] == 0)
        return (rel < self.width) | at_origin


@dataclass(frozen=True, eq=False)
class Predicate:
    """Opaque membership region: a vectorized (n, d) -> bool callable."""

    fn: Callable[[np.ndarray], np.ndarray]
    ndim: int

    @property
    def dim(self) -> int:
        return self.ndim

    def contains(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, self.ndim)
        return np.asarray(self.fn(pts), dtype=bool).reshape(-1)


@dataclass(frozen=True, eq=False)
class SpacePartition:
    """Ordered finite family of regions, optionally asserted to cover P."""

    regions: tuple
    coverage: bool = True

    def __post_init__(self):
        regions = tuple(self.regions)
        if not regions:
            raise ValueError("SpacePartition needs at least one region")
        dims = {r.dim for r in regions}
        if len(dims) != 1:
            raise DimensionError(f"regions of mixed dimension: {dims}")
        object.__setattr__(self, "regions", regions)

    @property
    def dim(self) -> int:
        return self.regions[0].dim

    def __len__(self) -> int:
        return len(self.regions)

    def __iter__(self):
        return iter(self.regions)


def interval_partition(breakpoints: Sequence[float]) -> SpacePartition:
    """Covering partition of the line cut at the given sorted breakpoints."""
    cuts = [float(b) for b in breakpoints]
    if sorted(cuts) != cuts:
        raise ValueError("breakpoints must be sorted")
    edges = [-math.inf] + cuts + [math.inf]
    return SpacePartition(
        tuple(Interval(edges[i], edges[i + 1]) for i in range(len(edges) - 1))
    )

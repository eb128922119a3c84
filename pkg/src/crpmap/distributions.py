"""Input laws and conditional region moments (p, E[X | X in region]).

Every law exposes sampling, its overall mean, and region moments through
region_moments(): closed form where the (law, region) pair allows it,
otherwise adaptive-Simpson quadrature in d=1 or (stratified, for the
disc) Monte Carlo with reported standard errors.  Monte-Carlo results
carry their sample size and seed; nothing is estimated silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import ConfigError, DegenerateRegionError, DimensionError
from .regions import HalfPlanes, Interval, Sector

SQRT_2PI = math.sqrt(2.0 * math.pi)
P_FLOOR = 1e-9  # below this a region counts as degenerate

# Monte-Carlo defaults; every estimate records the seed actually used
MC_SAMPLES = 10**6
MC_SEED = 20240817
DISC_STRATA = 16  # radial x angular strata for the disc sampler


# ---------------------------------------------------------------------------
# adaptive Simpson quadrature (scalar integrand)

def adaptive_simpson(f, a: float, b: float, tol: float = 1e-10, max_depth: int = 48) -> float:
    """Adaptive Simpson integral of f over [a, b], absolute tolerance tol."""
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, fa, b, fb, m, fm, whole, tol, depth):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return recurse(a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) + recurse(
            m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1
        )

    return recurse(a, fa, b, fb, m, fm, whole, tol, max_depth)


# ---------------------------------------------------------------------------
# moments record

@dataclass(frozen=True, eq=False)
class RegionMoments:
    """Probability and conditional mean of a region, with provenance."""

    p: float
    mean: np.ndarray
    method: str  # closed_form | quadrature | monte_carlo
    se_p: float = 0.0
    se_mean: np.ndarray | None = None
    n_samples: int | None = None
    seed: int | None = None


# ---------------------------------------------------------------------------
# laws

@dataclass(frozen=True)
class UniformSegment:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ConfigError("uniform_segment needs a < b")

    dim = 1

    def mean(self):
        return np.array([0.5 * (self.a + self.b)])

    def cdf(self, x: float) -> float:
        return min(1.0, max(0.0, (x - self.a) / (self.b - self.a)))

    def pdf(self, x: float) -> float:
        return 1.0 / (self.b - self.a) if self.a <= x <= self.b else 0.0

    def quad_range(self):
        return self.a, self.b

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.a, self.b, size=(n, 1))

    def closed_moments(self, region):
        if not isinstance(region, Interval):
            return None
        lo, hi = max(region.lo, self.a), min(region.hi, self.b)
        if hi <= lo:
            return 0.0, np.array([0.0])
        return (hi - lo) / (self.b - self.a), np.array([0.5 * (lo + hi)])


@dataclass(frozen=True)
class Exponential:
    rate: float = 1.0

    def __post_init__(self):
        if not self.rate > 0:
            raise ConfigError("exponential rate must be positive")

    dim = 1

    def mean(self):
        return np.array([1.0 / self.rate])

    def cdf(self, x: float) -> float:
        return 1.0 - math.exp(-self.rate * x) if x > 0 else 0.0

    def pdf(self, x: float) -> float:
        return self.rate * math.exp(-self.rate * x) if x >= 0 else 0.0

    def quad_range(self):
        return 0.0, 50.0 / self.rate  # tail mass ~ e^-50, far below tolerance

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.exponential(1.0 / self.rate, size=(n, 1))

    def closed_moments(self, region):
        if not isinstance(region, Interval):
            return None
        lo, hi = max(region.lo, 0.0), region.hi
        if hi <= lo:
            return 0.0, np.array([0.0])
        lam = self.rate
        e_lo = math.exp(-lam * lo)
        e_hi = math.exp(-lam * hi) if math.isfinite(hi) else 0.0
        p = e_lo - e_hi
        if p <= 0:
            return 0.0, np.array([0.0])
        partial = (lo + 1.0 / lam) * e_lo - ((hi + 1.0 / lam) * e_hi if math.isfinite(hi) else 0.0)
        return p, np.array([partial / p])


@dataclass(frozen=True, eq=False)
class GaussianMixture1D:
    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        mu = np.asarray(self.means, dtype=float)
        var = np.asarray(self.variances, dtype=float)
        if not (w.shape == mu.shape == var.shape) or w.ndim != 1 or w.size == 0:
            raise ConfigError("mixture needs equal-length weights/means/variances")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ConfigError(f"mixture weights sum to {w.sum()}, not 1")
        if (w <= 0).any() or (var <= 0).any():
            raise ConfigError("mixture weights and variances must be positive")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "means", mu)
        object.__setattr__(self, "variances", var)

    dim = 1

    def mean(self):
        return np.array([float(np.dot(self.weights, self.means))])

    def cdf(self, x: float) -> float:
        z = (x - self.means) / np.sqrt(self.variances)
        return float(np.dot(self.weights, ndtr(z)))

    def pdf(self, x: float) -> float:
        sd = np.sqrt(self.variances)
        z = (x - self.means) / sd
        return float(np.dot(self.weights, np.exp(-0.5 * z * z) / (SQRT_2PI * sd)))

    def quad_range(self):
        sd = np.sqrt(self.variances)
        return float((self.means - 8.0 * sd).min()), float((self.means + 8.0 * sd).max())

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        comp = rng.choice(len(self.weights), size=n, p=self.weights)
        sd = np.sqrt(self.variances)
        return (self.means[comp] + sd[comp] * rng.standard_normal(n)).reshape(n, 1)

    def closed_moments(self, region):
        if not isinstance(region, Interval):
            return None
        sd = np.sqrt(self.variances)
        alpha = (region.lo - self.means) / sd
        beta = (region.hi - self.means) / sd
        mass = ndtr(beta) - ndtr(alpha)
        phi_a = np.exp(-0.5 * alpha**2) / SQRT_2PI
        phi_b = np.where(np.isfinite(beta), np.exp(-0.5 * np.minimum(beta, 40.0) ** 2), 0.0) / SQRT_2PI
        phi_a = np.where(np.isfinite(alpha), phi_a, 0.0)
        partial = self.means * mass + sd * (phi_a - phi_b)
        p = float(np.dot(self.weights, mass))
        if p <= 0:
            return 0.0, np.array([0.0])
        return p, np.array([float(np.dot(self.weights, partial)) / p])


@dataclass(frozen=True, eq=False)
class Atomic:
    """Finitely supported law on R^d (atoms as rows)."""

    atoms: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        if atoms.ndim == 1:
            atoms = atoms[:, None]
        probs = np.asarray(self.probs, dtype=float)
        if atoms.shape[0] != probs.shape[0] or probs.ndim != 1 or probs.size == 0:
            raise ConfigError("atomic law needs matching atoms and probabilities")
        if abs(probs.sum() - 1.0) > 1e-12 or (probs < 0).any():
            raise ConfigError("atomic probabilities must be non-negative and sum to 1")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "probs", probs)

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    def mean(self):
        return self.probs @ self.atoms

    def cdf(self, x: float) -> float:
        if self.dim != 1:
            raise DimensionError("cdf only for 1-D atomic laws")
        return float(self.probs[self.atoms[:, 0] <= x].sum())

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        idx = rng.choice(len(self.probs), size=n, p=self.probs)
        return self.atoms[idx]

    def closed_moments(self, region):
        inside = region.contains(self.atoms if self.dim > 1 else self.atoms[:, 0])
        p = float(self.probs[inside].sum())
        if p <= 0:
            return 0.0, np.zeros(self.dim)
        return p, (self.probs[inside] @ self.atoms[inside]) / p


@dataclass(frozen=True, eq=False)
class Empirical:
    """Uniform law on a finite point set (rows of a dataset)."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ConfigError("empirical law needs a non-empty (n, d) array")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def mean(self):
        return self.points.mean(axis=0)

    def cdf(self, x: float) -> float:
        if self.dim != 1:
            raise DimensionError("cdf only for 1-D empirical laws")
        return float((self.points[:, 0] <= x).mean())

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        idx = rng.integers(0, len(self.points), size=n)
        return self.points[idx]

    def closed_moments(self, region):
        inside = region.contains(self.points if self.dim > 1 else self.points[:, 0])
        p = float(inside.mean())
        if p <= 0:
            return 0.0, np.zeros(self.dim)
        return p, self.points[inside].mean(axis=0)


@dataclass(frozen=True)
class UniformDisc:
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ConfigError("disc radius must be positive")

    dim = 2

    def mean(self):
        return np.zeros(2)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        rad = self.radius * np.sqrt(rng.random(n))
        ang = 2.0 * math.pi * rng.random(n)
        return np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])

    def closed_moments(self, region):
        r = self.radius
        if isinstance(region, Sector):
            width = region.width
            p = width / (2.0 * math.pi)
            bisector = region.theta0 + 0.5 * width
            if width >= 2.0 * math.pi - 1e-15:
                return 1.0, np.zeros(2)
            dist = (4.0 * r * math.sin(0.5 * width)) / (3.0 * width)
            return p, dist * np.array([math.cos(bisector), math.sin(bisector)])
        if isinstance(region, HalfPlanes) and len(region.offsets) == 1:
            nrm = region.normals[0]
            scale = float(np.linalg.norm(nrm))
            if scale == 0:
                return None
            u = nrm / scale
            c = float(region.offsets[0]) / scale
            if c >= r:
                return 1.0, np.zeros(2)
            if c <= -r:
                return 0.0, np.zeros(2)
            # region is the disc cut by x . u <= c; complement is a cap
            phi = math.acos(c / r)
            cap_area = r * r * phi - c * math.sqrt(r * r - c * c)
            area = math.pi * r * r - cap_area
            moment = -(2.0 / 3.0) * (r * r - c * c) ** 1.5
            return area / (math.pi * r * r), (moment / area) * u
        return None

    def stratified_sample(self, n: int, rng: np.random.Generator):
        """Stratified disc sample: equal-probability polar strata.

        Returns (points, stratum index); strata are DISC_STRATA x
        DISC_STRATA cells, equal probability each.
        """
        k = DISC_STRATA
        per = max(1, n // (k * k))
        ri, ai = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
        ri = np.repeat(ri.ravel(), per)
        ai = np.repeat(ai.ravel(), per)
        u = (ri + rng.random(ri.size)) / k
        v = (ai + rng.random(ai.size)) / k
        rad = self.radius * np.sqrt(u)
        ang = 2.0 * math.pi * v
        pts = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
        return pts, ri * k + ai


# ---------------------------------------------------------------------------
# dispatch

def _quadrature_moments(P, region: Interval):
    lo_s, hi_s = P.quad_range()
    lo, hi = max(region.lo, lo_s), min(region.hi, hi_s)
    if hi <= lo:
        return 0.0, np.array([0.0])
    p = adaptive_simpson(P.pdf, lo, hi)
    if p <= 0:
        return 0.0, np.array([0.0])
    num = adaptive_simpson(lambda x: x * P.pdf(x), lo, hi)
    return p, np.array([num / p])


def _mc_moments(P, region, n_samples: int, seed: int):
    rng = np.random.default_rng(seed)
    if isinstance(P, UniformDisc) and n_samples >= 2 * DISC_STRATA**2:
        pts, _ = P.stratified_sample(n_samples, rng)
        inside = region.contains(pts)
        k2 = DISC_STRATA * DISC_STRATA
        per = len(pts) // k2
        ind = inside.reshape(k2, per)
        vals = np.where(inside, 1.0, 0.0)[:, None] * pts  # X * indicator
        vals = vals.reshape(k2, per, 2)
        p = float(ind.mean())
        se_p = math.sqrt(float(np.sum(ind.var(axis=1, ddof=1) / per)) / (k2 * k2))
        num = vals.mean(axis=(0, 1))
        se_num = np.sqrt(np.sum(vals.var(axis=1, ddof=1) / per, axis=0) / (k2 * k2))
    else:
        pts = P.sample(n_samples, rng)
        inside = region.contains(pts if P.dim > 1 else pts[:, 0])
        p = float(inside.mean())
        se_p = math.sqrt(max(p * (1.0 - p), 0.0) / n_samples)
        vals = np.where(inside, 1.0, 0.0)[:, None] * pts
        num = vals.mean(axis=0)
        se_num = vals.std(axis=0, ddof=1) / math.sqrt(n_samples)
    if p <= 0:
        return 0.0, np.zeros(P.dim), se_p, np.zeros(P.dim), len(pts)
    mean = num / p
    # first-order error propagation for the ratio num / p
    se_mean = np.sqrt(se_num**2 + (num / p) ** 2 * se_p**2) / p
    return p, mean, se_p, se_mean, len(pts)


def region_moments(
    P,
    region,
    method: str = "auto",
    n_samples: int = MC_SAMPLES,
    seed: int = MC_SEED,
) -> RegionMoments:
    """Moments (P(region), E[X | X in region]) by the requested route.

    method 'auto' prefers closed form, then quadrature (d=1 intervals of
    continuous laws), then Monte Carlo.  Estimated p below 1e-9 raises
    DegenerateRegionError; such a region cannot enter the functional.
    """
    if region.dim != P.dim:
        raise DimensionError(f"region dim {region.dim} != law dim {P.dim}")
    if method in ("auto", "closed_form"):
        closed = P.closed_moments(region) if hasattr(P, "closed_moments") else None
        if closed is not None:
            p, mean = closed
            if p < P_FLOOR:
                raise DegenerateRegionError(f"region probability {p:.3e} below {P_FLOOR}")
            return RegionMoments(p=p, mean=np.asarray(mean, dtype=float), method="closed_form")
        if method == "closed_form":
            raise ConfigError(f"no closed form for {type(P).__name__} x {type(region).__name__}")
    if method in ("auto", "quadrature"):
        if P.dim == 1 and isinstance(region, Interval) and hasattr(P, "pdf"):
            p, mean = _quadrature_moments(P, region)
            if p < P_FLOOR:
                raise DegenerateRegionError(f"region probability {p:.3e} below {P_FLOOR}")
            return RegionMoments(p=p, mean=mean, method="quadrature")
        if method == "quadrature":
            raise ConfigError(f"quadrature unavailable for {type(P).__name__} x {type(region).__name__}")
    p, mean, se_p, se_mean, n_used = _mc_moments(P, region, n_samples, seed)
    if p < P_FLOOR:
        raise DegenerateRegionError(f"estimated region probability {p:.3e} below {P_FLOOR}")
    return RegionMoments(
        p=p, mean=mean, method="monte_carlo", se_p=se_p, se_mean=se_mean,
        n_samples=n_used, seed=seed,
    )


# ---------------------------------------------------------------------------
# CLI-facing spec strings, e.g. "uniform_segment(-1,1)",
# "gaussian_mixture(0.5,-1.01,1; 0.5,1.01,1)", "atomic(0:0.5, 3:0.5)"

def parse_distribution(text: str):
    text = text.strip()
    if "(" not in text or not text.endswith(")"):
        raise ConfigError(f"cannot parse distribution spec {text!r}")
    name, _, body = text.partition("(")
    name = name.strip()
    body = body[:-1].strip()
    try:
        if name == "uniform_segment":
            a, b = (float(v) for v in body.split(","))
            return UniformSegment(a, b)
        if name == "uniform_disc":
            return UniformDisc(float(body))
        if name == "exponential":
            return Exponential(float(body))
        if name == "gaussian_mixture":
            rows = [r for r in body.split(";") if r.strip()]
            trip = np.array([[float(v) for v in r.split(",")] for r in rows])
            if trip.shape[1] != 3:
                raise ConfigError("gaussian_mixture needs weight,mean,variance triples")
            return GaussianMixture1D(trip[:, 0], trip[:, 1], trip[:, 2])
        if name == "atomic":
            pairs = [pair.split(":") for pair in body.split(",")]
            atoms = np.array([float(a) for a, _ in pairs])
            probs = np.array([float(p) for _, p in pairs])
            return Atomic(atoms, probs)
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"cannot parse distribution spec {text!r}: {exc}") from exc
    raise ConfigError(f"unknown distribution {name!r}")

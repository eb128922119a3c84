"""Scripted experiments with persisted, re-runnable run records.

Each experiment walks a (sample size, seed) grid, runs the configured
MAP search on freshly drawn data, and writes one JSON record per cell.
Records are self-contained: the summary step only reads them back, so
summaries can always be recomputed from raw records.  Timing fields are
the single non-deterministic part of a record.

Config files are flat `key = value` text; see ExperimentConfig for the
schema.  Covariances take a scalar, d diagonal entries, or d*d row-major
entries.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .delta import delta, optimal_equal_width_count
from .distributions import (
    Exponential,
    GaussianMixture1D,
    UniformDisc,
    UniformSegment,
)
from .errors import CapacityError, ConfigError, DegenerateRegionError, DimensionError
from .geometry import Hull, family_distance, hull_family, induced_partition
from .gibbs import ChainConfig, map_via_mcmc
from .model import (
    ModelParams,
    as_points,
    cluster_stats,
    partition_log_score,
)
from .partitions import MAX_ENUM_N, Partition
from .regions import ConvexPolygon, Interval, SpacePartition, interval_partition
from .search import is_map_weakly_convex, map_exhaustive, map_interval_dp, map_local_search

CODE_VERSION = "0.1.0"
SCHEMA_VERSION = 1

EXPERIMENTS = ("segment", "disc", "exponential", "bimodal", "atoms", "convergence")
METHODS = ("exhaustive", "dp", "local", "mcmc")

# the heavy-tailed atomic law: value base**m with P(m) = q (1-q)^m, m >= 0
ATOM_BASE = 18.0
ATOM_Q = 1.0 / 36.0


# ---------------------------------------------------------------------------
# configuration

def parse_config(text: str) -> dict[str, str]:
    """Flat `key = value` lines; '#' starts a comment; later keys win."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """Validated experiment settings.

    Keys: experiment, method, out, dim, alpha, within_cov, between_cov,
    sizes, seeds, r_ball; optional: restarts, mcmc_iterations,
    mcmc_burn_in, max_clusters, ratio_n, control, plot.
    """

    experiment: str
    dim: int
    alpha: float
    within_cov: np.ndarray
    between_cov: np.ndarray
    sizes: tuple[int, ...]
    seeds: tuple[int, ...]
    method: str
    out_dir: str
    r_ball: float = 1.0
    options: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if not self.seeds:
            raise ConfigError("seeds must be non-empty")
        if not self.sizes:
            raise ConfigError("sizes must be non-empty")
        if self.method == "dp" and self.dim != 1:
            raise ConfigError("method dp requires dim = 1")
        if self.method == "exhaustive" and max(self.sizes) > MAX_ENUM_N:
            # a resource limit, not a malformed config: surfaces as exit 3
            raise CapacityError(f"method exhaustive requires n <= {MAX_ENUM_N}")

    def params(self) -> ModelParams:
        return ModelParams(
            dim=self.dim,
            alpha=self.alpha,
            within_cov=self.within_cov,
            between_cov=self.between_cov,
        )

    def opt_int(self, key: str, default: int) -> int:
        return int(self.options.get(key, default))

    def opt_bool(self, key: str, default: bool = False) -> bool:
        val = str(self.options.get(key, default)).strip().lower()
        return val in ("1", "true", "yes", "on")


_KNOWN_KEYS = {
    "experiment", "method", "out", "dim", "alpha", "within_cov", "between_cov",
    "sizes", "seeds", "r_ball", "restarts", "mcmc_iterations", "mcmc_burn_in",
    "max_clusters", "ratio_n", "control", "plot", "jobs",
}


def config_from_mapping(mapping: dict[str, str], default_out: str = "runs") -> ExperimentConfig:
    unknown = set(mapping) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        experiment = mapping["experiment"]
    except KeyError:
        raise ConfigError("config needs an 'experiment' key") from None
    dim = int(mapping.get("dim", "2" if experiment == "disc" else "1"))
    options = {
        k: mapping[k]
        for k in ("restarts", "mcmc_iterations", "mcmc_burn_in", "max_clusters",
                  "ratio_n", "control", "plot")
        if k in mapping
    }
    return ExperimentConfig(
        experiment=experiment,
        dim=dim,
        alpha=float(mapping.get("alpha", "1.0")),
        within_cov=np.array(_floats(mapping.get("within_cov", "1.0"))),
        between_cov=np.array(_floats(mapping.get("between_cov", "1.0"))),
        sizes=_ints(mapping.get("sizes", "200")),
        seeds=_ints(mapping.get("seeds", "0")),
        method=mapping.get("method", "dp" if dim == 1 else "local"),
        out_dir=mapping.get("out", default_out),
        r_ball=float(mapping.get("r_ball", "1.0")),
        options=options,
        raw=dict(mapping),
    )


def load_config(path) -> ExperimentConfig:
    text = Path(path).read_text()
    return config_from_mapping(parse_config(text))


# ---------------------------------------------------------------------------
# data generation per experiment

def experiment_law(cfg: ExperimentConfig):
    if cfg.experiment in ("segment", "convergence"):
        return UniformSegment(-1.0, 1.0)
    if cfg.experiment == "bimodal":
        return GaussianMixture1D([0.5, 0.5], [-1.01, 1.01], [1.0, 1.0])
    if cfg.experiment == "exponential":
        return Exponential(1.0)
    if cfg.experiment == "disc":
        return UniformDisc(1.0)
    if cfg.experiment == "atoms":
        return UniformSegment(-1.0, 1.0) if cfg.opt_bool("control") else None
    raise ConfigError(f"no law for experiment {cfg.experiment!r}")


def sample_atom_exponents(n: int, seed: int) -> np.ndarray:
    """Exponents m with P(m) = q (1-q)^m, m = 0, 1, 2, ..."""
    rng = np.random.default_rng(seed)
    return rng.geometric(ATOM_Q, size=n) - 1


def atom_values(exponents: np.ndarray) -> np.ndarray:
    """base**m as extended-precision floats: magnitudes overflow doubles."""
    return np.longdouble(ATOM_BASE) ** exponents.astype(np.int64)


# ---------------------------------------------------------------------------
# search dispatch and record assembly

def run_search(method: str, data, params: ModelParams, seed: int, cfg: ExperimentConfig | None = None):
    """Run the chosen MAP search; returns (partition, log score)."""
    pts = as_points(data, params.dim)
    if method == "exhaustive":
        return map_exhaustive(pts, params)
    if method == "dp":
        dtype = pts.dtype if pts.dtype == np.longdouble else np.float64
        return map_interval_dp(pts, params, dtype=dtype)
    if method == "local":
        restarts = cfg.opt_int("restarts", 20) if cfg else 20
        return map_local_search(pts, params, restarts=restarts, rng=np.random.default_rng(seed))
    if method == "mcmc":
        iters = cfg.opt_int("mcmc_iterations", 2000) if cfg else 2000
        burn = cfg.opt_int("mcmc_burn_in", iters // 10) if cfg else iters // 10
        chain = ChainConfig(iterations=iters, burn_in=burn, seed=seed)
        return map_via_mcmc(pts, params, chain)
    raise ConfigError(f"unknown method {method!r}")


def _hull_descriptions(partition: Partition, pts: np.ndarray):
    hulls = hull_family(partition, pts)
    if pts.shape[1] == 1:
        return [[h.lo, h.hi] for h in hulls]
    return [h.vertices.tolist() for h in hulls]


def _delta_of_hulls(partition: Partition, pts: np.ndarray, law, params: ModelParams):
    """Functional value of the hull family under the experiment law.

    None when a hull is P-degenerate (single points have probability 0
    under continuous laws) or the law is unavailable.
    """
    if law is None:
        return None
    try:
        if pts.shape[1] == 1:
            regions = [Interval(float(lo), float(hi)) for lo, hi in _hull_descriptions(partition, pts)]
        else:
            regions = []
            for h in hull_family(partition, pts):
                if len(h.vertices) < 3:
                    return None
                regions.append(ConvexPolygon(h.vertices))
        fam = SpacePartition(tuple(regions), coverage=False)
        return delta(fam, law, params.root_prec_within, n_samples=10**5)
    except (DegenerateRegionError, ValueError):
        return None


def build_record(
    cfg: ExperimentConfig,
    n: int,
    seed: int,
    partition: Partition,
    log_score: float,
    pts: np.ndarray,
    params: ModelParams,
    elapsed: float,
    extras: dict,
    include_hulls: bool = True,
    law="unset",
) -> dict:
    if law == "unset":
        law = experiment_law(cfg)
    with np.errstate(over="ignore"):
        score64 = float(log_score)
    stats = cluster_stats(partition, pts, cfg.r_ball)
    convex: bool | None = None
    if params.dim <= 2:
        with np.errstate(over="ignore"):
            flat = np.asarray(pts, dtype=float)
        if np.isfinite(flat).all():
            convex = bool(is_map_weakly_convex(partition, flat))
    record = {
        "schema_version": SCHEMA_VERSION,
        "code_version": CODE_VERSION,
        "experiment": cfg.experiment,
        "method": cfg.method,
        "n": int(n),
        "seed": int(seed),
        "config": dict(cfg.raw),
        "model": {
            "dim": params.dim,
            "alpha": params.alpha,
            "within_cov": params.within_cov.tolist(),
            "between_cov": params.between_cov.tolist(),
            "root_prec_within": params.root_prec_within.tolist(),
        },
        "map": {
            "labels": list(partition.labels),
            "cluster_count": partition.n_blocks,
            "sizes": sorted(partition.block_sizes, reverse=True),
            # scores beyond float64 range (huge-magnitude data scored in
            # extended precision) are kept as strings to stay valid JSON
            "log_score": score64 if math.isfinite(score64) else None,
            "log_score_repr": None if math.isfinite(score64) else str(log_score),
        },
        "weakly_convex": convex,
        "cluster_stats": {
            "r": cfg.r_ball,
            "m_n": stats.m_n,
            "M_n": stats.M_n,
            "m_r_center": stats.m_r_center,
            "M_r_center": stats.M_r_center,
            "m_r_intersect": stats.m_r_intersect,
            "M_r_intersect": stats.M_r_intersect,
            "k_r_intersect": stats.k_r_intersect,
        },
        "extras": extras,
        "timing_s": elapsed,
    }
    if include_hulls:
        record["hulls"] = _hull_descriptions(partition, np.asarray(pts, dtype=float))
        record["delta_hulls"] = _delta_of_hulls(partition, np.asarray(pts, dtype=float), law, params)
    else:
        record["hulls"] = None
        record["delta_hulls"] = None
    return record


# ---------------------------------------------------------------------------
# per-cell runners

def _cell_standard(cfg: ExperimentConfig, n: int, seed: int) -> dict:
    """One (n, seed) cell for the sampled-law experiments."""
    law = experiment_law(cfg)
    params = cfg.params()
    rng = np.random.default_rng(seed)
    pts = law.sample(n, rng)
    start = time.perf_counter()
    partition, score = run_search(cfg.method, pts, params, seed, cfg)
    elapsed = time.perf_counter() - start
    extras: dict = {}
    if cfg.experiment == "segment":
        root = float(params.root_prec_within[0, 0])
        extras["optimal_equal_width_count"] = optimal_equal_width_count(root)
    if cfg.experiment == "bimodal":
        single = Partition.one_block(n)
        extras["single_log_score"] = partition_log_score(single, pts, params)
        extras["is_single_cluster"] = partition.n_blocks == 1
        split = induced_partition(interval_partition([0.0]), pts)
        if split.n_blocks == 2:
            extras["split_at_zero_log_score"] = partition_log_score(split, pts, params)
            extras["split_beats_single"] = (
                extras["split_at_zero_log_score"] > extras["single_log_score"]
            )
    if cfg.experiment == "convergence":
        extras.update(_convergence_extras(cfg, partition, pts, params))
    return build_record(cfg, n, seed, partition, score, pts, params, elapsed, extras)


def _convergence_extras(cfg, partition, pts, params) -> dict:
    root = float(params.root_prec_within[0, 0])
    n_star = optimal_equal_width_count(root)
    maximiser = interval_partition(np.linspace(-1.0, 1.0, n_star + 1)[1:-1])
    law = UniformSegment(-1.0, 1.0)
    hulls = hull_family(partition, pts)
    try:
        dist = family_distance(
            hulls, maximiser, base="sym_diff", P=law,
            K=max(len(hulls), len(maximiser.regions)),
        )
    except CapacityError:
        dist = None
    return {"n_star": n_star, "family_distance_to_maximiser": dist}


def _cell_ratio(cfg: ExperimentConfig, n: int, seed: int) -> dict:
    """Score-growth check: n-th root of the induced-partition score against
    (n/e) exp(functional), for the fixed two-interval split of uniform [-1,1]."""
    law = UniformSegment(-1.0, 1.0)
    params = cfg.params()
    rng = np.random.default_rng(seed)
    pts = law.sample(n, rng)
    split = interval_partition([0.0])
    start = time.perf_counter()
    induced = induced_partition(split, pts)
    log_q = partition_log_score(induced, pts, params)
    value = delta(split, law, params.root_prec_within)
    elapsed = time.perf_counter() - start
    log_ratio = log_q / n - (math.log(n) - 1.0) - value
    extras = {
        "kind": "ratio",
        "delta_split": value,
        "log_score": log_q,
        "nth_root_ratio": math.exp(log_ratio),
    }
    return build_record(cfg, n, seed, induced, log_q, pts, params, elapsed, extras)


def _cell_atoms(cfg: ExperimentConfig, seed: int) -> dict:
    """Track the minimum cluster size along a growing heavy-tailed sample.

    Evaluates the DP MAP at each record event (first time a new largest
    atom appears) and on the configured size grid; logs whether the new
    largest atom sits alone in its own cluster.
    """
    params = cfg.params()
    n_max = max(cfg.sizes)
    control = cfg.opt_bool("control")
    record_set: set[int] = set()
    if control:
        law = UniformSegment(-1.0, 1.0)
        pts = law.sample(n_max, np.random.default_rng(seed))
        exponents = None
        eval_ns = sorted(set(cfg.sizes))
    else:
        exponents = sample_atom_exponents(n_max, seed)
        pts = atom_values(exponents)[:, None]
        best = -1
        for i, m in enumerate(exponents):
            if m > best:
                best = int(m)
                record_set.add(i + 1)
        eval_ns = sorted(set(cfg.sizes) | record_set)
    start = time.perf_counter()
    events = []
    m_one_ns = []
    for n in eval_ns:
        partition, score = run_search(cfg.method, pts[:n], params, seed, cfg)
        stats_min = min(partition.block_sizes)
        event = {
            "n": int(n),
            "cluster_count": partition.n_blocks,
            "m_n": int(stats_min),
            "min_over_n": stats_min / n,
        }
        if not control:
            max_idx = int(np.argmax(exponents[:n]))
            own_label = partition.labels[max_idx]
            event["max_exponent"] = int(exponents[:n].max())
            event["is_record_n"] = n in record_set
            event["new_max_alone"] = partition.labels.count(own_label) == 1
        if stats_min == 1:
            m_one_ns.append(int(n))
        events.append(event)
    elapsed = time.perf_counter() - start
    # final full-sample record carries the event log
    partition, score = run_search(cfg.method, pts, params, seed, cfg)
    extras = {
        "control": control,
        "events": events,
        "n_with_min_one": m_one_ns,
        "eval_points": [int(n) for n in eval_ns],
    }
    return build_record(
        cfg, n_max, seed, partition, score, pts, params, elapsed, extras,
        include_hulls=control,
    )


def _run_cell(task) -> dict:
    cfg, n, seed, kind = task
    try:
        if kind == "atoms":
            return _cell_atoms(cfg, seed)
        if kind == "ratio":
            return _cell_ratio(cfg, n, seed)
        return _cell_standard(cfg, n, seed)
    except Exception as exc:  # partial failure: record and continue
        return {
            "schema_version": SCHEMA_VERSION,
            "code_version": CODE_VERSION,
            "experiment": cfg.experiment,
            "method": cfg.method,
            "n": int(n),
            "seed": int(seed),
            "error": f"{type(exc).__name__}: {exc}",
        }


# ---------------------------------------------------------------------------
# experiment driver

def _cell_tasks(cfg: ExperimentConfig):
    if cfg.experiment == "atoms":
        return [(cfg, max(cfg.sizes), seed, "atoms") for seed in cfg.seeds]
    tasks = [(cfg, n, seed, "standard") for n in cfg.sizes for seed in cfg.seeds]
    if cfg.experiment == "convergence":
        ratio_n = cfg.opt_int("ratio_n", 0)
        if ratio_n > 0:
            tasks += [(cfg, ratio_n, seed, "ratio") for seed in cfg.seeds]
    return tasks


def _record_name(record: dict) -> str:
    kind = record.get("extras", {}).get("kind", "")
    tag = "_ratio" if kind == "ratio" else ""
    return f"{record['experiment']}{tag}_n{record['n']}_seed{record['seed']}.json"


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> dict:
    """Run all grid cells, persist records and summary; returns the summary."""
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tasks = _cell_tasks(cfg)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_cell, tasks))
    else:
        records = [_run_cell(t) for t in tasks]
    for record in records:
        (out / _record_name(record)).write_text(json.dumps(record, indent=1))
    summary = summarize_records(records)
    (out / "summary.json").write_text(json.dumps(summary, indent=1))
    if cfg.opt_bool("plot"):
        _write_plots(cfg, records, out)
    return summary


# ---------------------------------------------------------------------------
# summaries (recomputable from records alone)

def _median(values) -> float | None:
    vals = sorted(v for v in values if v is not None)
    if not vals:
        return None
    k = len(vals)
    mid = k // 2
    return float(vals[mid]) if k % 2 else 0.5 * float(vals[mid - 1] + vals[mid])


def summarize_records(records: list[dict]) -> dict:
    """Aggregate per-(experiment, n) statistics from raw records."""
    good = [r for r in records if "error" not in r]
    failed = [
        {"experiment": r["experiment"], "n": r["n"], "seed": r["seed"], "error": r["error"]}
        for r in records
        if "error" in r
    ]
    by_n: dict[tuple[str, int], list[dict]] = {}
    for r in good:
        kind = r.get("extras", {}).get("kind", "")
        by_n.setdefault((r["experiment"] + (":" + kind if kind else ""), r["n"]), []).append(r)

    cells = []
    for (label, n), rows in sorted(by_n.items()):
        counts = [r["map"]["cluster_count"] for r in rows]
        cell = {
            "experiment": label,
            "n": n,
            "runs": len(rows),
            "median_cluster_count": _median(counts),
            "cluster_counts": counts,
            "median_log_score": _median(
                [s for r in rows if (s := r["map"]["log_score"]) is not None]
            ),
            "weakly_convex_all": all(r.get("weakly_convex") in (True, None) for r in rows),
        }
        extras = [r.get("extras", {}) for r in rows]
        if label == "bimodal":
            cell["single_cluster_fraction"] = float(
                np.mean([e.get("is_single_cluster", False) for e in extras])
            )
            beats = [e.get("split_beats_single") for e in extras if "split_beats_single" in e]
            if beats:
                cell["split_beats_single_fraction"] = float(np.mean(beats))
        if label == "convergence":
            cell["median_family_distance"] = _median(
                [e.get("family_distance_to_maximiser") for e in extras]
            )
        if label == "convergence:ratio":
            cell["nth_root_ratios"] = [e.get("nth_root_ratio") for e in extras]
        if label == "atoms":
            per_seed = [
                {
                    "seed": r["seed"],
                    "control": e.get("control", False),
                    "n_with_min_one": e.get("n_with_min_one", []),
                    "min_over_n_from_500": [
                        ev["min_over_n"] for ev in e.get("events", []) if ev["n"] >= 500
                    ],
                }
                for r, e in zip(rows, extras)
            ]
            cell["per_seed"] = per_seed
            live = [s for s in per_seed if not s["control"]]
            if live:
                cell["seeds_with_three_min_one"] = sum(
                    1 for s in live if len(s["n_with_min_one"]) >= 3
                )
        cells.append(cell)

    summary: dict = {
        "schema_version": SCHEMA_VERSION,
        "code_version": CODE_VERSION,
        "cells": cells,
        "failed_cells": failed,
    }
    disc_rows = [r for r in good if r["experiment"] == "disc"]
    if disc_rows:
        summary["disc_instability"] = _disc_instability(disc_rows)
    return summary


def _disc_instability(rows: list[dict]) -> list[dict]:
    """Pairwise family distances between same-n runs of the disc experiment.

    Nearly equal scores with far-apart hull families witness that the
    maximiser is far from unique (any rotation works as well).
    """
    law = UniformDisc(1.0)
    rng = np.random.default_rng(20240818)
    pts = law.sample(10**5, rng)
    from .geometry import _member_mask  # shared-sample bottleneck distance

    by_n: dict[int, list[dict]] = {}
    for r in rows:
        by_n.setdefault(r["n"], []).append(r)
    out = []
    for n, group in sorted(by_n.items()):
        masks = {}
        for r in group:
            hull_masks = []
            for verts in r["hulls"]:
                arr = np.asarray(verts, dtype=float)
                hull_masks.append(_member_mask(Hull(arr), pts))
            masks[r["seed"]] = hull_masks
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                a, b = group[i], group[j]
                dist = _mask_family_distance(masks[a["seed"]], masks[b["seed"]])
                denom = max(abs(a["map"]["log_score"]), abs(b["map"]["log_score"]), 1.0)
                out.append(
                    {
                        "n": n,
                        "seed_pair": [a["seed"], b["seed"]],
                        "family_distance": dist,
                        "relative_score_gap": abs(
                            a["map"]["log_score"] - b["map"]["log_score"]
                        ) / denom,
                    }
                )
    return out


def _mask_family_distance(masks_a, masks_b) -> float:
    import itertools

    K = max(len(masks_a), len(masks_b))
    if K > 8:
        raise CapacityError("family distance limited to 8 sets")
    cost = np.zeros((K, K))
    for i in range(K):
        for j in range(K):
            if i >= len(masks_a) and j >= len(masks_b):
                cost[i, j] = 0.0
            elif i >= len(masks_a):
                cost[i, j] = float(masks_b[j].mean())
            elif j >= len(masks_b):
                cost[i, j] = float(masks_a[i].mean())
            else:
                cost[i, j] = float((masks_a[i] ^ masks_b[j]).mean())
    return min(max(cost[i, p[i]] for i in range(K)) for p in itertools.permutations(range(K)))


# ---------------------------------------------------------------------------
# optional SVG scatter plots (never load-bearing)

def _write_plots(cfg: ExperimentConfig, records: list[dict], out: Path) -> None:
    for record in records:
        if "error" in record or record.get("hulls") is None:
            continue
        law = experiment_law(cfg)
        if law is None:
            continue
        rng = np.random.default_rng(record["seed"])
        pts = law.sample(record["n"], rng)
        path = out / (_record_name(record).replace(".json", ".svg"))
        write_svg_scatter(path, pts, record["map"]["labels"], record["hulls"])


def write_svg_scatter(path, pts: np.ndarray, labels, hulls) -> None:
    """Tiny self-contained scatter plot with hull outlines."""
    pts = np.asarray(pts, dtype=float)
    if pts.shape[1] == 1:
        ys = (np.asarray(labels, dtype=float) + 1.0) / (max(labels) + 2.0)
        pts = np.column_stack([pts[:, 0], ys])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    size = 480.0
    margin = 10.0

    def sx(x):
        return margin + (x - lo[0]) / span[0] * size

    def sy(y):
        return margin + size - (y - lo[1]) / span[1] * size

    palette = ["#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d35400",
               "#16a085", "#7f8c8d", "#2c3e50"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(size + 2 * margin)}" '
        f'height="{int(size + 2 * margin)}" viewBox="0 0 {int(size + 2 * margin)} '
        f'{int(size + 2 * margin)}">'
    ]
    for k, hull in enumerate(hulls):
        arr = np.asarray(hull, dtype=float)
        color = palette[k % len(palette)]
        if arr.ndim == 1 or arr.shape[1] == 1 or arr.shape == (2,):
            continue
        coords = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in arr)
        parts.append(f'<polygon points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
    for (x, y), lab in zip(pts, labels):
        color = palette[int(lab) % len(palette)]
        parts.append(f'<circle cx="{sx(x):.1f}" cy="{sy(y):.1f}" r="2.2" fill="{color}" fill-opacity="0.7"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts))

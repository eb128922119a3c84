"""Command-line front end.

Subcommands: generate, score, map, delta, metrics, experiment,
convergence.  Exit codes: 0 success, 2 configuration/usage error,
3 capacity error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .delta import delta, delta_equal_width, maximize_delta_intervals, optimal_equal_width_count
from .distributions import parse_distribution
from .errors import (
    CapacityError,
    ConfigError,
    CrpMapError,
    NumericalError,
)
from .experiments import (
    build_record,
    config_from_mapping,
    load_config,
    parse_config,
    run_experiment,
    run_search,
)
from .geometry import family_distance, hull_family
from .model import ModelParams, partition_log_score, crp_log_prior, as_points
from .partitions import Partition
from .regions import Interval, interval_partition


# ---------------------------------------------------------------------------
# dataset files: CSV with header x1[,x2,...]

def write_dataset(path, pts: np.ndarray) -> None:
    pts = as_points(pts)
    header = ",".join(f"x{i + 1}" for i in range(pts.shape[1]))
    lines = [header]
    for row in pts:
        lines.append(",".join(f"{v:.17g}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_dataset(path) -> np.ndarray:
    text = Path(path).read_text().strip().splitlines()
    if not text or not text[0].lstrip().startswith("x1"):
        raise ConfigError(f"{path}: expected a CSV dataset with header x1[,x2,...]")
    rows = [[float(v) for v in line.split(",")] for line in text[1:] if line.strip()]
    if not rows:
        raise ConfigError(f"{path}: dataset has no rows")
    return np.asarray(rows, dtype=float)


def _parse_labels(text: str) -> Partition:
    return Partition.from_labels([int(v) for v in text.replace(";", ",").split(",") if v.strip()])


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=1)
    if out:
        Path(out).write_text(text + "\n")
        print(out)
    else:
        print(text)


def _model_from_args(args, dim: int) -> ModelParams:
    mapping = {}
    if getattr(args, "config", None):
        mapping = parse_config(Path(args.config).read_text())
    alpha = args.alpha if args.alpha is not None else float(mapping.get("alpha", 1.0))
    within = args.within if args.within is not None else mapping.get("within_cov", "1.0")
    between = args.between if args.between is not None else mapping.get("between_cov", "1.0")

    def cov(text):
        vals = [float(v) for v in str(text).replace(";", ",").split(",") if str(v).strip()]
        return vals[0] if len(vals) == 1 else np.array(vals)

    return ModelParams(dim=dim, alpha=alpha, within_cov=cov(within), between_cov=cov(between))


# ---------------------------------------------------------------------------
# subcommands

def _cmd_generate(args) -> int:
    law = parse_distribution(args.dist)
    rng = np.random.default_rng(args.seed)
    pts = law.sample(args.n, rng)
    write_dataset(args.out, pts)
    print(args.out)
    return 0


def _cmd_score(args) -> int:
    pts = read_dataset(args.data)
    params = _model_from_args(args, pts.shape[1])
    partition = _parse_labels(args.labels)
    if partition.n != pts.shape[0]:
        raise ConfigError(f"{partition.n} labels for {pts.shape[0]} points")
    payload = {
        "n": pts.shape[0],
        "cluster_count": partition.n_blocks,
        "log_score": partition_log_score(partition, pts, params),
        "log_prior": crp_log_prior(partition, params.alpha),
    }
    _emit(payload, args.out)
    return 0


def _cmd_map(args) -> int:
    pts = read_dataset(args.data)
    params = _model_from_args(args, pts.shape[1])
    cfg_map = {
        "experiment": "segment" if pts.shape[1] == 1 else "disc",
        "dim": str(pts.shape[1]),
        "alpha": str(params.alpha),
        "within_cov": ",".join(f"{v:.17g}" for v in params.within_cov.ravel()),
        "between_cov": ",".join(f"{v:.17g}" for v in params.between_cov.ravel()),
        "sizes": str(pts.shape[0]),
        "seeds": str(args.seed),
        "method": args.method,
        "out": args.out or ".",
        "r_ball": str(args.r_ball),
    }
    cfg = config_from_mapping(cfg_map)
    start = time.perf_counter()
    partition, score = run_search(args.method, pts, params, args.seed, cfg)
    elapsed = time.perf_counter() - start
    record = build_record(
        cfg, pts.shape[0], args.seed, partition, score, pts, params, elapsed,
        {"kind": "cli_map"}, law=None,
    )
    record["experiment"] = "cli"
    _emit(record, args.out)
    return 0


def _cmd_delta(args) -> int:
    law = parse_distribution(args.dist)
    payload: dict = {"dist": args.dist, "R": args.R}
    if args.equal_width is not None:
        payload["equal_width_n"] = args.equal_width
        payload["delta"] = delta_equal_width(args.equal_width, args.R)
        payload["optimal_equal_width_count"] = optimal_equal_width_count(args.R)
    elif args.optimize:
        result = maximize_delta_intervals(law, args.R, args.max_clusters, seed=args.seed)
        payload["delta"] = result.value
        payload["breakpoints"] = [
            reg.hi for reg in result.partition.regions[:-1]
        ]
        payload["per_count"] = {
            str(k): {"delta": v, "breakpoints": list(b)} for k, (v, b) in result.per_count.items()
        }
    else:
        if args.breakpoints is None:
            raise ConfigError("delta needs --breakpoints, --equal-width, or --optimize")
        breaks = [float(v) for v in args.breakpoints.split(",") if v.strip()]
        partition = interval_partition(breaks)
        payload["breakpoints"] = breaks
        payload["delta"] = delta(
            partition, law, args.R, method=args.moments, n_samples=args.n_samples, seed=args.seed
        )
    _emit(payload, args.out)
    return 0


def _family_from_args(text: str | None, data, labels: str | None):
    if text:
        sets = []
        for part in text.split(";"):
            lo, hi = (float(v) for v in part.split(","))
            sets.append(Interval(lo, hi))
        return sets
    if data is None or labels is None:
        raise ConfigError("metrics needs --a/--b interval lists or --data with label pairs")
    return list(hull_family(_parse_labels(labels), data))


def _cmd_metrics(args) -> int:
    law = parse_distribution(args.dist) if args.dist else None
    pts = read_dataset(args.data) if args.data else None
    fam_a = _family_from_args(args.a, pts, args.labels_a)
    fam_b = _family_from_args(args.b, pts, args.labels_b)
    if args.base == "sym_diff" and law is None:
        raise ConfigError("base sym_diff needs --dist")
    value = family_distance(
        fam_a, fam_b, base=args.base, P=law,
        K=max(len(fam_a), len(fam_b)), n_samples=args.n_samples, seed=args.seed,
    )
    _emit(
        {"base": args.base, "family_distance": value, "k": max(len(fam_a), len(fam_b))},
        args.out,
    )
    return 0


def _cmd_experiment(args, force_experiment: str | None = None) -> int:
    cfg = load_config(args.config)
    if force_experiment and cfg.experiment != force_experiment:
        raise ConfigError(
            f"this subcommand runs the {force_experiment!r} experiment, config says {cfg.experiment!r}"
        )
    if args.out:
        cfg = config_from_mapping({**cfg.raw, "out": args.out})
    jobs = args.jobs if args.jobs else int(cfg.raw.get("jobs", 1))
    summary = run_experiment(cfg, jobs=jobs)
    out = Path(cfg.out_dir) / "summary.json"
    if summary["failed_cells"]:
        print(f"warning: {len(summary['failed_cells'])} cells failed; see summary", file=sys.stderr)
    print(out)
    return 0


def _cmd_convergence(args) -> int:
    return _cmd_experiment(args, force_experiment="convergence")


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crpmap",
        description="Score, search, and analyze partitions under the "
        "Gauss-Gauss CRP mixture model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a dataset CSV from a distribution spec")
    p.add_argument("--dist", required=True, help='e.g. "uniform_segment(-1,1)"')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_generate)

    def model_flags(p):
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--within", default=None, help="within-cluster covariance (scalar/diag/row-major)")
        p.add_argument("--between", default=None, help="between-cluster covariance")
        p.add_argument("--config", default=None, help="flat key=value file with model params")

    p = sub.add_parser("score", help="log posterior score of a fixed partition")
    p.add_argument("--data", required=True)
    p.add_argument("--labels", required=True, help="comma-separated block labels")
    model_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_score)

    p = sub.add_parser("map", help="search for the MAP partition")
    p.add_argument("--data", required=True)
    p.add_argument("--method", default="dp", choices=["exhaustive", "dp", "local", "mcmc"])
    model_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r-ball", type=float, default=1.0, dest="r_ball")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_map)

    p = sub.add_parser("delta", help="evaluate or maximize the partition functional")
    p.add_argument("--dist", required=True)
    p.add_argument("--R", type=float, required=True, help="scalar root precision")
    p.add_argument("--breakpoints", default=None, help="comma-separated interval breakpoints")
    p.add_argument("--equal-width", type=int, default=None, dest="equal_width")
    p.add_argument("--optimize", action="store_true")
    p.add_argument("--max-clusters", type=int, default=8, dest="max_clusters")
    p.add_argument("--moments", default="auto", choices=["auto", "closed_form", "quadrature", "monte_carlo"])
    p.add_argument("--n-samples", type=int, default=10**6, dest="n_samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_delta)

    p = sub.add_parser("metrics", help="bottleneck family distance between set families")
    p.add_argument("--base", default="hausdorff", choices=["hausdorff", "sym_diff"])
    p.add_argument("--dist", default=None)
    p.add_argument("--a", default=None, help='interval family "lo,hi;lo,hi"')
    p.add_argument("--b", default=None)
    p.add_argument("--data", default=None, help="dataset whose labelings induce hull families")
    p.add_argument("--labels-a", default=None, dest="labels_a")
    p.add_argument("--labels-b", default=None, dest="labels_b")
    p.add_argument("--n-samples", type=int, default=10**6, dest="n_samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_metrics)

    for name, fn in (("experiment", _cmd_experiment), ("convergence", _cmd_convergence)):
        p = sub.add_parser(name, help=f"run a scripted {name}")
        p.add_argument("--config", required=True)
        p.add_argument("--jobs", type=int, default=0)
        p.add_argument("--out", default=None)
        p.set_defaults(fn=fn)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4
    except (CrpMapError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

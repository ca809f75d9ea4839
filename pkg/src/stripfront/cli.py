"""Command-line front end.

One subcommand per experiment plus ``plan``, ``estimate``, and ``sample``.
All data goes to files (JSON or CSV); standard output carries exactly one
summary line per run, so pipelines stay clean.  Identical invocations
produce byte-identical artifacts: the default seed is a fixed documented
constant and no timestamps or environment state enter the outputs.

Frontier and kernel specs use compact strings: ``constant:1.0``,
``affine:0.5,1.0``, ``cosine:1.0,0.3``, ``piecewise-linear:0.8,1.2,0.6``;
kernels are ``epanechnikov`` (default), ``biweight``, ``triangular``.
A ``--config FILE`` of ``key = value`` lines may hold any long option;
explicit flags override file values.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import __version__, experiments, reporting, sim
from .estimator import EstimatorParams, plan_sequences, strip_maxima, estimate
from .model import KERNEL_FAMILIES, Frontier, Kernel, kernel
from .sim import sample_uniform

DEFAULT_SEED = 1729  # fixed so that seedless runs are still reproducible
DEFAULT_GAMMA = 0.05

COMMANDS = ("estimate", "clt", "sandwich", "gap-rate", "weight-sum", "plan",
            "sample")


class UsageError(ValueError):
    """Bad command line or config file; exits with status 2."""


@dataclass
class RunConfig:
    """Fully validated run description (the CLI's parse product)."""

    command: str
    frontier: Frontier | None = None
    kernel: Kernel | None = None
    alpha: float = 1.0
    a: float = 0.9
    b: float = 0.5
    n: int | None = None
    n_grid: list | None = None
    k: int | None = None
    h: float | None = None
    replicates: int = 500
    gamma: float = DEFAULT_GAMMA
    gamma_policy: str = "fixed"
    x: float = 0.5
    seed: int = DEFAULT_SEED
    out_format: str = "json"
    out_path: str | None = None
    threads: int = 0


# ---------------------------------------------------------------------------
# spec-string parsing


def parse_frontier(spec: str) -> Frontier:
    """Build a frontier from its ``family:p1,p2,...`` string."""
    family, sep, rest = spec.partition(":")
    if not sep or not rest:
        raise UsageError(f"frontier spec {spec!r} must look like 'family:p1,p2'")
    try:
        params = [float(tok) for tok in rest.split(",")]
    except ValueError:
        raise UsageError(f"frontier spec {spec!r} has non-numeric parameters")
    try:
        if family == "constant":
            if len(params) != 1:
                raise ValueError("constant takes exactly 1 parameter (level)")
            return Frontier.constant(params[0])
        if family == "affine":
            if len(params) != 2:
                raise ValueError("affine takes 2 parameters (intercept, slope)")
            return Frontier.affine(params[0], params[1])
        if family == "cosine":
            if len(params) != 2:
                raise ValueError("cosine takes 2 parameters (base, amplitude)")
            return Frontier.cosine(params[0], params[1])
        if family == "piecewise-linear":
            return Frontier.piecewise_linear(params)
    except ValueError as exc:
        raise UsageError(f"bad frontier spec {spec!r}: {exc}")
    raise UsageError(f"unknown frontier family {family!r}")


def parse_kernel(name: str) -> Kernel:
    try:
        return kernel(name)
    except ValueError as exc:
        raise UsageError(str(exc))


def _int_token(tok: str) -> int:
    """Integer that may be written in scientific notation (1e4)."""
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        val = float(tok)
    except ValueError:
        raise UsageError(f"{tok!r} is not a number")
    if val != int(val):
        raise UsageError(f"{tok!r} is not an integer")
    return int(val)


def parse_n_grid(text: str) -> list:
    grid = [_int_token(tok) for tok in text.split(",") if tok]
    if not grid:
        raise UsageError("n-grid must contain at least one value")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise UsageError(f"n-grid must be strictly increasing, got {grid}")
    return grid


# ---------------------------------------------------------------------------
# argument parser


def _add_common(p, *, frontier=False, kern=False, exponents=False, n=False,
                grid=False, fixed_kh=False, reps=False, gamma=False,
                point=False, threads=False, out_required=True):
    if frontier:
        p.add_argument("--frontier", default="constant:1.0",
                       help="frontier spec, e.g. cosine:1.0,0.3")
    if kern:
        p.add_argument("--kernel", default="epanechnikov",
                       choices=KERNEL_FAMILIES)
    if exponents:
        p.add_argument("--alpha", type=float, default=1.0,
                       help="Hoelder exponent used by the rate checks")
        p.add_argument("--a", type=float, default=0.9, help="k = n^a")
        p.add_argument("--b", type=float, default=0.5, help="h = n^-b")
    if n:
        p.add_argument("--n", type=_int_token, required=True,
                       help="sample size")
    if grid:
        p.add_argument("--n-grid", required=True,
                       help="comma list of sample sizes, e.g. 1e4,1e5,1e6")
    if fixed_kh:
        p.add_argument("--k", type=_int_token, default=None,
                       help="strip count (default: round(n^a))")
        p.add_argument("--h", type=float, default=None,
                       help="bandwidth (default: n^-b)")
    if reps:
        p.add_argument("--replicates", type=_int_token, default=500)
    if gamma:
        p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    if point:
        p.add_argument("--x", type=float, default=0.5,
                       help="evaluation abscissa")
    p.add_argument("--seed", type=_int_token, default=DEFAULT_SEED,
                   help=f"master seed (default {DEFAULT_SEED})")
    if threads:
        p.add_argument("--threads", type=int, default=0,
                       help="worker threads for replicates (0 = auto)")
    p.add_argument("--format", dest="out_format", choices=("json", "csv"),
                   default=None, help="output format (default json)")
    p.add_argument("--out", dest="out_path", required=out_required,
                   metavar="PATH", help="output file")
    p.add_argument("--config", default=None, metavar="FILE",
                   help="key = value file of defaults (flags override)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stripfront",
        description="Boundary estimation from strip-wise maxima: "
                    "estimator, coupled-envelope simulator, and Monte Carlo "
                    "validation harness.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate the boundary at one point")
    _add_common(p, frontier=True, kern=True, exponents=True, n=True,
                fixed_kh=True, point=True)

    p = sub.add_parser("clt", help="standardized-error distribution along an n-grid")
    _add_common(p, frontier=True, kern=True, exponents=True, grid=True,
                reps=True, point=True, threads=True)

    p = sub.add_parser("sandwich", help="coupled-envelope ordering and failure bound")
    _add_common(p, frontier=True, kern=True, exponents=True, n=True,
                fixed_kh=True, reps=True, gamma=True, point=True, threads=True)

    p = sub.add_parser("gap-rate", help="envelope gap rate along an n-grid")
    _add_common(p, frontier=True, exponents=True, grid=True, reps=True,
                gamma=True, threads=True)
    p.add_argument("--gamma-policy", dest="gamma_policy",
                   choices=experiments.GAMMA_POLICIES, default="fixed")

    p = sub.add_parser("weight-sum", help="deterministic weight-sum convergence")
    _add_common(p, kern=True, exponents=True, grid=True, point=True)

    p = sub.add_parser("plan", help="check rate conditions for exponents (a, b)")
    _add_common(p, exponents=True, out_required=False)

    p = sub.add_parser("sample", help="dump one uniform sample as CSV")
    _add_common(p, frontier=True, n=True)

    return parser


# ---------------------------------------------------------------------------
# config-file merging


def _config_tokens(path: str) -> list:
    tokens = []
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}")
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(
                f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key = key.strip().replace("_", "-")
        value = value.strip()
        if key == "config":
            raise UsageError(f"{path}:{lineno}: config files cannot nest")
        if not key or not value:
            raise UsageError(f"{path}:{lineno}: empty key or value")
        tokens.extend([f"--{key}", value])
    return tokens


def _merge_config_file(argv: list) -> list:
    """Inject config-file tokens before the user's flags (flags win)."""
    if not argv or argv[0].startswith("-"):
        return argv
    rest = argv[1:]
    if "--config" not in rest:
        return argv
    i = rest.index("--config")
    if i + 1 >= len(rest):
        raise UsageError("--config needs a file path")
    file_tokens = _config_tokens(rest[i + 1])
    return [argv[0]] + file_tokens + rest


# ---------------------------------------------------------------------------
# parse + validate


def parse_config(argv: list) -> RunConfig:
    """Parse and validate a command line into a RunConfig.

    Raises UsageError (or SystemExit from argparse) on any invalid input,
    naming the offending field.
    """
    parser = build_parser()
    ns = parser.parse_args(_merge_config_file(list(argv)))
    cfg = RunConfig(command=ns.command)

    if hasattr(ns, "frontier"):
        cfg.frontier = parse_frontier(ns.frontier)
    if hasattr(ns, "kernel"):
        cfg.kernel = parse_kernel(ns.kernel)
    for name in ("alpha", "a", "b", "x", "gamma", "gamma_policy",
                 "replicates", "threads", "n", "k", "h"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if hasattr(ns, "n_grid"):
        cfg.n_grid = parse_n_grid(ns.n_grid)
    cfg.seed = ns.seed
    cfg.out_path = ns.out_path
    cfg.out_format = ns.out_format or ("csv" if ns.command == "sample" else "json")

    if cfg.command == "sample" and cfg.out_format != "csv":
        raise UsageError("sample output is CSV only")
    if cfg.seed < 0:
        raise UsageError(f"seed must be >= 0, got {cfg.seed}")
    if hasattr(ns, "replicates") and cfg.replicates < 1:
        raise UsageError(f"replicates must be >= 1, got {cfg.replicates}")
    if hasattr(ns, "threads") and cfg.threads < 0:
        raise UsageError(f"threads must be >= 0, got {cfg.threads}")

    if cfg.command in ("estimate", "sandwich"):
        if cfg.k is None:
            cfg.k = int(round(cfg.n ** cfg.a))
        if cfg.h is None:
            cfg.h = float(cfg.n) ** (-cfg.b)
        if not 0 < cfg.k < cfg.n:
            raise UsageError(f"need 0 < k < n, got k={cfg.k}, n={cfg.n}")
        if not cfg.h > 0:
            raise UsageError(f"bandwidth h must be > 0, got {cfg.h}")
    return cfg


# ---------------------------------------------------------------------------
# execution


def _config_echo(cfg: RunConfig) -> dict:
    echo = {"command": cfg.command, "seed": cfg.seed}
    if cfg.frontier is not None:
        echo["frontier"] = cfg.frontier.label()
    if cfg.kernel is not None:
        echo["kernel"] = cfg.kernel.family
    for name in ("alpha", "a", "b", "n", "n_grid", "k", "h", "replicates",
                 "gamma", "gamma_policy", "x"):
        val = getattr(cfg, name)
        if val is not None:
            echo[name] = val
    return echo


def _payload(cfg: RunConfig, result: dict) -> dict:
    return {"command": cfg.command, "config": _config_echo(cfg),
            "result": result}


def _errors_csv_path(path: str) -> str:
    return (path[:-4] + ".errors.csv") if path.endswith(".csv") \
        else path + ".errors.csv"


def execute(cfg: RunConfig) -> int:
    """Dispatch a validated RunConfig, write artifacts, print one line."""
    handler = {
        "plan": _run_plan, "sample": _run_sample, "estimate": _run_estimate,
        "clt": _run_clt_cmd, "sandwich": _run_sandwich_cmd,
        "gap-rate": _run_gap_rate_cmd, "weight-sum": _run_weight_sum_cmd,
    }[cfg.command]
    handler(cfg)
    return 0


def _run_plan(cfg: RunConfig) -> None:
    plan = plan_sequences(cfg.alpha, cfg.a, cfg.b)
    result = {"alpha": plan.alpha, "a": plan.a, "b": plan.b,
              **plan.checks, "valid": plan.valid}
    if cfg.out_path:
        if cfg.out_format == "json":
            reporting.write_json(cfg.out_path, _payload(cfg, result))
        else:
            header = ["alpha", "a", "b", *plan.checks.keys(), "valid"]
            reporting.write_csv(cfg.out_path, header,
                                [[result[name] for name in header]])
    dest = f" -> {cfg.out_path}" if cfg.out_path else ""
    print(f"plan: alpha={plan.alpha} a={plan.a} b={plan.b} "
          f"valid={plan.valid} checks={plan.checks}{dest}")


def _run_sample(cfg: RunConfig) -> None:
    points = sample_uniform(cfg.frontier, cfg.n, cfg.seed)
    points.to_csv(cfg.out_path)
    print(f"sample: frontier={cfg.frontier.label()} n={cfg.n} "
          f"seed={cfg.seed} -> {cfg.out_path}")


def _run_estimate(cfg: RunConfig) -> None:
    params = EstimatorParams(n=cfg.n, k=cfg.k, h=cfg.h, kernel=cfg.kernel)
    points = sample_uniform(cfg.frontier, cfg.n, cfg.seed)
    value = estimate(params, strip_maxima(points, cfg.k), cfg.x)
    result = {"estimate": value, "n": cfg.n, "k": cfg.k, "h": cfg.h,
              "x": cfg.x}
    if cfg.out_format == "json":
        reporting.write_json(cfg.out_path, _payload(cfg, result))
    else:
        header = ["n", "k", "h", "x", "estimate"]
        reporting.write_csv(cfg.out_path, header,
                            [[result[name] for name in header]])
    print(f"estimate: fhat({cfg.x})={value:.6g} n={cfg.n} k={cfg.k} "
          f"h={cfg.h:.6g} -> {cfg.out_path}")


def _run_clt_cmd(cfg: RunConfig) -> None:
    plan = plan_sequences(cfg.alpha, cfg.a, cfg.b)
    report = experiments.run_clt(cfg.frontier, cfg.kernel, plan, cfg.n_grid,
                                 cfg.replicates, cfg.x, cfg.seed,
                                 threads=cfg.threads)
    if cfg.out_format == "json":
        reporting.write_json(cfg.out_path,
                             _payload(cfg, report.to_dict(include_errors=True)))
    else:
        header = ["n", "k", "h", "replicates", "mean", "sd", "ks_distance",
                  "sigma_theory"]
        rows = [[c.n, c.k, c.h, c.replicates, c.mean,
                 "" if c.sd is None else c.sd, c.ks_distance, c.sigma_theory]
                for c in report.cells]
        reporting.write_csv(cfg.out_path, header, rows)
        err_rows = [(c.n, r, e) for c in report.cells
                    for r, e in enumerate(c.standardized_errors.tolist())]
        reporting.write_csv(_errors_csv_path(cfg.out_path),
                            ["n", "replicate", "standardized_error"], err_rows)
    ks = ",".join(f"{c.ks_distance:.4f}" for c in report.cells)
    print(f"clt: n_grid={report.n_grid} replicates={cfg.replicates} "
          f"x={cfg.x} ks=[{ks}] -> {cfg.out_path}")


def _run_sandwich_cmd(cfg: RunConfig) -> None:
    report = experiments.run_sandwich(cfg.frontier, cfg.kernel, cfg.n, cfg.k,
                                      cfg.h, cfg.gamma, cfg.replicates, cfg.x,
                                      cfg.seed, threads=cfg.threads)
    if cfg.out_format == "json":
        reporting.write_json(cfg.out_path, _payload(cfg, report.to_dict()))
    else:
        data = report.to_dict()
        header = list(data.keys())
        reporting.write_csv(cfg.out_path, header, [[data[k] for k in header]])
    print(f"sandwich: n={cfg.n} gamma={cfg.gamma} replicates={cfg.replicates} "
          f"violations={report.ordering_violations} "
          f"fail_rate={report.bracket_fail_rate:.4g} "
          f"bound={report.bracket_fail_bound:.4g} -> {cfg.out_path}")


def _run_gap_rate_cmd(cfg: RunConfig) -> None:
    plan = plan_sequences(cfg.alpha, cfg.a, cfg.b)
    report = experiments.run_gap_rate(cfg.frontier, plan, cfg.gamma_policy,
                                      cfg.n_grid, cfg.replicates, cfg.seed,
                                      gamma=cfg.gamma, threads=cfg.threads)
    if cfg.out_format == "json":
        reporting.write_json(cfg.out_path, _payload(cfg, report.to_dict()))
    else:
        header = ["n", "k", "gamma", "mean_u_gap", "ratio", "gamma_policy",
                  "replicates", "low_replicates_warning"]
        rows = [[c.n, c.k, c.gamma, c.mean_u_gap, c.ratio, report.gamma_policy,
                 report.replicates, report.low_replicates_warning]
                for c in report.cells]
        reporting.write_csv(cfg.out_path, header, rows)
    ratios = ",".join(f"{r:.4g}" for r in report.ratios)
    print(f"gap-rate: n_grid={report.n_grid} policy={cfg.gamma_policy} "
          f"ratios=[{ratios}] -> {cfg.out_path}")


def _run_weight_sum_cmd(cfg: RunConfig) -> None:
    plan = plan_sequences(cfg.alpha, cfg.a, cfg.b)
    sums = experiments.run_weight_sum(cfg.kernel, plan, cfg.n_grid, cfg.x)
    result = {"x": cfg.x, "per_n": [{"n": n, "weight_sum": s} for n, s in sums]}
    if cfg.out_format == "json":
        reporting.write_json(cfg.out_path, _payload(cfg, result))
    else:
        rows = [[n, plan.k_for(n), plan.h_for(n), cfg.x, s] for n, s in sums]
        reporting.write_csv(cfg.out_path,
                            ["n", "k", "h", "x", "weight_sum"], rows)
    gaps = ",".join(f"{abs(s - 1.0):.4g}" for _, s in sums)
    print(f"weight-sum: n_grid={[n for n, _ in sums]} x={cfg.x} "
          f"|sum-1|=[{gaps}] -> {cfg.out_path}")


def main(argv=None) -> int:
    """Console entry point; returns the exit status (0 ok, 2 usage, 1 runtime)."""
    args = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse already printed a diagnostic
        return int(exc.code or 0)
    try:
        return execute(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

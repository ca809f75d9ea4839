"""Monte Carlo harness: turns the estimator's asymptotic guarantees into
finite-sample checks with machine-readable reports.

Four experiments are provided:

* ``run_clt``        — distribution of the standardized error
                       ``n sqrt(h)/sqrt(k) (fhat(x) - f(x))`` against its
                       Gaussian limit N(0, sigma^2), sigma = ||K||_2 * area;
* ``run_sandwich``   — pathwise ordering of the coupled envelope
                       estimates and the failure-probability bound
                       ``2 exp(-n gamma^2 / 8)`` for the bracketing event;
* ``run_gap_rate``   — the envelope gap E(upper strip max - lower strip
                       max), whose scaled ratio ``gap * n/(k gamma)``
                       should stay bounded along an n-grid;
* ``run_weight_sum`` — deterministic convergence of the weight sum
                       toward 1.

Replicates use independent derived streams keyed by ``(master_seed, n,
replicate)``; results are written into per-replicate slots, so reports
are identical no matter how many worker threads run them.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rng, sim
from .estimator import (EstimatorParams, ExponentPlan, standardization_factor,
                        strip_maxima, weights)
from .model import Frontier, Kernel, sigma_theoretical

_SQRT2 = math.sqrt(2.0)

# below this, nominal gamma^2 n is too small for the tail bound to have
# content (the "large n" regime); reports carry the flag either way
BOUND_REGIME_MIN_NGAMMA2 = 16.0

LOW_REPLICATES = 10


def normal_cdf(z: float) -> float:
    """Standard normal CDF, accurate to well under 1.5e-7 everywhere."""
    return 0.5 * math.erfc(-z / _SQRT2)


def ks_distance(samples, cdf) -> float:
    """Kolmogorov-Smirnov sup-distance between a sample and a CDF."""
    xs = np.sort(np.asarray(samples, dtype=np.float64))
    if xs.size == 0:
        raise ValueError("ks_distance needs a non-empty sample")
    n = xs.size
    f = np.array([cdf(v) for v in xs.tolist()])
    steps = np.arange(1, n + 1) / n
    return float(max(np.max(np.abs(steps - f)),
                     np.max(np.abs(steps - 1.0 / n - f))))


def _thread_count(threads: int) -> int:
    if threads < 0:
        raise ValueError(f"threads must be >= 0, got {threads}")
    return threads if threads > 0 else (os.cpu_count() or 1)


def _run_replicates(replicates: int, threads: int, worker) -> None:
    workers = _thread_count(threads)
    if workers == 1 or replicates == 1:
        for r in range(replicates):
            worker(r)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(worker, range(replicates)))


def _kernel_window(params: EstimatorParams, x: float) -> np.ndarray:
    return params.kernel.scaled_eval_array(params.h, x - params.centers())


def _estimate_with_window(kh: np.ndarray, u: np.ndarray, n: int, k: int) -> float:
    return float(np.sum(kh * (u + np.sum(u) / (n - k))) / k)


# ---------------------------------------------------------------------------
# CLT experiment


@dataclass(frozen=True)
class CltCell:
    """Per-n results of the CLT experiment."""

    n: int
    k: int
    h: float
    replicates: int
    standardized_errors: np.ndarray
    mean: float
    sd: float | None
    sd_reason: str | None
    ks_distance: float
    sigma_theory: float

    def to_dict(self, include_errors: bool = True) -> dict:
        out = {
            "n": self.n, "k": self.k, "h": self.h,
            "replicates": self.replicates,
            "mean": self.mean, "sd": self.sd,
            "ks_distance": self.ks_distance,
            "sigma_theory": self.sigma_theory,
        }
        if self.sd_reason is not None:
            out["sd_reason"] = self.sd_reason
        if include_errors:
            out["standardized_errors"] = self.standardized_errors.tolist()
        return out


@dataclass(frozen=True)
class CltReport:
    frontier_label: str
    kernel_family: str
    plan: ExponentPlan
    x: float
    master_seed: int
    cells: tuple[CltCell, ...]

    @property
    def n_grid(self) -> list[int]:
        return [c.n for c in self.cells]

    def to_dict(self, include_errors: bool = True) -> dict:
        return {
            "frontier": self.frontier_label,
            "kernel": self.kernel_family,
            "plan": {"alpha": self.plan.alpha, "a": self.plan.a,
                     "b": self.plan.b, "valid": self.plan.valid},
            "x": self.x,
            "seed": self.master_seed,
            "n_grid": self.n_grid,
            "per_n": [c.to_dict(include_errors) for c in self.cells],
        }


def interior_window(k: int, h: float, support_radius: float) -> tuple[float, float]:
    """Evaluation abscissas where the kernel window stays inside [0, 1].

    The guarantee on the standardized error only covers interior points;
    near the edges the scaled kernel spills outside the data range, so
    experiments keep x within [A h + 1/k, 1 - A h - 1/k].
    """
    margin = support_radius * h + 1.0 / k
    return margin, 1.0 - margin


def _clt_cell_params(plan: ExponentPlan, kern: Kernel, n: int, x: float) -> EstimatorParams:
    k = plan.k_for(n)
    h = plan.h_for(n)
    params = EstimatorParams(n=n, k=k, h=h, kernel=kern)
    lo, hi = interior_window(k, h, kern.support_radius)
    if not lo <= x <= hi:
        raise ValueError(
            f"x={x} is outside the interior window [{lo:.6g}, {hi:.6g}] for n={n}")
    return params


def run_clt(frontier: Frontier, kern: Kernel, plan: ExponentPlan, n_grid,
            replicates: int, x: float, master_seed: int, *,
            threads: int = 1) -> CltReport:
    """Sample the standardized error and compare it with its normal limit.

    For each n: k = round(n^a), h = n^-b, and each replicate draws a fresh
    n-point sample, evaluates the estimate at x, and standardizes the
    error by n sqrt(h)/sqrt(k).  Reports per-n moments plus the KS
    distance to the exact N(0, sigma^2) CDF (sigma known, not estimated).
    """
    if not plan.valid:
        raise ValueError(f"plan is not valid: {plan.checks}")
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")
    n_grid = [int(n) for n in n_grid]
    if not n_grid:
        raise ValueError("n_grid must be non-empty")
    all_params = [_clt_cell_params(plan, kern, n, x) for n in n_grid]

    sigma = sigma_theoretical(kern, frontier)
    fx = frontier.evaluate(x)
    cells = []
    for params in all_params:
        n, k, h = params.n, params.k, params.h
        kh = _kernel_window(params, x)
        scale = standardization_factor(n, k, h)
        errors = np.empty(replicates, dtype=np.float64)

        def worker(r, n=n, k=k, kh=kh, scale=scale, errors=errors):
            seed_r = rng.derive(master_seed, n, r)
            u = sim.strip_maxima_prefixes(frontier, k, [n], seed_r)[0]
            errors[r] = scale * (_estimate_with_window(kh, u, n, k) - fx)

        _run_replicates(replicates, threads, worker)
        if replicates >= 2:
            sd, sd_reason = float(np.std(errors, ddof=1)), None
        else:
            sd, sd_reason = None, "needs >= 2 replicates"
        cells.append(CltCell(
            n=n, k=k, h=h, replicates=replicates,
            standardized_errors=errors,
            mean=float(np.mean(errors)),
            sd=sd, sd_reason=sd_reason,
            ks_distance=ks_distance(errors, lambda v: normal_cdf(v / sigma)),
            sigma_theory=sigma,
        ))
    return CltReport(frontier_label=frontier.label(),
                     kernel_family=kern.family, plan=plan, x=x,
                     master_seed=master_seed, cells=tuple(cells))


# ---------------------------------------------------------------------------
# Envelope (sandwich) experiment


@dataclass(frozen=True)
class SandwichReport:
    """Pathwise ordering tallies and the bracketing-failure bound check."""

    n: int
    k: int
    h: float
    gamma: float
    x: float
    replicates: int
    bracket_fail_count: int
    bracket_fail_rate: float
    bracket_fail_bound: float
    bound_check_applicable: bool
    chain_violations: int
    bracket_violations: int
    mean_estimator_gap: float

    @property
    def ordering_violations(self) -> int:
        """Strict violations of either pathwise ordering statement."""
        return self.chain_violations + self.bracket_violations

    def to_dict(self) -> dict:
        return {
            "n": self.n, "k": self.k, "h": self.h,
            "gamma": self.gamma, "x": self.x,
            "replicates": self.replicates,
            "bracket_fail_count": self.bracket_fail_count,
            "bracket_fail_rate": self.bracket_fail_rate,
            "bracket_fail_bound": self.bracket_fail_bound,
            "bound_check_applicable": self.bound_check_applicable,
            "chain_violations": self.chain_violations,
            "bracket_violations": self.bracket_violations,
            "ordering_violations": self.ordering_violations,
            "mean_estimator_gap": self.mean_estimator_gap,
        }


def bracket_fail_bound(n: int, gamma: float) -> float:
    """Tail bound 2 exp(-n gamma^2 / 8) on the bracketing failure probability."""
    return 2.0 * math.exp(-n * gamma * gamma / 8.0)


def run_sandwich(frontier: Frontier, kern: Kernel, n: int, k: int, h: float,
                 gamma: float, replicates: int, x: float, master_seed: int, *,
                 threads: int = 1) -> SandwichReport:
    """Draw coupled envelope triples and check the orderings pathwise.

    Per replicate: build the coupled quadruple, estimate at x on all four
    point sets with the same (n, k, h), verify lower <= mid <= upper
    always and lower <= sample <= upper whenever bracketing holds, and
    tally the bracketing failure rate against 2 exp(-n gamma^2/8).
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")
    params = EstimatorParams(n=n, k=k, h=h, kernel=kern)
    kh = _kernel_window(params, x)

    f_lower = np.empty(replicates)
    f_mid = np.empty(replicates)
    f_upper = np.empty(replicates)
    f_sample = np.empty(replicates)
    bracketed = np.empty(replicates, dtype=bool)

    def worker(r):
        seed_r = rng.derive(master_seed, n, r)
        triple = sim.sample_sandwich(frontier, n, gamma, seed_r)
        for slot, part in ((f_lower, triple.lower), (f_mid, triple.mid),
                           (f_upper, triple.upper), (f_sample, triple.sample)):
            u = strip_maxima(part, k).u
            slot[r] = _estimate_with_window(kh, u, n, k)
        bracketed[r] = triple.bracketing_holds

    _run_replicates(replicates, threads, worker)

    chain_bad = int(np.sum((f_lower > f_mid) | (f_mid > f_upper)))
    bracket_bad = int(np.sum(bracketed & ((f_lower > f_sample)
                                          | (f_sample > f_upper))))
    fail_count = int(np.sum(~bracketed))
    return SandwichReport(
        n=n, k=k, h=h, gamma=gamma, x=x, replicates=replicates,
        bracket_fail_count=fail_count,
        bracket_fail_rate=fail_count / replicates,
        bracket_fail_bound=bracket_fail_bound(n, gamma),
        bound_check_applicable=bool(n * gamma * gamma >= BOUND_REGIME_MIN_NGAMMA2),
        chain_violations=chain_bad,
        bracket_violations=bracket_bad,
        mean_estimator_gap=float(np.mean(f_upper - f_lower)),
    )


# ---------------------------------------------------------------------------
# Envelope gap rate experiment


GAMMA_POLICIES = ("fixed", "inv-sqrt-k")


@dataclass(frozen=True)
class RateCell:
    n: int
    k: int
    gamma: float
    mean_u_gap: float
    ratio: float

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "gamma": self.gamma,
                "mean_u_gap": self.mean_u_gap, "ratio": self.ratio}


@dataclass(frozen=True)
class RateReport:
    gamma_policy: str
    replicates: int
    low_replicates_warning: bool
    cells: tuple[RateCell, ...]

    @property
    def n_grid(self) -> list[int]:
        return [c.n for c in self.cells]

    @property
    def ratios(self) -> list[float]:
        return [c.ratio for c in self.cells]

    def to_dict(self) -> dict:
        return {
            "gamma_policy": self.gamma_policy,
            "replicates": self.replicates,
            "low_replicates_warning": self.low_replicates_warning,
            "n_grid": self.n_grid,
            "per_n": [c.to_dict() for c in self.cells],
        }


def run_gap_rate(frontier: Frontier, plan: ExponentPlan, gamma_policy: str,
                 n_grid, replicates: int, master_seed: int, *,
                 gamma: float | None = None, threads: int = 1) -> RateReport:
    """Average envelope gap per strip, scaled by n/(k gamma), along a grid.

    The mean strip-maxima gap between the fattened and thinned envelope
    processes is expected to be O(k gamma / n); the reported ratio
    ``mean_u_gap * n / (k gamma)`` should therefore stay bounded along an
    increasing n-grid.  Requires exponents with a (1 + alpha) >= 1, the
    regime in which that rate statement applies.
    """
    if gamma_policy not in GAMMA_POLICIES:
        raise ValueError(
            f"gamma_policy must be one of {GAMMA_POLICIES}, got {gamma_policy!r}")
    if gamma_policy == "fixed":
        if gamma is None or not 0.0 < gamma < 1.0:
            raise ValueError(f"fixed policy needs gamma in (0, 1), got {gamma}")
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")
    n_grid = [int(n) for n in n_grid]
    if not n_grid or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ValueError("n_grid must be non-empty and strictly increasing")
    if plan.a * (1.0 + plan.alpha) < 1.0:
        raise ValueError(
            f"gap-rate regime needs a(1+alpha) >= 1, got "
            f"{plan.a}*(1+{plan.alpha}) = {plan.a * (1 + plan.alpha):.4f}")

    cells = []
    for n in n_grid:
        k = plan.k_for(n)
        if k < 2 or k >= n:
            raise ValueError(f"need 2 <= k < n, got k={k} for n={n}")
        g = gamma if gamma_policy == "fixed" else 1.0 / math.sqrt(k)
        gaps = np.empty(replicates)

        def worker(r, n=n, k=k, g=g, gaps=gaps):
            seed_r = rng.derive(master_seed, n, r)
            n1, _, n2 = sim.sandwich_counts(n, g, seed_r)
            rows = sim.strip_maxima_prefixes(frontier, k, [n1, n2], seed_r)
            gaps[r] = float(np.mean(rows[1] - rows[0]))

        _run_replicates(replicates, threads, worker)
        mean_gap = float(np.mean(gaps))
        cells.append(RateCell(n=n, k=k, gamma=g, mean_u_gap=mean_gap,
                              ratio=mean_gap * n / (k * g)))
    return RateReport(gamma_policy=gamma_policy, replicates=replicates,
                      low_replicates_warning=replicates < LOW_REPLICATES,
                      cells=tuple(cells))


# ---------------------------------------------------------------------------
# Weight-sum convergence (deterministic)


def run_weight_sum(kern: Kernel, plan: ExponentPlan, n_grid, x: float) -> list:
    """Weight sums sum_r beta_r(x) along the grid (no randomness).

    The sums converge to 1 whenever k = o(n) and h k diverges; each entry
    is (n, sum).
    """
    if not plan.valid:
        raise ValueError(f"plan is not valid: {plan.checks}")
    out = []
    for n in (int(v) for v in n_grid):
        params = EstimatorParams(n=n, k=plan.k_for(n), h=plan.h_for(n),
                                 kernel=kern)
        out.append((n, float(np.sum(weights(params, x)))))
    return out

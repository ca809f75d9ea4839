"""The boundary estimator: strip maxima, kernel weights, and the rate planner.

The estimate at x is a kernel-weighted combination of per-strip sample
maxima plus a bias-reduction term:

    fhat(x) = (1/k) * sum_r Kh(x - c_r) * (u_r + sum_s(u_s) / (n - k))

with c_r the strip centers and Kh the bandwidth-h rescaled kernel.  It can
equivalently be written as ``sum_r beta_r(x) * u_r`` with the nonnegative
weights produced by :func:`weights`; both forms are implemented and the
tests hold them against each other.  ``estimate_oracle`` recomputes the
whole thing from raw points in plain Python as an independent check on the
vectorised/compiled path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .model import Kernel
from .sim import SampleSet


@dataclass(frozen=True)
class EstimatorParams:
    """Sample size n, strip count k (0 < k < n), bandwidth h, and kernel."""

    n: int
    k: int
    h: float
    kernel: Kernel

    def __post_init__(self):
        if not 0 < self.k < self.n:
            raise ValueError(
                f"need 0 < k < n, got k={self.k}, n={self.n}")
        if not self.h > 0.0:
            raise ValueError(f"bandwidth h must be > 0, got {self.h}")

    def centers(self) -> np.ndarray:
        """Strip centers (r + 1/2)/k for r = 0..k-1."""
        return (np.arange(self.k) + 0.5) / self.k


@dataclass(frozen=True)
class StripMaxima:
    """Per-strip maxima u (length k); empty strips hold 0 by convention.

    ``empty_strips`` records which entries are conventionally 0 rather
    than genuine maxima (0-based strip positions).
    """

    u: np.ndarray
    empty_strips: frozenset


def strip_index(x: float, k: int) -> int:
    """Strip position (0-based) of abscissa x among k strips.

    Strips are the half-open intervals [r/k, (r+1)/k); x = 1 belongs to
    the last strip so that the map is total on [0, 1].  This floor-based
    formula is the single indexing convention shared by every code path.
    """
    return min(int(x * k), k - 1)


def strip_maxima(points: SampleSet, k: int) -> StripMaxima:
    """Strip maxima of a point set: u[r] = max y over points in strip r."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    u = _backend.strip_maxima_points(points.xs, points.ys, int(k))
    counts = np.bincount(
        np.minimum((points.xs * k).astype(np.int64), k - 1), minlength=k
    ) if len(points) else np.zeros(k, dtype=np.int64)
    empties = frozenset(int(i) for i in np.nonzero(counts == 0)[0])
    return StripMaxima(u=u, empty_strips=empties)


def weights(params: EstimatorParams, x: float) -> np.ndarray:
    """Nonnegative weights beta_r(x) making the estimate linear in u.

    beta_r(x) = Kh(x - c_r)/k + sum_s Kh(x - c_s) / (k (n - k)).
    Their sum equals ``(n/(n-k)) * mean_r Kh(x - c_r)`` exactly (an
    algebraic identity, asserted by the tests to float precision).
    """
    kh = params.kernel.scaled_eval_array(params.h, x - params.centers())
    return kh / params.k + kh.sum() / (params.k * (params.n - params.k))


def _estimate_from_u(kh: np.ndarray, u: np.ndarray, n: int, k: int) -> float:
    # shared core: (1/k) sum_r Kh_r (u_r + sum(u)/(n-k)); np.sum keeps a
    # fixed reduction order, which makes the estimate exactly monotone in u
    return float(np.sum(kh * (u + np.sum(u) / (n - k))) / k)


def estimate(params: EstimatorParams, u, x: float) -> float:
    """Evaluate the boundary estimate at x from strip maxima u."""
    u_arr = u.u if isinstance(u, StripMaxima) else np.asarray(u, dtype=np.float64)
    if u_arr.shape != (params.k,):
        raise ValueError(
            f"expected {params.k} strip maxima, got shape {u_arr.shape}")
    kh = params.kernel.scaled_eval_array(params.h, x - params.centers())
    return _estimate_from_u(kh, u_arr, params.n, params.k)


def estimate_oracle(points: SampleSet, params: EstimatorParams, x: float) -> float:
    """Plain-Python recomputation of the estimate from raw points.

    Deliberately shares no code with :func:`strip_maxima`,
    :func:`weights`, or :func:`estimate`: one pass over the points for
    the per-strip maxima, one pass over the strips for the weighted sum,
    all in scalar arithmetic.  Must agree with the production path to
    1e-10.
    """
    n, k, h = params.n, params.k, params.h
    kern = params.kernel
    u = [0.0] * k
    for px, py in zip(points.xs.tolist(), points.ys.tolist()):
        idx = int(px * k)
        if idx > k - 1:
            idx = k - 1
        if py > u[idx]:
            u[idx] = py
    bias = sum(u) / (n - k)
    acc = 0.0
    for r in range(k):
        t = (x - (r + 0.5) / k) / h
        acc += kern.evaluate(t) / h * (u[r] + bias)
    return acc / k


@dataclass(frozen=True)
class ExponentPlan:
    """Power-law sequences k = n^a, h = n^-b and their rate checks.

    The four booleans translate the asymptotic admissibility conditions
    of the central limit theorem into exponent inequalities:

    * ``hk_diverges``        — the smoothing window spans ever more strips (a > b);
    * ``bias_rate_ok``       — smoothing bias vanishes after scaling
                               (a/2 + b(1/2 + alpha) > 1);
    * ``fluctuation_rate_ok``— extreme-value fluctuations vanish after
                               scaling (5a/2 - 3b/2 > 1);
    * ``k_sublinear``        — strips stay coarse enough to fill up
                               (a < 1, i.e. k grows slower than n/log n).
    """

    alpha: float
    a: float
    b: float
    hk_diverges: bool
    bias_rate_ok: bool
    fluctuation_rate_ok: bool
    k_sublinear: bool
    valid: bool

    @property
    def checks(self) -> dict:
        return {
            "hk_diverges": self.hk_diverges,
            "bias_rate_ok": self.bias_rate_ok,
            "fluctuation_rate_ok": self.fluctuation_rate_ok,
            "k_sublinear": self.k_sublinear,
        }

    def k_for(self, n: int) -> int:
        return int(round(n ** self.a))

    def h_for(self, n: int) -> float:
        return float(n) ** (-self.b)


def plan_sequences(alpha: float, a: float, b: float) -> ExponentPlan:
    """Check the exponents (a, b) against the rate conditions for Hoelder
    exponent alpha; ``valid`` is the conjunction of the four checks."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if not 0.0 < a < 1.0:
        raise ValueError(f"a must lie in (0, 1), got {a}")
    if not b > 0.0:
        raise ValueError(f"b must be > 0, got {b}")
    hk = a > b
    bias = a / 2.0 + b * (0.5 + alpha) > 1.0
    fluct = 2.5 * a - 1.5 * b > 1.0
    sub = a < 1.0
    return ExponentPlan(
        alpha=float(alpha), a=float(a), b=float(b),
        hk_diverges=hk, bias_rate_ok=bias,
        fluctuation_rate_ok=fluct, k_sublinear=sub,
        valid=hk and bias and fluct and sub,
    )


def standardization_factor(n: int, k: int, h: float) -> float:
    """Scale n sqrt(h)/sqrt(k) that normalises the estimation error."""
    return n * math.sqrt(h) / math.sqrt(k)

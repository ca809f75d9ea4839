"""Boundary functions, smoothing kernels, and their derived constants.

The estimation target is the upper edge ``f`` of the region
``D = {(x, y): 0 <= x <= 1, 0 <= y <= f(x)}``.  Four concrete families
with closed-form integrals and extrema are provided so that every
constant downstream (region area, per-strip min/max, the limit standard
deviation) is exact rather than numerically estimated.

All types are immutable after construction and every operation is a pure
function, so they are safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FRONTIER_FAMILIES = ("constant", "affine", "cosine", "piecewise-linear")
KERNEL_FAMILIES = ("epanechnikov", "biweight", "triangular")

# family codes shared with the backend hot loops
_CODE_CONSTANT = 0
_CODE_AFFINE = 1
_CODE_COSINE = 2
_CODE_PIECEWISE = 3

_TWO_PI = 2.0 * math.pi

# exact ∫K² per kernel family
_KERNEL_L2_SQ = {
    "epanechnikov": 3.0 / 5.0,
    "biweight": 5.0 / 7.0,
    "triangular": 2.0 / 3.0,
}

# sup |K'| per family: 3/2, max of (15/4)t(1-t²) at t=1/sqrt(3), and 1
KERNEL_DERIVATIVE_BOUNDS = {
    "epanechnikov": 1.5,
    "biweight": 15.0 / (4.0 * math.sqrt(3.0)) * (2.0 / 3.0),
    "triangular": 1.0,
}


@dataclass(frozen=True)
class Frontier:
    """A strictly positive boundary function on [0, 1].

    ``area`` is the exact integral of the function over [0, 1] (the
    Lebesgue measure of the region under it), ``lip_const`` and ``alpha``
    describe its Hoelder smoothness, and ``min_height``/``max_height``
    bracket its range.  Use the family constructors below rather than the
    raw dataclass constructor.
    """

    family: str
    params: tuple[float, ...]
    alpha: float
    lip_const: float
    min_height: float
    max_height: float
    area: float

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(level: float) -> "Frontier":
        if not level > 0.0:
            raise ValueError(f"constant frontier needs level > 0, got {level}")
        return Frontier("constant", (float(level),), 1.0, 0.0,
                        float(level), float(level), float(level))

    @staticmethod
    def affine(intercept: float, slope: float) -> "Frontier":
        lo = min(intercept, intercept + slope)
        hi = max(intercept, intercept + slope)
        if not lo > 0.0:
            raise ValueError(
                f"affine frontier must stay positive on [0,1]; min is {lo}")
        return Frontier("affine", (float(intercept), float(slope)), 1.0,
                        abs(float(slope)), float(lo), float(hi),
                        float(intercept) + float(slope) / 2.0)

    @staticmethod
    def cosine(base: float, amplitude: float) -> "Frontier":
        lo = base - abs(amplitude)
        if not lo > 0.0:
            raise ValueError(
                f"cosine frontier must stay positive; base - |amplitude| = {lo}")
        # ∫ cos(2πx) dx over [0,1] vanishes, so the area is just the base
        return Frontier("cosine", (float(base), float(amplitude)), 1.0,
                        _TWO_PI * abs(float(amplitude)),
                        float(lo), float(base + abs(amplitude)), float(base))

    @staticmethod
    def piecewise_linear(values, alpha: float = 1.0) -> "Frontier":
        vals = tuple(float(v) for v in values)
        if len(vals) < 2:
            raise ValueError("piecewise-linear frontier needs >= 2 knot values")
        if min(vals) <= 0.0:
            raise ValueError("piecewise-linear frontier values must be > 0")
        if not 0.0 < alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {alpha}")
        m = len(vals) - 1
        slope = max(abs(vals[j + 1] - vals[j]) * m for j in range(m))
        # on [0,1], |x-y| <= |x-y|**alpha, so the Lipschitz constant is
        # also a valid Hoelder constant for any declared alpha <= 1
        area = sum((vals[j] + vals[j + 1]) / 2.0 for j in range(m)) / m
        return Frontier("piecewise-linear", vals, float(alpha), slope,
                        min(vals), max(vals), area)

    # -- evaluation ----------------------------------------------------

    def evaluate(self, x: float) -> float:
        """Boundary height at ``x``; raises outside the unit interval."""
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"x must lie in [0, 1], got {x}")
        p = self.params
        if self.family == "constant":
            return p[0]
        if self.family == "affine":
            return p[0] + p[1] * x
        if self.family == "cosine":
            return p[0] + p[1] * math.cos(_TWO_PI * x)
        m = len(p) - 1
        j = min(int(x * m), m - 1)
        t = x * m - j
        return p[j] + (p[j + 1] - p[j]) * t

    def evaluate_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        if xs.size and (xs.min() < 0.0 or xs.max() > 1.0):
            raise ValueError("all x must lie in [0, 1]")
        p = self.params
        if self.family == "constant":
            return np.full_like(xs, p[0])
        if self.family == "affine":
            return p[0] + p[1] * xs
        if self.family == "cosine":
            return p[0] + p[1] * np.cos(_TWO_PI * xs)
        m = len(p) - 1
        pos = xs * m
        j = np.minimum(pos.astype(np.int64), m - 1)
        t = pos - j
        vals = np.asarray(p)
        return vals[j] + (vals[j + 1] - vals[j]) * t

    def strip_extrema(self, k: int, r: int) -> tuple[float, float]:
        """Exact (min, max) of the boundary over strip r of k.

        Strips follow the 1-based convention: strip ``r`` covers
        ``[(r-1)/k, r/k)``.  Extrema are taken over the closed hull of
        the strip, which brackets every sample ordinate in it.
        """
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if not 1 <= r <= k:
            raise ValueError(f"strip index r must be in 1..{k}, got {r}")
        lo = (r - 1) / k
        hi = r / k
        cands = [self.evaluate(lo), self.evaluate(hi)]
        if self.family == "cosine":
            # interior critical points of cos(2πx) sit at multiples of 1/2
            for xc in (0.0, 0.5, 1.0):
                if lo < xc < hi:
                    cands.append(self.evaluate(xc))
        elif self.family == "piecewise-linear":
            m = len(self.params) - 1
            for j in range(1, m):
                if lo < j / m < hi:
                    cands.append(self.params[j])
        return (min(cands), max(cands))

    # -- plumbing -------------------------------------------------------

    def backend_args(self) -> tuple[int, np.ndarray, float]:
        """(family code, parameter vector, bounding-box height) for the hot loops."""
        codes = {"constant": _CODE_CONSTANT, "affine": _CODE_AFFINE,
                 "cosine": _CODE_COSINE, "piecewise-linear": _CODE_PIECEWISE}
        return (codes[self.family],
                np.ascontiguousarray(self.params, dtype=np.float64),
                self.max_height)

    def label(self) -> str:
        """Compact ``family:p1,p2,...`` form (the CLI syntax)."""
        return self.family + ":" + ",".join(repr(v) for v in self.params)


@dataclass(frozen=True)
class Kernel:
    """A compactly supported smoothing density on [-A, A]."""

    family: str
    support_radius: float
    l2_norm_sq: float

    def evaluate(self, t: float) -> float:
        if self.family == "epanechnikov":
            return 0.75 * (1.0 - t * t) if -1.0 <= t <= 1.0 else 0.0
        if self.family == "biweight":
            if -1.0 <= t <= 1.0:
                s = 1.0 - t * t
                return 0.9375 * s * s
            return 0.0
        return 1.0 - abs(t) if -1.0 <= t <= 1.0 else 0.0

    def evaluate_array(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=np.float64)
        inside = np.abs(ts) <= 1.0
        if self.family == "epanechnikov":
            vals = 0.75 * (1.0 - ts * ts)
        elif self.family == "biweight":
            s = 1.0 - ts * ts
            vals = 0.9375 * s * s
        else:
            vals = 1.0 - np.abs(ts)
        return np.where(inside, vals, 0.0)

    def scaled_eval(self, h: float, t: float) -> float:
        """Bandwidth-h rescaling K(t/h)/h."""
        if not h > 0.0:
            raise ValueError(f"bandwidth h must be > 0, got {h}")
        return self.evaluate(t / h) / h

    def scaled_eval_array(self, h: float, ts: np.ndarray) -> np.ndarray:
        if not h > 0.0:
            raise ValueError(f"bandwidth h must be > 0, got {h}")
        return self.evaluate_array(np.asarray(ts) / h) / h


def kernel(family: str) -> Kernel:
    """Kernel factory by family name."""
    if family not in _KERNEL_L2_SQ:
        raise ValueError(
            f"unknown kernel {family!r}; expected one of {KERNEL_FAMILIES}")
    return Kernel(family, 1.0, _KERNEL_L2_SQ[family])


def sigma_theoretical(kern: Kernel, frontier: Frontier) -> float:
    """Limit standard deviation of the standardized estimation error.

    Equals ||K||_2 / c where 1/c is the area under the boundary, i.e.
    sqrt(∫K²) times the area.
    """
    return math.sqrt(kern.l2_norm_sq) * frontier.area

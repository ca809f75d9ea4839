"""Random inputs: uniform samples on the region, Poisson point processes,
and the coupled envelope ("sandwich") construction.

All generators are pure functions of ``(parameters, seed)``.  Points are
drawn by rejection from the bounding box ``[0,1] x [0, max_height]``
(accept iff ``y <= f(x)``), which is exact for every frontier family.
One shared accepted-point stream underlies the three coupled processes,
so the containment chain lower ⊆ mid ⊆ upper holds pathwise by
construction, not just in distribution.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _backend, rng
from .model import Frontier

PROVENANCES = ("sample_n", "poisson", "sandwich_lower", "sandwich_upper")

# child-stream labels under a replicate key
_POINTS_STREAM = 1
_COUNTS_STREAM = 2


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class SampleSet:
    """A finite point set in the region under a frontier.

    Coordinates are stored as parallel read-only arrays; ``points`` gives
    the tuple view (convenient for small sets and tests).
    """

    xs: np.ndarray
    ys: np.ndarray
    provenance: str
    n_nominal: int

    def __post_init__(self):
        if self.xs.shape != self.ys.shape:
            raise ValueError("xs and ys must have the same shape")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        self.xs.flags.writeable = False
        self.ys.flags.writeable = False

    def __len__(self) -> int:
        return int(self.xs.size)

    @property
    def points(self) -> list[Point]:
        return [Point(x, y) for x, y in zip(self.xs.tolist(), self.ys.tolist())]

    def to_csv(self, path) -> None:
        """Dump as two-column CSV with full 17-significant-digit precision."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y"])
            for x, y in zip(self.xs.tolist(), self.ys.tolist()):
                writer.writerow([format(x, ".17g"), format(y, ".17g")])


@dataclass(frozen=True)
class SandwichTriple:
    """The coupled quadruple built from one shared point stream.

    ``lower``/``mid``/``upper`` are the three Poisson processes with mean
    counts n(1-γ), n, n(1+γ); ``sample`` is the plain n-point sample.
    All four are prefixes of the same stream, so lower ⊆ mid ⊆ upper
    always, and lower ⊆ sample ⊆ upper exactly when ``bracketing_holds``
    (the lower count is <= n and the upper count is >= n).
    """

    lower: SampleSet
    mid: SampleSet
    upper: SampleSet
    sample: SampleSet
    gamma: float
    bracketing_holds: bool

    @property
    def counts(self) -> tuple[int, int, int]:
        return (len(self.lower), len(self.mid), len(self.upper))


def _points_key(seed: int) -> int:
    return rng.derive(seed, _POINTS_STREAM)


def _counts_stream(seed: int) -> rng.UniformStream:
    return rng.UniformStream(rng.derive(seed, _COUNTS_STREAM))


def poisson_draw(mean: float, stream: rng.UniformStream) -> int:
    """Exact Poisson variate; see :func:`stripfront.rng.poisson`."""
    return rng.poisson(mean, stream)


def sample_uniform(frontier: Frontier, n: int, seed: int) -> SampleSet:
    """Exactly n i.i.d. uniform points on the region under the frontier."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    code, params, maxh = frontier.backend_args()
    xs, ys = _backend.uniform_points(code, params, maxh, int(n), _points_key(seed))
    return SampleSet(xs, ys, "sample_n", int(n))


def sample_poisson_process(frontier: Frontier, n: int, seed: int) -> SampleSet:
    """Homogeneous Poisson process with total mean mass n on the region.

    The mean measure is ``n·c·λ`` restricted to the region, where 1/c is
    the region's area — so the expected point count is n for every
    frontier.  Conditional on the count, points are i.i.d. uniform.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    count = rng.poisson(float(n), _counts_stream(seed))
    code, params, maxh = frontier.backend_args()
    xs, ys = _backend.uniform_points(code, params, maxh, count, _points_key(seed))
    return SampleSet(xs, ys, "poisson", int(n))


def sandwich_counts(n: int, gamma: float, seed: int) -> tuple[int, int, int]:
    """Counts (lower, mid, upper) of the coupling, without drawing points.

    Three independent Poisson variates with means n(1-γ), nγ, nγ are
    drawn in that order and partially summed; :func:`sample_sandwich`
    uses exactly this function, so the counts here match the point sets
    there for equal (n, gamma, seed).
    """
    stream = _counts_stream(seed)
    n1 = rng.poisson(n * (1.0 - gamma), stream)
    m1 = rng.poisson(n * gamma, stream)
    m2 = rng.poisson(n * gamma, stream)
    return n1, n1 + m1, n1 + m1 + m2


def sample_sandwich(frontier: Frontier, n: int, gamma: float,
                    seed: int) -> SandwichTriple:
    """Draw the coupled triple plus the n-sample from one point stream.

    Independent Poisson counts N1 ~ P(n(1-γ)), M1, M2 ~ P(nγ) define the
    three process sizes N1 <= N1+M1 <= N1+M1+M2; each process takes that
    many leading points of a single i.i.d. stream, and the n-sample takes
    the first n.  The stream is long enough for all four even when
    bracketing fails.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    n1, n0, n2 = sandwich_counts(n, gamma, seed)
    code, params, maxh = frontier.backend_args()
    total = max(n2, n)
    xs, ys = _backend.uniform_points(code, params, maxh, total, _points_key(seed))
    xs.flags.writeable = False
    ys.flags.writeable = False

    def prefix(count: int, provenance: str) -> SampleSet:
        return SampleSet(xs[:count], ys[:count], provenance, int(n))

    return SandwichTriple(
        lower=prefix(n1, "sandwich_lower"),
        mid=prefix(n0, "poisson"),
        upper=prefix(n2, "sandwich_upper"),
        sample=prefix(n, "sample_n"),
        gamma=float(gamma),
        bracketing_holds=bool(n1 <= n <= n2),
    )


def strip_maxima_prefixes(frontier: Frontier, k: int, prefixes,
                          seed: int) -> np.ndarray:
    """Fused generation: strip maxima of several prefixes of one stream.

    Row i equals the strip maxima (k strips) of the first ``prefixes[i]``
    points of the stream drawn by :func:`sample_uniform` with the same
    seed, without materialising the points.  This is the hot path used by
    the experiment harness.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    code, params, maxh = frontier.backend_args()
    return _backend.prefix_strip_maxima(code, params, maxh, int(k),
                                        prefixes, _points_key(seed))

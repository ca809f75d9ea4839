"""Shared generators for randomized sweeps (deterministic via rng streams)."""

import math

from stripfront import EstimatorParams, Frontier, kernel
from stripfront.rng import UniformStream

KERNELS = [kernel(name) for name in ("epanechnikov", "biweight", "triangular")]


def log_uniform(stream: UniformStream, lo: float, hi: float) -> float:
    return math.exp(stream.uniform() * (math.log(hi) - math.log(lo)) + math.log(lo))


def random_frontier(stream: UniformStream) -> Frontier:
    pick = int(stream.uniform() * 4)
    if pick == 0:
        return Frontier.constant(0.5 + 1.5 * stream.uniform())
    if pick == 1:
        intercept = 0.5 + stream.uniform()
        slope = -(intercept - 0.15) + stream.uniform() * (1.0 + intercept - 0.15)
        return Frontier.affine(intercept, slope)
    if pick == 2:
        base = 0.8 + 0.7 * stream.uniform()
        return Frontier.cosine(base, stream.uniform() * (base - 0.2))
    n_knots = 3 + int(stream.uniform() * 4)
    return Frontier.piecewise_linear(
        [0.3 + 1.5 * stream.uniform() for _ in range(n_knots)])


def random_estimation_config(stream: UniformStream):
    """Random (frontier, params, x) with x inside the interior window."""
    frontier = random_frontier(stream)
    n = int(log_uniform(stream, 50, 5000))
    k = int(log_uniform(stream, 5, max(5, n // 2)))
    kern = KERNELS[int(stream.uniform() * 3)]
    while True:
        h = 0.05 + 0.45 * stream.uniform()
        margin = kern.support_radius * h + 1.0 / k
        if margin < 0.5:
            break
    x = margin + stream.uniform() * (1.0 - 2.0 * margin)
    return frontier, EstimatorParams(n=n, k=k, h=h, kernel=kern), x

"""Deterministic counter-based random streams.

Everything random in this package flows through a splitmix64-style
generator used in *counter mode*: the i-th variate of a stream is a pure
function of ``(key, i)``.  That buys three things at once:

* reproducibility — a 64-bit key fully determines every output bit;
* splittability — replicate r of an experiment derives its own key from
  ``(master_seed, n, r)`` and can run in parallel with no coordination;
* backend equivalence — the compiled and NumPy hot loops evaluate the
  same ``(key, counter) -> uniform`` function and therefore produce
  bit-identical point streams.

The scalar reference implementation lives here; the vectorised and
compiled versions in ``stripfront._backend`` must match it exactly.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_DERIVE_SALT = 0xD1B54A32D192ED03

# 2**-53; uniforms are built from the top 53 bits of a 64-bit word
_INV53 = 1.0 / 9007199254740992.0

# Poisson sampling switches from inversion to transformed rejection here
_POISSON_PTRS_CUTOVER = 10.0


def mix64(z: int) -> int:
    """Finalising bijection on 64-bit words (splitmix64 output function)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def stream_value(key: int, index: int) -> int:
    """The ``index``-th 64-bit word of the stream identified by ``key``."""
    return mix64((key + (index + 1) * _GOLDEN) & _MASK64)


def stream_u01(key: int, index: int) -> float:
    """The ``index``-th uniform variate in [0, 1) of stream ``key``."""
    return (stream_value(key, index) >> 11) * _INV53


def derive(key: int, *ids: int) -> int:
    """Derive a child stream key from ``key`` and a path of integer ids.

    Distinct paths give statistically independent streams; the same path
    always gives the same key.
    """
    k = key & _MASK64
    for i in ids:
        k = mix64(k ^ mix64((i + _DERIVE_SALT) & _MASK64))
    return k


class UniformStream:
    """Stateful cursor over one uniform stream (for sequential consumers).

    Poisson sampling consumes a variable number of uniforms per draw, so
    it needs a cursor rather than direct counter indexing.
    """

    __slots__ = ("key", "cursor")

    def __init__(self, key: int, cursor: int = 0):
        self.key = key & _MASK64
        self.cursor = cursor

    def uniform(self) -> float:
        u = stream_u01(self.key, self.cursor)
        self.cursor += 1
        return u


def poisson(mean: float, stream: UniformStream) -> int:
    """Exact Poisson draw with the given mean, consuming ``stream``.

    Uses multiplicative inversion for small means and Hormann's
    transformed-rejection-with-squeeze method above the cutover; both are
    exact samplers, not approximations.  Deterministic given the stream
    state.
    """
    if not (mean >= 0.0):
        raise ValueError(f"Poisson mean must be >= 0, got {mean}")
    if mean == 0.0:
        return 0
    if mean < _POISSON_PTRS_CUTOVER:
        limit = math.exp(-mean)
        prod = 1.0
        count = 0
        while True:
            prod *= stream.uniform()
            if prod <= limit:
                return count
            count += 1
    return _poisson_ptrs(mean, stream)


def _poisson_ptrs(mean: float, stream: UniformStream) -> int:
    loglam = math.log(mean)
    b = 0.931 + 2.53 * math.sqrt(mean)
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)
    while True:
        u = stream.uniform() - 0.5
        v = stream.uniform()
        us = 0.5 - abs(u)
        k = math.floor((2.0 * a / us + b) * u + mean + 0.43)
        if us >= 0.07 and v <= vr:
            return int(k)
        if k < 0 or (us < 0.013 and v > us):
            continue
        if (math.log(v) + math.log(invalpha) - math.log(a / (us * us) + b)
                <= k * loglam - mean - math.lgamma(k + 1.0)):
            return int(k)

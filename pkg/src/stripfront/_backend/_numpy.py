"""NumPy implementation of the hot sampling and strip-maxima loops.

This is the fallback backend; ``_core.pyx`` is the compiled twin.  The two
must stay bit-for-bit interchangeable: same counter-based uniform stream,
same candidate order, same acceptance test, same strip indexing.  Batch
sizes here are pure tuning knobs — because the stream is counter-indexed,
they cannot affect any output.

(The one theoretical caveat is the cosine family, where ``np.cos`` and the
C library ``cos`` could in principle disagree by one ulp and flip an
acceptance decision whose margin is below 2^-52; the cross-backend tests
exercise cosine streams to confirm this does not occur on the seeds used.)
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_INV53 = 1.0 / 9007199254740992.0
_TWO_PI = 6.283185307179586

_MAX_BLOCK = 1 << 21  # candidates per block; memory bound only


def _u01_block(key: int, start: int, count: int) -> np.ndarray:
    """Uniforms for counters start..start+count-1 of stream ``key``."""
    with np.errstate(over="ignore"):
        ctr = np.arange(start, start + count, dtype=np.uint64)
        z = np.uint64(key) + (ctr + _ONE) * _GOLDEN
        z = (z ^ (z >> _S30)) * _MIX1
        z = (z ^ (z >> _S27)) * _MIX2
        z ^= z >> _S31
    return (z >> _S11).astype(np.float64) * _INV53


def _frontier_values(family: int, params: np.ndarray, xs: np.ndarray) -> np.ndarray:
    if family == 0:
        return np.full_like(xs, params[0])
    if family == 1:
        return params[0] + params[1] * xs
    if family == 2:
        return params[0] + params[1] * np.cos(_TWO_PI * xs)
    m = params.size - 1
    pos = xs * m
    j = np.minimum(pos.astype(np.int64), m - 1)
    t = pos - j
    return params[j] + (params[j + 1] - params[j]) * t


def _candidate_block(family, params, max_height, first_candidate, n_candidates, key):
    vals = _u01_block(key, 2 * first_candidate, 2 * n_candidates)
    xs = vals[0::2]
    ys = vals[1::2] * max_height
    keep = ys <= _frontier_values(family, params, xs)
    return xs[keep], ys[keep]


def uniform_points(family, params, max_height, count, key):
    """First ``count`` accepted points of the rejection stream for ``key``."""
    params = np.ascontiguousarray(params, dtype=np.float64)
    out_x = np.empty(count, dtype=np.float64)
    out_y = np.empty(count, dtype=np.float64)
    have = 0
    next_candidate = 0
    while have < count:
        need = count - have
        block = min(max(4096, need + need // 8 + 16), _MAX_BLOCK)
        ax, ay = _candidate_block(family, params, max_height,
                                  next_candidate, block, key)
        take = min(ax.size, need)
        out_x[have:have + take] = ax[:take]
        out_y[have:have + take] = ay[:take]
        have += take
        next_candidate += block
    return out_x, out_y


def prefix_strip_maxima(family, params, max_height, k, prefixes, key):
    """Strip maxima of every requested prefix of the accepted stream.

    ``prefixes`` must be nondecreasing nonnegative counts; the result has
    one row of k per-strip maxima per prefix (empty strips stay 0).  Row
    i equals ``strip_maxima`` of the first ``prefixes[i]`` points of
    ``uniform_points(..., key)``.
    """
    params = np.ascontiguousarray(params, dtype=np.float64)
    prefixes = np.asarray(prefixes, dtype=np.int64)
    n_pref = prefixes.size
    rows = np.zeros((n_pref, k), dtype=np.float64)
    if n_pref == 0:
        return rows
    if np.any(prefixes < 0) or np.any(np.diff(prefixes) < 0):
        raise ValueError("prefixes must be nondecreasing and >= 0")
    u = np.zeros(k, dtype=np.float64)
    pi = 0
    have = 0
    next_candidate = 0
    while pi < n_pref and prefixes[pi] == have:
        pi += 1  # rows for empty prefixes stay all-zero
    target = int(prefixes[-1])
    while pi < n_pref:
        need = target - have
        block = min(max(4096, need + need // 8 + 16), _MAX_BLOCK)
        ax, ay = _candidate_block(family, params, max_height,
                                  next_candidate, block, key)
        pos = 0
        while pos < ax.size and pi < n_pref:
            take = min(int(prefixes[pi]) - have, ax.size - pos)
            if take > 0:
                seg_x = ax[pos:pos + take]
                seg_y = ay[pos:pos + take]
                idx = np.minimum((seg_x * k).astype(np.int64), k - 1)
                np.maximum.at(u, idx, seg_y)
                have += take
                pos += take
            while pi < n_pref and prefixes[pi] == have:
                rows[pi] = u
                pi += 1
        next_candidate += block
    return rows


def strip_maxima_points(xs, ys, k):
    """Per-strip maxima of materialised points; empty strips give 0."""
    u = np.zeros(k, dtype=np.float64)
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.size:
        idx = np.minimum((xs * k).astype(np.int64), k - 1)
        np.maximum.at(u, idx, ys)
    return u

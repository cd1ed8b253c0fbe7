"""Truncated variations of discrete paths.

The main routine, :func:`sweep_decompose`, splits a path into alternating
up- and down-runs using first-exit indices: an up-run starts at the first
index where the path rises more than ``c`` above its running minimum, and
ends where it falls more than ``c`` below the running maximum of that run.
The truncated variations are then plain sums of ``M_k - m_k - c`` over the
runs.  :func:`brute_force_variations` evaluates the defining supremum
directly and serves as the test oracle.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import IndexOutOfRange, TooLongForExhaustive
from .paths import DiscretePath, as_path, check_truncation, from_samples

__all__ = [
    "INF",
    "Direction",
    "SweepDecomposition",
    "VariationTriple",
    "brute_force_variations",
    "classical_variations",
    "first_exit_indices",
    "optimal_approximation",
    "sweep_decompose",
    "truncated_variations",
]

INF = math.inf
EXHAUSTIVE_LIMIT = 15


class Direction(str, enum.Enum):
    UP_FIRST = "UpFirst"
    DOWN_FIRST = "DownFirst"
    FLAT = "Flat"


@dataclass(frozen=True)
class VariationTriple:
    ttv: float
    utv: float
    dtv: float
    c: float

    def as_dict(self):
        return {"ttv": self.ttv, "utv": self.utv, "dtv": self.dtv, "c": self.c}


@dataclass(frozen=True)
class SweepDecomposition:
    """Alternating run structure of a path at truncation level ``c``.

    For ``UpFirst`` the index chains satisfy
    ``iU[0] < iD[0] < iU[1] < iD[1] < ...``; ``m[k]`` is the minimum of the
    stretch preceding the ``k``-th up-run and ``M[k]`` the maximum of that
    up-run.  ``DownFirst`` is the mirror image: ``iD[0] < iU[0] < ...``,
    ``M[k]`` is the maximum preceding the ``k``-th down-run and ``m[k]`` the
    minimum of that down-run.  Unreached chain entries are ``INF``.
    ``K`` is the index of the last completed leading run, ``-1`` when flat.
    """

    direction: Direction
    iU: tuple
    iD: tuple
    m: tuple
    M: tuple
    K: int
    c: float

    def up_runs(self):
        """``(low, high)`` pairs whose excess ``high - low - c`` sums to UTV."""
        if self.direction is Direction.UP_FIRST:
            return list(zip(self.m, self.M))
        if self.direction is Direction.DOWN_FIRST:
            return list(zip(self.m, self.M[1:]))
        return []

    def down_runs(self):
        """``(high, low)`` pairs whose excess ``high - low - c`` sums to DTV."""
        if self.direction is Direction.UP_FIRST:
            return list(zip(self.M, self.m[1:]))
        if self.direction is Direction.DOWN_FIRST:
            return list(zip(self.M, self.m))
        return []


def _up_exit(f, start, c):
    # (first j > start with f[j] > min(f[start:j]) + c, that minimum)
    lo = f[start]
    for j in range(start + 1, len(f)):
        x = f[j]
        if x > lo + c:
            return j, lo
        if x < lo:
            lo = x
    return INF, lo


def _down_exit(f, start, c):
    hi = f[start]
    for j in range(start + 1, len(f)):
        x = f[j]
        if x < hi - c:
            return j, hi
        if x > hi:
            hi = x
    return INF, hi


def first_exit_indices(path, start, c):
    """First up-exit and down-exit indices after ``start``.

    The up-exit is the first ``j > start`` where the path exceeds its running
    minimum over ``[start, j)`` by more than ``c``; the down-exit is the
    mirror.  Missing exits are reported as ``INF``.
    """
    path = as_path(path)
    c = check_truncation(c)
    if not 0 <= start < len(path):
        raise IndexOutOfRange(start, len(path))
    f = path.values.tolist()
    return _up_exit(f, start, c)[0], _down_exit(f, start, c)[0]


def _decompose_up_first(f, c, iu0, m0):
    last = len(f) - 1
    iU, iD, m, M = [iu0], [], [m0], []
    while True:
        u = iU[-1]
        if u <= last - 1:
            d, hi = _down_exit(f, u, c)
        else:
            d, hi = INF, f[u]
        iD.append(d)
        M.append(hi)
        if d == INF:
            break
        if d <= last - 1:
            nu, lo = _up_exit(f, d, c)
        else:
            nu, lo = INF, f[d]
        m.append(lo)
        if nu == INF:
            break
        iU.append(nu)
    return iU, iD, m, M


def sweep_decompose(path, c) -> SweepDecomposition:
    """Split ``path`` into alternating runs at truncation level ``c``.

    Down-first paths are handled by decomposing the negated path and
    reflecting: indices are kept, values negated and the roles of the up and
    down chains swapped.
    """
    path = as_path(path)
    c = check_truncation(c)
    f = path.values.tolist()
    iu0, lo0 = _up_exit(f, 0, c)
    id0, _ = _down_exit(f, 0, c)
    if iu0 == INF and id0 == INF:
        return SweepDecomposition(Direction.FLAT, (), (), (), (), -1, c)
    if iu0 < id0:
        iU, iD, m, M = _decompose_up_first(f, c, iu0, lo0)
        return SweepDecomposition(Direction.UP_FIRST, tuple(iU), tuple(iD),
                                  tuple(m), tuple(M), len(iU) - 1, c)
    g = [-x for x in f]
    iu0, lo0 = _up_exit(g, 0, c)
    iU, iD, m, M = _decompose_up_first(g, c, iu0, lo0)
    return SweepDecomposition(Direction.DOWN_FIRST, tuple(iD), tuple(iU),
                              tuple(-x for x in M), tuple(-x for x in m),
                              len(iU) - 1, c)


def truncated_variations(path, c) -> VariationTriple:
    """(TTV, UTV, DTV) of ``path`` at truncation level ``c`` in O(L).

    ``c = 0`` gives the classical total, positive and negative variations.
    """
    dec = sweep_decompose(path, c)
    c = dec.c
    utv = 0.0
    for lo, hi in dec.up_runs():
        utv += hi - lo - c
    dtv = 0.0
    for hi, lo in dec.down_runs():
        dtv += hi - lo - c
    return VariationTriple(utv + dtv, utv, dtv, c)


def classical_variations(path) -> VariationTriple:
    """Total, positive and negative variation from consecutive increments."""
    d = np.diff(as_path(path).values)
    utv = sum(np.maximum(d, 0.0).tolist())
    dtv = sum(np.maximum(-d, 0.0).tolist())
    return VariationTriple(utv + dtv, utv, dtv, 0.0)


def _weights(v):
    diff = v[None, :] - v[:, None]  # diff[i, j] = v[j] - v[i]
    return np.abs(diff), np.maximum(diff, 0.0), np.maximum(-diff, 0.0)


def _chain_best(w, c):
    # best[j]: optimum over increasing index chains ending at j
    n = w.shape[0]
    gain = np.maximum(w - c, 0.0)
    best = np.zeros(n)
    for j in range(1, n):
        best[j] = max(0.0, float(np.max(best[:j] + gain[:j, j])))
    return float(best.max())


def _exhaustive_best(w, c):
    n = w.shape[0]
    gain = np.maximum(w - c, 0.0)
    masks = np.arange(1 << n, dtype=np.int64)
    total = np.zeros(masks.size)
    last = np.full(masks.size, -1, dtype=np.int64)
    for b in range(n):
        has = ((masks >> b) & 1).astype(bool)
        ext = has & (last >= 0)
        total[ext] += gain[last[ext], b]
        last[has] = b
    return float(total.max())


def brute_force_variations(path, c, method="chain") -> VariationTriple:
    """Truncated variations straight from the supremum over subsequences.

    ``method="chain"`` uses the O(L^2) recursion
    ``best(j) = max(0, max_{i<j} best(i) + (w(i, j) - c)+)``;
    ``method="exhaustive"`` enumerates every subsequence and is limited to
    paths of length ``EXHAUSTIVE_LIMIT``.  Both are oracles for
    :func:`truncated_variations` and are deliberately slow.
    """
    path = as_path(path)
    c = check_truncation(c)
    if method == "exhaustive":
        if len(path) > EXHAUSTIVE_LIMIT:
            raise TooLongForExhaustive(len(path), EXHAUSTIVE_LIMIT)
        solve = _exhaustive_best
    elif method == "chain":
        solve = _chain_best
    else:
        raise ValueError(f"unknown method {method!r}")
    wt, wu, wd = _weights(path.values)
    return VariationTriple(solve(wt, c), solve(wu, c), solve(wd, c), c)


def optimal_approximation(path, c) -> DiscretePath:
    """Minimal-variation path within uniform distance ``c/2`` of ``path``.

    On up-runs the result follows the running maximum minus ``c/2``, on
    down-runs the running minimum plus ``c/2``, and before the first exit it
    is constant.  Its total, positive and negative variations equal the
    truncated variations of ``path``.
    """
    path = as_path(path)
    c = check_truncation(c)
    dec = sweep_decompose(path, c)
    v = path.values
    if dec.direction is Direction.FLAT:
        out = np.full(len(path), 0.5 * (v.min() + v.max()))
    elif dec.direction is Direction.DOWN_FIRST:
        return -optimal_approximation(-path, c)
    else:
        out = _approx_up_first(v, dec, c)
    return from_samples(out, path.times)


def _approx_up_first(v, dec, c):
    n = v.size
    half = 0.5 * c
    out = np.empty(n)
    out[:dec.iU[0]] = dec.m[0] + half
    for k, u in enumerate(dec.iU):
        d = dec.iD[k]
        stop = n if d == INF else d
        out[u:stop] = np.maximum.accumulate(v[u:stop]) - half
        if d == INF:
            break
        nxt = dec.iU[k + 1] if k + 1 < len(dec.iU) else INF
        stop = n if nxt == INF else nxt
        out[d:stop] = np.minimum.accumulate(v[d:stop]) + half
    return out

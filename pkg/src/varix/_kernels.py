"""Compiled inner loops for the bulk paths (profiles, Monte Carlo).

The pure-Python implementations in :mod:`varix.variation` and
:mod:`varix.crossings` are the reference; these kernels must agree with them
bit for bit and are tested against them.
"""
import numba
import numpy as np

UP = 0
DOWN = 1


@numba.njit(cache=True, nogil=True)
def sweep_variations(f, c):
    """One-pass (utv, dtv) at truncation ``c`` via first-exit chains."""
    n = f.shape[0]
    utv = 0.0
    dtv = 0.0
    phase = 0
    lo = f[0]
    hi = f[0]
    seg_lo = lo
    seg_hi = hi
    for j in range(1, n):
        x = f[j]
        if phase == 0:
            if x > lo + c:
                phase = 1
                seg_lo = lo
                hi = x
            elif x < hi - c:
                phase = -1
                seg_hi = hi
                lo = x
            else:
                if x < lo:
                    lo = x
                if x > hi:
                    hi = x
        elif phase == 1:
            if x < hi - c:
                utv += hi - seg_lo - c
                phase = -1
                seg_hi = hi
                lo = x
            elif x > hi:
                hi = x
        else:
            if x > lo + c:
                dtv += seg_hi - lo - c
                phase = 1
                seg_lo = lo
                hi = x
            elif x < lo:
                lo = x
    if phase == 1:
        utv += hi - seg_lo - c
    elif phase == -1:
        dtv += seg_hi - lo - c
    return utv, dtv


@numba.njit(cache=True, nogil=True)
def count_one(f, c, y, kind):
    top = y + c
    count = 0
    armed = False
    if kind == UP:
        for j in range(f.shape[0]):
            x = f[j]
            if not armed:
                if x < y:
                    armed = True
            elif x > top:
                count += 1
                armed = False
    else:
        for j in range(f.shape[0]):
            x = f[j]
            if not armed:
                if x > top:
                    armed = True
            elif x < y:
                count += 1
                armed = False
    return count


@numba.njit(cache=True, nogil=True)
def count_many(f, c, ys, kind):
    out = np.empty(ys.shape[0], dtype=np.int64)
    for i in range(ys.shape[0]):
        out[i] = count_one(f, c, ys[i], kind)
    return out

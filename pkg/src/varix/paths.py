"""Finite real paths and step functions.

A :class:`DiscretePath` is the value sequence ``f_0, ..., f_{L-1}`` that every
other module works on.  Optional time stamps are carried along as metadata
only; nothing in the package depends on their spacing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .exceptions import (
    DomainError,
    EmptyPath,
    LengthMismatch,
    NonFiniteValue,
    NonMonotoneTimes,
)

__all__ = [
    "DiscretePath",
    "StepFunction",
    "check_truncation",
    "from_samples",
    "sorted_values",
    "oscillation",
    "uniform_distance",
]


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DiscretePath:
    """Validated, immutable sequence of finite reals.

    Build instances with :func:`from_samples`; the constructor itself does
    no validation.
    """

    values: np.ndarray
    times: Optional[np.ndarray] = None

    def __len__(self):
        return self.values.shape[0]

    def __neg__(self):
        return DiscretePath(_frozen(-self.values), self.times)

    def __add__(self, shift):
        return DiscretePath(_frozen(self.values + float(shift)), self.times)

    def __eq__(self, other):
        if not isinstance(other, DiscretePath):
            return NotImplemented
        if (self.times is None) != (other.times is None):
            return False
        same_times = self.times is None or np.array_equal(self.times, other.times)
        return np.array_equal(self.values, other.values) and same_times

    __hash__ = None

    def tolist(self):
        return self.values.tolist()

    def window(self, start, stop):
        """Sub-path on the inclusive index range ``[start, stop]``."""
        times = None if self.times is None else self.times[start:stop + 1]
        return from_samples(self.values[start:stop + 1], times)


def from_samples(values: Sequence[float], times: Optional[Sequence[float]] = None) -> DiscretePath:
    """Validate samples and wrap them in a :class:`DiscretePath`.

    Raises
    ------
    EmptyPath
        ``values`` is empty.
    NonFiniteValue
        A value (or time) is NaN or infinite; carries the offending index.
    NonMonotoneTimes
        ``times`` is not strictly increasing; carries the first bad index.
    LengthMismatch
        ``times`` and ``values`` differ in length.
    """
    v = np.array(values, dtype=float).reshape(-1)
    if v.size == 0:
        raise EmptyPath()
    bad = np.flatnonzero(~np.isfinite(v))
    if bad.size:
        raise NonFiniteValue(int(bad[0]))
    t = None
    if times is not None:
        t = np.array(times, dtype=float).reshape(-1)
        if t.size != v.size:
            raise LengthMismatch(v.size, t.size)
        bad = np.flatnonzero(~np.isfinite(t))
        if bad.size:
            raise NonFiniteValue(int(bad[0]))
        bad = np.flatnonzero(np.diff(t) <= 0)
        if bad.size:
            raise NonMonotoneTimes(int(bad[0]) + 1)
        t.setflags(write=False)
    v.setflags(write=False)
    return DiscretePath(v, t)


def as_path(obj) -> DiscretePath:
    if isinstance(obj, DiscretePath):
        return obj
    return from_samples(obj)


def check_truncation(c, *, allow_zero=True) -> float:
    """Return ``c`` as a float after checking it is a valid truncation level."""
    c = float(c)
    if not np.isfinite(c) or c < 0 or (c == 0 and not allow_zero):
        need = ">= 0" if allow_zero else "> 0"
        raise DomainError(f"truncation level must be finite and {need}, got {c!r}")
    return c


def sorted_values(path) -> np.ndarray:
    """Non-decreasing rearrangement of the path values."""
    return np.sort(as_path(path).values, kind="stable")


def oscillation(path) -> float:
    """Largest absolute difference between any two values, ``max - min``."""
    v = as_path(path).values
    return float(v.max() - v.min())


def uniform_distance(f, g) -> float:
    """Sup-norm distance between two paths of equal length."""
    f, g = as_path(f), as_path(g)
    if len(f) != len(g):
        raise LengthMismatch(len(f), len(g))
    return float(np.max(np.abs(f.values - g.values)))


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Step function on ``[knots[0], knots[-1]]``.

    Takes ``point_values[k]`` at ``knots[k]`` and ``interval_values[k]`` on the
    open interval ``(knots[k], knots[k+1])``.  The value sequence in time order
    is ``f_0, f_1, ..., f_{2n}`` with even entries at knots and odd entries on
    the open gaps.
    """

    knots: np.ndarray
    point_values: np.ndarray
    interval_values: np.ndarray

    def __post_init__(self):
        knots = _frozen(self.knots)
        pv = _frozen(self.point_values)
        iv = _frozen(self.interval_values)
        if knots.ndim != 1 or knots.size < 1:
            raise EmptyPath()
        if pv.shape != knots.shape:
            raise LengthMismatch(knots.size, pv.size)
        if iv.size != knots.size - 1:
            raise LengthMismatch(knots.size - 1, iv.size)
        for arr in (knots, pv, iv):
            bad = np.flatnonzero(~np.isfinite(arr))
            if bad.size:
                raise NonFiniteValue(int(bad[0]))
        bad = np.flatnonzero(np.diff(knots) <= 0)
        if bad.size:
            raise NonMonotoneTimes(int(bad[0]) + 1)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "point_values", pv)
        object.__setattr__(self, "interval_values", iv)

    @classmethod
    def from_sequence(cls, values, knots):
        """Build from the interleaved sequence ``f_0..f_{2n}`` and ``n+1`` knots."""
        values = np.asarray(values, dtype=float)
        if values.size % 2 == 0:
            raise LengthMismatch(2 * len(knots) - 1, values.size)
        return cls(knots, values[0::2], values[1::2])

    @property
    def anchors(self) -> np.ndarray:
        """``t(0), t(1), ..., t(2n)`` with ``t(2k) = t(2k+1)``."""
        a = np.repeat(self.knots, 2)[:-1]
        return a

    def sequence(self) -> np.ndarray:
        out = np.empty(2 * self.knots.size - 1)
        out[0::2] = self.point_values
        out[1::2] = self.interval_values
        return out

    def to_path(self) -> DiscretePath:
        """Value sequence as a path, time-stamped at knots and gap midpoints."""
        t = np.empty(2 * self.knots.size - 1)
        t[0::2] = self.knots
        t[1::2] = 0.5 * (self.knots[:-1] + self.knots[1:])
        return from_samples(self.sequence(), t)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any((t < self.knots[0]) | (t > self.knots[-1])):
            raise DomainError("evaluation point outside the support")
        k = np.searchsorted(self.knots, t, side="left")
        at_knot = (k < self.knots.size) & (self.knots[np.minimum(k, self.knots.size - 1)] == t)
        gap = np.clip(k - 1, 0, max(self.interval_values.size - 1, 0))
        if self.interval_values.size == 0:
            return np.broadcast_to(self.point_values[0], t.shape).copy()
        return np.where(at_knot, self.point_values[np.minimum(k, self.knots.size - 1)],
                        self.interval_values[gap])

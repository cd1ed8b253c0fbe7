"""Segment and level crossings of discrete paths.

An upcrossing of the band ``[y, y + c]`` is a passage from strictly below
``y`` to strictly above ``y + c``; a downcrossing is the reverse.  For a
finite path the count is piecewise constant in ``y`` with breakpoints among
the values ``f_i`` and ``f_i - c``, so integrating it exactly only needs one
evaluation per gap between breakpoints.
"""
from __future__ import annotations

import enum
import io
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .exceptions import DomainError, ParseError, ToleranceViolated
from .paths import as_path, check_truncation, uniform_distance

__all__ = [
    "CrossingKind",
    "CrossingProfile",
    "CrossingTrace",
    "PiecewiseDensity",
    "banach_limit",
    "count_crossings",
    "crossing_profile",
    "profile_integral",
    "read_density_tsv",
    "read_profile_tsv",
    "sandwich_check",
]


class CrossingKind(str, enum.Enum):
    UP = "up"
    DOWN = "down"
    BOTH = "both"

    @classmethod
    def parse(cls, kind):
        if isinstance(kind, cls):
            return kind
        try:
            return cls(str(kind).lower())
        except ValueError:
            raise ValueError(f"kind must be one of up/down/both, got {kind!r}") from None


@dataclass(frozen=True)
class CrossingTrace:
    """Clock indices of one crossing count.

    ``sigma[0]`` is the start index 0 and ``sigma[n]`` the index where the
    ``n``-th crossing completed; ``tau[n]`` is the index where the path first
    entered the starting side after ``sigma[n]``.
    """

    kind: CrossingKind
    sigma: tuple
    tau: tuple

    @property
    def count(self):
        return len(self.sigma) - 1


def _trace(f, c, y, kind):
    top = y + c
    if kind is CrossingKind.UP:
        arm, fire = (lambda x: x < y), (lambda x: x > top)
    else:
        arm, fire = (lambda x: x > top), (lambda x: x < y)
    sigma, tau = [0], []
    armed = False
    for j, x in enumerate(f):
        if not armed:
            if arm(x):
                tau.append(j)
                armed = True
        elif fire(x):
            sigma.append(j)
            armed = False
    return CrossingTrace(kind, tuple(sigma), tuple(tau))


def count_crossings(path, c, y, kind="both"):
    """Number of crossings of the band ``[y, y + c]`` and the clock trace.

    Every clock search starts at the index where the previous clock fired
    (index 0 for the first one), so the initial value takes part.  For
    ``kind="both"`` the trace is an ``(up, down)`` pair.
    """
    path = as_path(path)
    c = check_truncation(c)
    kind = CrossingKind.parse(kind)
    f = path.values.tolist()
    y = float(y)
    if kind is CrossingKind.BOTH:
        up = _trace(f, c, y, CrossingKind.UP)
        down = _trace(f, c, y, CrossingKind.DOWN)
        return up.count + down.count, (up, down)
    tr = _trace(f, c, y, kind)
    return tr.count, tr


def _count_levels(values, c, ys, kind):
    if kind is CrossingKind.UP:
        return _kernels.count_many(values, c, ys, _kernels.UP)
    if kind is CrossingKind.DOWN:
        return _kernels.count_many(values, c, ys, _kernels.DOWN)
    return (_kernels.count_many(values, c, ys, _kernels.UP)
            + _kernels.count_many(values, c, ys, _kernels.DOWN))


@dataclass(frozen=True, eq=False)
class PiecewiseDensity:
    """Non-negative piecewise-constant function, zero outside its breakpoints.

    ``values[j]`` is the value on ``(breakpoints[j], breakpoints[j+1])``.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        bp = np.array(self.breakpoints, dtype=float)
        vals = np.array(self.values, dtype=float)
        if bp.ndim != 1 or vals.ndim != 1:
            raise DomainError("breakpoints and values must be one-dimensional")
        if bp.size == 0:
            if vals.size:
                raise DomainError("values given without breakpoints")
        elif vals.size != bp.size - 1:
            raise DomainError(f"need {bp.size - 1} values for {bp.size} breakpoints, got {vals.size}")
        if np.any(~np.isfinite(bp)) or np.any(~np.isfinite(vals)):
            raise DomainError("breakpoints and values must be finite")
        if np.any(np.diff(bp) <= 0):
            raise DomainError("breakpoints must be strictly increasing")
        if np.any(vals < 0):
            raise DomainError("density values must be non-negative")
        bp.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    def __call__(self, y):
        """Value at ``y``; at a breakpoint the right-hand value is returned."""
        y = np.asarray(y, dtype=float)
        if self.breakpoints.size == 0:
            return np.zeros_like(y)
        k = np.searchsorted(self.breakpoints, y, side="right") - 1
        inside = (k >= 0) & (k < self.values.size)
        return np.where(inside, self.values[np.clip(k, 0, max(self.values.size - 1, 0))], 0.0)

    def rows(self, skip_zero=True):
        for lo, hi, v in zip(self.breakpoints[:-1], self.breakpoints[1:], self.values):
            if v != 0 or not skip_zero:
                yield float(lo), float(hi), v

    def to_tsv(self):
        return "".join(f"{lo!r}\t{hi!r}\t{float(v)!r}\n" for lo, hi, v in self.rows())


@dataclass(frozen=True, eq=False)
class CrossingProfile(PiecewiseDensity):
    """Crossing count as a step function of the level ``y``.

    ``values[j]`` is the (integer) count on ``(breakpoints[j],
    breakpoints[j+1])``; both tails are zero.  Counts at the breakpoints
    themselves are not defined.
    """

    kind: CrossingKind = CrossingKind.BOTH
    c: float = field(default=0.0)

    def __post_init__(self):
        super().__post_init__()
        if np.any(self.values != np.round(self.values)):
            raise DomainError("crossing counts must be integers")
        counts = self.values.astype(np.int64)
        counts.setflags(write=False)
        object.__setattr__(self, "values", counts)

    @property
    def counts(self):
        return self.values

    def to_tsv(self):
        return "".join(f"{lo!r}\t{hi!r}\t{int(v)}\n" for lo, hi, v in self.rows())


def crossing_profile(path, c, kind="both") -> CrossingProfile:
    """Exact crossing-count profile ``y -> count`` of ``path``.

    The candidate breakpoints are the sorted distinct values of ``f_i`` and
    ``f_i - c``; the count is evaluated once at the midpoint of every gap.
    """
    path = as_path(path)
    c = check_truncation(c)
    kind = CrossingKind.parse(kind)
    v = np.ascontiguousarray(path.values)
    bp = np.unique(np.concatenate([v, v - c]))
    mids = 0.5 * (bp[:-1] + bp[1:])
    counts = _count_levels(v, c, mids, kind)
    return CrossingProfile(bp, counts, kind=kind, c=c)


def _common_partition(a, b):
    bp = np.union1d(a.breakpoints, b.breakpoints)
    mids = 0.5 * (bp[:-1] + bp[1:])
    return bp, mids


def profile_integral(profile, density=None) -> float:
    """Exact integral of a profile over the real line, optionally weighted.

    With a ``density`` both step functions are refined to a common partition
    before summing ``count * density * length``.  Terms are accumulated in
    increasing ``y``.
    """
    bp = profile.breakpoints
    if bp.size < 2:
        return 0.0
    if density is None:
        terms = profile.values * np.diff(bp)
    else:
        if density.breakpoints.size < 2:
            return 0.0
        bp, mids = _common_partition(profile, density)
        terms = profile(mids) * density(mids) * np.diff(bp)
    total = 0.0
    for t in terms.tolist():
        total += t
    return total


def sandwich_check(f, f_eps, eps, c, y, kind="up") -> bool:
    """Check the crossing-count sandwich between ``f`` and an ``eps``-close path.

    Returns whether both ``count_c^y(f) <= count_{c-2eps}^{y+eps}(f_eps)`` and
    ``count_{c+2eps}^{y-eps}(f_eps) <= count_c^y(f)`` hold.  They always do
    for valid input; the function exists to exercise that in tests.
    """
    c = check_truncation(c, allow_zero=False)
    eps = float(eps)
    if not 0 < eps < c / 2:
        raise DomainError(f"need 0 < eps < c/2, got eps={eps!r}, c={c!r}")
    dist = uniform_distance(f, f_eps)
    if dist > eps:
        raise ToleranceViolated(dist, eps)
    mid, _ = count_crossings(f, c, y, kind)
    upper, _ = count_crossings(f_eps, c - 2 * eps, y + eps, kind)
    lower, _ = count_crossings(f_eps, c + 2 * eps, y - eps, kind)
    return bool(lower <= mid <= upper)


def banach_limit(path, c_sequence):
    """Integrated crossing counts ``int n_c^y dy`` along decreasing ``c``.

    The last entry may be 0, giving the classical total variation.
    """
    cs = [float(c) for c in c_sequence]
    if not cs:
        return []
    if any(b >= a for a, b in zip(cs, cs[1:])):
        raise DomainError("c_sequence must be strictly decreasing")
    if any(c <= 0 for c in cs[:-1]) or cs[-1] < 0:
        raise DomainError("c_sequence must be positive, with 0 allowed last")
    path = as_path(path)
    return [profile_integral(crossing_profile(path, c, CrossingKind.BOTH)) for c in cs]


def _read_rows(text):
    rows = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(lineno, "expected three tab-separated columns")
        try:
            lo, hi, val = (float(p) for p in parts)
        except ValueError:
            if not rows and lineno == 1:
                continue  # header
            raise ParseError(lineno) from None
        if not hi > lo:
            raise ParseError(lineno, "y_hi must exceed y_lo")
        if rows and lo < rows[-1][1]:
            raise ParseError(lineno, "rows must be sorted and non-overlapping")
        rows.append((lo, hi, val))
    bp, vals = [], []
    for lo, hi, val in rows:
        if bp and bp[-1] == lo:
            vals.append(val)
        else:
            if bp:
                vals.append(0.0)
            bp.append(lo)
            vals.append(val)
        bp.append(hi)
    return bp, vals


def read_density_tsv(text) -> PiecewiseDensity:
    """Parse ``y_lo<TAB>y_hi<TAB>value`` rows; gaps between rows are zero."""
    bp, vals = _read_rows(text)
    return PiecewiseDensity(bp, vals)


def read_profile_tsv(text, kind="both", c=0.0) -> CrossingProfile:
    bp, vals = _read_rows(text)
    return CrossingProfile(bp, vals, kind=CrossingKind.parse(kind), c=float(c))

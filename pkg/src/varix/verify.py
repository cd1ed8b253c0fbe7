"""Randomized self-check of the exact identities on step paths.

Path ``i`` of a run with seed ``s`` is drawn from ``numpy.random.default_rng([s, i])``:
its length is ``floor(exp(U))`` with ``U ~ Uniform(log 2, log 401)`` (a
log-uniform mix of short and long paths, clipped to 2..400), and its values
are iid ``Uniform(0, 1)``.  Any failure is replayable from ``(s, i)`` alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .crossings import CrossingKind, crossing_profile, profile_integral
from .paths import from_samples, uniform_distance
from .variation import (
    brute_force_variations,
    classical_variations,
    optimal_approximation,
    truncated_variations,
)

DEFAULT_CS = (0.01, 0.05, 0.25, 0.5, 1.0)
IDENTITY_TOL = 1e-9
DISTANCE_TOL = 1e-12
CHAIN_ORACLE_MAX_LEN = 64
EXHAUSTIVE_MAX_LEN = 12
MIN_LEN, MAX_LEN = 2, 400


def random_path(seed, index, max_len=MAX_LEN):
    rng = np.random.default_rng([seed, index])
    n = int(math.exp(rng.uniform(math.log(MIN_LEN), math.log(max_len + 1))))
    n = min(max(n, MIN_LEN), max_len)
    return from_samples(rng.uniform(size=n))


def random_paths(n_paths, seed, max_len=MAX_LEN):
    return [random_path(seed, i, max_len) for i in range(n_paths)]


def _rel(a, b):
    return abs(a - b) / (1.0 + abs(b))


@dataclass
class VerifyReport:
    n_paths: int
    seed: int
    cs: tuple
    residuals: dict = field(default_factory=dict)
    distance_excess: float = 0.0
    failures: list = field(default_factory=list)

    def note(self, name, value):
        self.residuals[name] = max(self.residuals.get(name, 0.0), value)

    @property
    def max_residual(self):
        return max(self.residuals.values(), default=0.0)

    @property
    def ok(self):
        return (self.max_residual <= IDENTITY_TOL and self.distance_excess <= DISTANCE_TOL
                and not self.failures)

    def summary(self):
        lines = [f"paths: {self.n_paths}  seed: {self.seed}  c: {','.join(repr(c) for c in self.cs)}"]
        for name in sorted(self.residuals):
            lines.append(f"{name} max residual: {self.residuals[name]:.3e}")
        lines.append(f"approx distance excess over c/2: {self.distance_excess:.3e}")
        for msg in self.failures[:20]:
            lines.append(f"FAIL {msg}")
        verdict = "ok" if self.ok else "FAILED"
        lines.append(f"max identity residual {self.max_residual:.3e} <= {IDENTITY_TOL:.0e}: {verdict}")
        return "\n".join(lines) + "\n"


def check_path(path, c, report, tag=""):
    """Run every identity for one path and level, recording residuals."""
    tv = truncated_variations(path, c)
    report.note("jordan", _rel(tv.ttv, tv.utv + tv.dtv))
    for kind, value in ((CrossingKind.UP, tv.utv), (CrossingKind.DOWN, tv.dtv),
                        (CrossingKind.BOTH, tv.ttv)):
        integral = profile_integral(crossing_profile(path, c, kind))
        r = _rel(integral, value)
        report.note(f"theorem1_{kind.value}", r)
        if r > IDENTITY_TOL:
            report.failures.append(f"{tag} c={c!r} theorem1 {kind.value}: {integral!r} vs {value!r}")
    u, d = _kernels.sweep_variations(np.ascontiguousarray(path.values), c)
    report.note("kernel", max(_rel(u, tv.utv), _rel(d, tv.dtv)))
    approx = optimal_approximation(path, c)
    report.distance_excess = max(report.distance_excess, uniform_distance(path, approx) - c / 2)
    cv = classical_variations(approx)
    report.note("approx", max(_rel(cv.ttv, tv.ttv), _rel(cv.utv, tv.utv), _rel(cv.dtv, tv.dtv)))
    if len(path) <= CHAIN_ORACLE_MAX_LEN:
        bf = brute_force_variations(path, c, "chain")
        report.note("oracle_chain", max(_rel(bf.ttv, tv.ttv), _rel(bf.utv, tv.utv), _rel(bf.dtv, tv.dtv)))
    if len(path) <= EXHAUSTIVE_MAX_LEN:
        bf = brute_force_variations(path, c, "exhaustive")
        report.note("oracle_exhaustive", max(_rel(bf.ttv, tv.ttv), _rel(bf.utv, tv.utv), _rel(bf.dtv, tv.dtv)))
    return tv


def run_suite(n_paths=1000, seed=0, cs=DEFAULT_CS) -> VerifyReport:
    report = VerifyReport(n_paths, seed, tuple(float(c) for c in cs))
    for i in range(n_paths):
        path = random_path(seed, i)
        for c in report.cs:
            check_path(path, c, report, tag=f"path {i}")
    return report

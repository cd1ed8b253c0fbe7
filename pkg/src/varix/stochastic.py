"""Killed Brownian motion: closed forms and Monte Carlo estimators.

``W_t = B_t + mu t`` is observed on ``[0, tau]`` with ``tau ~ Exp(v)``
independent of ``B``.  Exponential killing turns time-Laplace transforms into
plain expectations, which gives closed forms for the expected upward
truncated variation and for the law of the number of segment upcrossings.

Random numbers
--------------
Path ``i`` of an experiment with seed ``s`` draws from its own Philox-4x64
stream keyed by ``(s, i)``: first ``tau`` by inversion of the exponential,
then the Gaussian increments with NumPy's ziggurat ``standard_normal``.
Paths are therefore independent of evaluation order and thread count.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import _kernels
from .exceptions import DomainError, ParseError
from .paths import DiscretePath, from_samples

__all__ = [
    "KilledBMConfig",
    "MCEstimate",
    "UpcrossingLaw",
    "closed_form_eutv",
    "mc_crossing_tail",
    "mc_expected_utv",
    "mc_expected_utv_multi",
    "read_config",
    "simulate_killed_bm",
    "upcrossing_law",
]

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class KilledBMConfig:
    mu: float = 0.0
    v: float = 1.0
    c: float = 0.5
    dt: float = 1e-4
    n_paths: int = 10_000
    seed: int = 0
    y: float = 0.0
    n_max: int = 5

    def __post_init__(self):
        for name in ("mu", "v", "c", "dt", "y"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, val)
        if self.v <= 0:
            raise DomainError(f"killing rate v must be > 0, got {self.v!r}")
        if self.c <= 0:
            raise DomainError(f"truncation c must be > 0, got {self.c!r}")
        if self.dt <= 0:
            raise DomainError(f"time step dt must be > 0, got {self.dt!r}")
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise DomainError(f"n_paths must be a positive integer, got {self.n_paths!r}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise DomainError(f"n_max must be a positive integer, got {self.n_max!r}")
        object.__setattr__(self, "n_paths", int(self.n_paths))
        object.__setattr__(self, "n_max", int(self.n_max))
        object.__setattr__(self, "seed", int(self.seed) & _U64)

    def replace(self, **changes):
        return KilledBMConfig(**{**asdict(self), **changes})


_CONFIG_TYPES = {"mu": float, "v": float, "c": float, "dt": float,
                 "n_paths": int, "seed": int, "y": float, "n_max": int}


def read_config(text) -> KilledBMConfig:
    """Parse a flat ``key = value`` (or ``key: value``) experiment file."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for sep in ("=", ":"):
            if sep in line:
                key, val = (s.strip() for s in line.split(sep, 1))
                break
        else:
            raise ParseError(lineno, "expected key = value")
        key = key.replace("-", "_")
        if key not in _CONFIG_TYPES:
            raise ParseError(lineno, f"unknown key {key!r}")
        try:
            conv = _CONFIG_TYPES[key]
            values[key] = conv(float(val)) if conv is int and "e" in val.lower() else conv(val)
        except ValueError:
            raise ParseError(lineno, f"bad value for {key}") from None
    return KilledBMConfig(**values)


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    n: int
    target: Optional[float] = None

    @property
    def z_score(self):
        if self.target is None:
            return None
        if self.std_error == 0:
            return 0.0 if self.mean == self.target else math.copysign(math.inf, self.mean - self.target)
        return (self.mean - self.target) / self.std_error

    def as_record(self):
        return {"mean": self.mean, "std_error": self.std_error, "n": self.n,
                "target": self.target, "z_score": self.z_score}


def _estimate(samples, target=None):
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    mean = float(np.mean(samples))
    se = float(np.std(samples, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return MCEstimate(mean, se, n, target)


def _check_rate_and_c(v, c):
    if not v > 0:
        raise DomainError(f"killing rate v must be > 0, got {v!r}")
    if not c > 0:
        raise DomainError(f"truncation c must be > 0, got {c!r}")


def closed_form_eutv(mu, v, c) -> float:
    """Exact ``E UTV^c(W, [0, tau])`` for drift ``mu`` and killing rate ``v``.

    ``exp(mu c) s / (2 v sinh(c s))`` with ``s = sqrt(mu^2 + 2 v)``.
    """
    _check_rate_and_c(v, c)
    s = math.sqrt(mu * mu + 2.0 * v)
    return math.exp(mu * c) * s / (2.0 * v * math.sinh(c * s))


class UpcrossingLaw(NamedTuple):
    p_once: float
    ratio: float
    mean: float


def upcrossing_law(mu, v, c, y) -> UpcrossingLaw:
    """Law of the number ``u`` of upcrossings of ``[y, y + c]`` by killed ``W``.

    ``P(u >= n) = p_once * ratio**(n - 1)``, and ``mean = E u``.
    """
    _check_rate_and_c(v, c)
    s = math.sqrt(mu * mu + 2.0 * v)
    if y >= 0:
        p_once = math.exp(mu * (y + c) - (y + c) * s)
    else:
        p_once = math.exp(mu * (y + c) + (y - c) * s)
    ratio = math.exp(-2.0 * c * s)
    return UpcrossingLaw(p_once, ratio, p_once / -math.expm1(-2.0 * c * s))


def _rng(seed, index):
    key = np.array([seed & _U64, index & _U64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _simulate(config, index):
    rng = _rng(config.seed, index)
    tau = rng.exponential(1.0 / config.v)
    n = int(math.floor(tau / config.dt))
    w = np.empty(n + 1)
    w[0] = 0.0
    if n:
        steps = rng.standard_normal(n)
        steps *= math.sqrt(config.dt)
        steps += config.mu * config.dt
        np.cumsum(steps, out=w[1:])
    return w


def simulate_killed_bm(config: KilledBMConfig, path_index: int) -> DiscretePath:
    """Grid samples ``W_{k dt}``, ``k = 0..floor(tau/dt)``, of one killed path."""
    if not 0 <= path_index < config.n_paths:
        raise DomainError(f"path_index must lie in [0, {config.n_paths}), got {path_index}")
    w = _simulate(config, path_index)
    return from_samples(w, config.dt * np.arange(w.size))


def _threads():
    env = os.environ.get("VARIX_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def map_paths(func, config, threads=None):
    """Apply ``func(values)`` to every path; results stacked in index order."""
    threads = threads or _threads()
    n = config.n_paths

    def work(bounds):
        lo, hi = bounds
        return [func(_simulate(config, i)) for i in range(lo, hi)]

    if threads == 1 or n < 2:
        rows = work((0, n))
    else:
        step = max(1, -(-n // (4 * threads)))
        chunks = [(lo, min(n, lo + step)) for lo in range(0, n, step)]
        with ThreadPoolExecutor(threads) as pool:
            rows = [r for part in pool.map(work, chunks) for r in part]
    return np.asarray(rows)


def mc_expected_utv_multi(config: KilledBMConfig, cs, threads=None):
    """:func:`mc_expected_utv` for several truncation levels on one ensemble."""
    cs = [float(c) for c in cs]
    for c in cs:
        _check_rate_and_c(config.v, c)

    def per_path(w):
        return [_kernels.sweep_variations(w, c)[0] for c in cs]

    utv = map_paths(per_path, config, threads).reshape(config.n_paths, len(cs))
    return [_estimate(utv[:, j], closed_form_eutv(config.mu, config.v, c))
            for j, c in enumerate(cs)]


def mc_expected_utv(config: KilledBMConfig, threads=None) -> MCEstimate:
    """Monte Carlo mean of ``UTV^c`` over simulated killed paths.

    ``target`` is the closed form; expect a small low bias from observing the
    path on a grid.
    """
    return mc_expected_utv_multi(config, [config.c], threads)[0]


def mc_upcrossing_counts(config: KilledBMConfig, y, threads=None):
    """Per-path number of upcrossings of ``[y, y + c]``."""
    y = float(y)

    def per_path(w):
        return _kernels.count_one(w, config.c, y, _kernels.UP)

    return map_paths(per_path, config, threads).astype(np.int64)


def mc_crossing_tail(config: KilledBMConfig, y=None, n_max=None, threads=None):
    """Empirical ``P(u >= n)`` for ``n = 1..n_max``."""
    y = config.y if y is None else float(y)
    n_max = config.n_max if n_max is None else int(n_max)
    if n_max < 2:
        raise DomainError(f"n_max must be >= 2, got {n_max}")
    counts = mc_upcrossing_counts(config, y, threads)
    return np.array([np.count_nonzero(counts >= k) / counts.size for k in range(1, n_max + 1)])

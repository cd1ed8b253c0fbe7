import itertools

import numpy as np
import pytest

from varix import from_samples

WORKED = [0.0, 1.0, 0.2, 1.5]


@pytest.fixture
def worked():
    return from_samples(WORKED)


def subsequence_sup(values, c):
    """Plain-loop supremum over all index subsequences; independent oracle."""
    best = [0.0, 0.0, 0.0]
    n = len(values)
    for r in range(2, n + 1):
        for idx in itertools.combinations(range(n), r):
            sums = [0.0, 0.0, 0.0]
            for a, b in zip(idx, idx[1:]):
                d = values[b] - values[a]
                sums[0] += max(abs(d) - c, 0.0)
                sums[1] += max(d - c, 0.0)
                sums[2] += max(-d - c, 0.0)
            best = [max(x, y) for x, y in zip(best, sums)]
    return tuple(best)


def random_values(rng, low=2, high=60):
    return rng.uniform(size=int(rng.integers(low, high + 1)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

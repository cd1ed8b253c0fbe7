"""scikit-learn compatible wrappers.

Each row of ``X`` is one path (samples in time order).  The transformers are
stateless apart from the bookkeeping ``fit`` records, so they drop into a
``Pipeline`` or ``FeatureUnion`` next to other feature extractors.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .crossings import CrossingKind, crossing_profile, profile_integral
from .paths import check_truncation, from_samples
from .variation import optimal_approximation, truncated_variations

_COMPONENTS = ("ttv", "utv", "dtv")


def check_paths(X):
    """Validate a 2-D array of finite paths, one per row."""
    X = check_array(X, dtype=np.float64, ensure_all_finite=True, ensure_min_features=1)
    return X


class _PathTransformer(TransformerMixin, BaseEstimator):
    def fit(self, X, y=None):
        check_truncation(self.c, allow_zero=self._allow_zero)
        X = check_paths(X)
        self.n_features_in_ = X.shape[1]
        return self

    def _validated(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_paths(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} samples per path, expected {self.n_features_in_}")
        return X


class TruncatedVariationTransformer(_PathTransformer):
    """Map each path to its truncated variations at level ``c``.

    Parameters
    ----------
    c : float, default=0.5
        Truncation level; 0 gives the classical variations.
    components : tuple of {"ttv", "utv", "dtv"}
        Output columns, in order.
    """

    _allow_zero = True

    def __init__(self, c=0.5, components=_COMPONENTS):
        self.c = c
        self.components = components

    def fit(self, X, y=None):
        bad = [name for name in self.components if name not in _COMPONENTS]
        if bad or not self.components:
            raise ValueError(f"components must be drawn from {_COMPONENTS}, got {self.components!r}")
        return super().fit(X, y)

    def transform(self, X):
        X = self._validated(X)
        out = np.empty((X.shape[0], len(self.components)))
        for i, row in enumerate(X):
            tv = truncated_variations(from_samples(row), self.c)
            out[i] = [getattr(tv, name) for name in self.components]
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array([f"{name}_c{self.c:g}" for name in self.components], dtype=object)


class CrossingIntegralTransformer(_PathTransformer):
    """Integrated segment-crossing counts, one column per truncation level.

    Equal to the matching truncated variation; useful as a cross-check
    feature or with ``kind="up"``/``"down"`` for one-sided versions.
    """

    _allow_zero = True

    def __init__(self, cs=(0.5,), kind="both"):
        self.cs = cs
        self.kind = kind

    def fit(self, X, y=None):
        CrossingKind.parse(self.kind)
        for c in self.cs:
            check_truncation(c)
        X = check_paths(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        X = self._validated(X)
        kind = CrossingKind.parse(self.kind)
        out = np.empty((X.shape[0], len(self.cs)))
        for i, row in enumerate(X):
            path = from_samples(row)
            out[i] = [profile_integral(crossing_profile(path, c, kind)) for c in self.cs]
        return out

    def get_feature_names_out(self, input_features=None):
        kind = CrossingKind.parse(self.kind).value
        return np.array([f"crossings_{kind}_c{c:g}" for c in self.cs], dtype=object)


class MinimalVariationSmoother(_PathTransformer):
    """Replace each path by its minimal-total-variation ``c/2``-approximation."""

    _allow_zero = False

    def __init__(self, c=0.5):
        self.c = c

    def transform(self, X):
        X = self._validated(X)
        return np.vstack([optimal_approximation(from_samples(row), self.c).values for row in X])

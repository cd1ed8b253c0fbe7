import numpy as np
import pytest
from hypothesis import given, strategies as st

from varix import (
    EmptyPath,
    LengthMismatch,
    NonFiniteValue,
    NonMonotoneTimes,
    StepFunction,
    from_samples,
    oscillation,
    sorted_values,
    uniform_distance,
)
from varix.exceptions import DomainError
from varix.paths import check_truncation

finite = st.floats(-1e6, 1e6, allow_nan=False)
value_lists = st.lists(finite, min_size=1, max_size=50)


def test_from_samples_copies_values():
    src = [0, 1, 0.2, 1.5]
    p = from_samples(src)
    assert len(p) == 4
    assert p.tolist() == src
    assert p.times is None
    with pytest.raises(ValueError):
        p.values[0] = 3.0


def test_from_samples_rejects_empty():
    with pytest.raises(EmptyPath):
        from_samples([])


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_from_samples_rejects_non_finite(bad):
    with pytest.raises(NonFiniteValue) as info:
        from_samples([0.0, 1.0, bad])
    assert info.value.index == 2


def test_from_samples_rejects_repeated_time():
    with pytest.raises(NonMonotoneTimes) as info:
        from_samples([0, 1], times=[1, 1])
    assert info.value.index == 1


def test_from_samples_times_length():
    with pytest.raises(LengthMismatch):
        from_samples([0, 1, 2], times=[0, 1])


@pytest.mark.parametrize("values, expected", [
    ([0, 1, 0.2, 1.5], [0, 0.2, 1, 1.5]),
    ([5], [5]),
    ([2, 2, 1], [1, 2, 2]),
])
def test_sorted_values(values, expected):
    assert sorted_values(values).tolist() == expected


@pytest.mark.parametrize("values, expected", [
    ([0, 1, 0.2, 1.5], 1.5),
    ([3, 3, 3], 0.0),
    ([0, 0.3, 0.1], 0.3),
])
def test_oscillation(values, expected):
    assert oscillation(values) == expected


def test_uniform_distance_worked():
    assert uniform_distance([0, 1, 0.2, 1.5], [0.25, 0.75, 0.45, 1.25]) == pytest.approx(0.25, abs=1e-15)
    assert uniform_distance([0, 1, 0.2], [0, 1, 0.2]) == 0.0
    with pytest.raises(LengthMismatch):
        uniform_distance([0, 1, 2], [0, 1, 2, 3])


@given(value_lists)
def test_sorted_values_is_permutation(values):
    out = sorted_values(values)
    assert sorted(values) == out.tolist()
    assert np.all(np.diff(out) >= 0)


@given(value_lists)
def test_oscillation_bounds_every_increment(values):
    osc = oscillation(values)
    v = np.array(values)
    assert osc >= 0
    assert np.all(np.abs(v[:, None] - v[None, :]) <= osc)


@given(value_lists, value_lists)
def test_uniform_distance_symmetric(a, b):
    n = min(len(a), len(b))
    a, b = a[:n], b[:n]
    d = uniform_distance(a, b)
    assert d == uniform_distance(b, a)
    assert (d == 0) == (a == b)


def test_check_truncation():
    assert check_truncation(0) == 0.0
    with pytest.raises(DomainError):
        check_truncation(0, allow_zero=False)
    with pytest.raises(DomainError):
        check_truncation(-0.1)
    with pytest.raises(DomainError):
        check_truncation(float("nan"))


class TestStepFunction:
    def test_round_trip(self):
        seq = [0.0, 1.0, 0.2, 1.5, -0.3]
        sf = StepFunction.from_sequence(seq, knots=[0.0, 1.0, 2.5])
        path = sf.to_path()
        assert path.tolist() == seq
        assert np.all(np.diff(path.times) > 0)
        assert sf.anchors.tolist() == [0.0, 0.0, 1.0, 1.0, 2.5]

    def test_evaluation(self):
        sf = StepFunction([0.0, 1.0, 2.0], [0.0, 0.2, -0.3], [1.0, 1.5])
        assert sf(0.0) == 0.0
        assert sf(0.5) == 1.0
        assert sf(1.0) == 0.2
        assert sf(1.7) == 1.5
        assert sf(2.0) == -0.3
        with pytest.raises(DomainError):
            sf(2.5)

    def test_single_point(self):
        sf = StepFunction([3.0], [7.0], [])
        assert sf.to_path().tolist() == [7.0]
        assert sf(3.0) == 7.0

    def test_validation(self):
        with pytest.raises(NonMonotoneTimes):
            StepFunction([0.0, 0.0], [1.0, 2.0], [3.0])
        with pytest.raises(LengthMismatch):
            StepFunction([0.0, 1.0], [1.0, 2.0], [])
        with pytest.raises(LengthMismatch):
            StepFunction.from_sequence([0.0, 1.0], knots=[0.0, 1.0])

    @given(st.lists(finite, min_size=1, max_size=20).filter(lambda v: len(v) % 2 == 1))
    def test_round_trip_property(self, seq):
        knots = np.arange((len(seq) + 1) // 2, dtype=float)
        assert StepFunction.from_sequence(seq, knots).to_path().tolist() == seq


def test_negation_and_shift():
    p = from_samples([0, 1, 0.5], times=[0, 1, 2])
    assert (-p).tolist() == [0, -1, -0.5]
    assert (p + 2).tolist() == [2, 3, 2.5]
    assert (p + 2).times is p.times
    assert p == from_samples([0, 1, 0.5], times=[0, 1, 2])
    assert p != from_samples([0, 1, 0.5])

import math

import numpy as np
import pytest
from scipy import integrate

from varix import (
    DomainError,
    KilledBMConfig,
    closed_form_eutv,
    count_crossings,
    crossing_profile,
    mc_crossing_tail,
    mc_expected_utv,
    profile_integral,
    simulate_killed_bm,
    truncated_variations,
    upcrossing_law,
)
from varix.exceptions import ParseError
from varix.stochastic import _rng, mc_expected_utv_multi, mc_upcrossing_counts, read_config

FAST = dict(dt=1e-3, n_paths=200, seed=11)


@pytest.mark.parametrize("mu, v, c, expected", [
    (0.0, 1.0, 1.0, 0.36541724),   # sqrt(2) / (2 sinh sqrt(2))
    (0.0, 0.5, 0.5, 1.91903475),   # 1 / sinh(0.5)
    (0.0, 1.0, 0.5, 0.92128398),   # sqrt(2) / (2 sinh(0.5 sqrt(2)))
])
def test_closed_form_values(mu, v, c, expected):
    assert closed_form_eutv(mu, v, c) == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize("mu", [-0.5, 0.0, 0.5, 1.3])
@pytest.mark.parametrize("v, c", [(0.5, 0.25), (1.0, 0.5), (2.0, 1.0)])
def test_closed_form_is_integral_of_crossing_means(mu, v, c):
    def mean(y):
        return upcrossing_law(mu, v, c, y).mean

    neg, _ = integrate.quad(mean, -np.inf, 0)
    pos, _ = integrate.quad(mean, 0, np.inf)
    assert neg + pos == pytest.approx(closed_form_eutv(mu, v, c), rel=1e-8)


@pytest.mark.parametrize("mu, v, c", [(0.5, 1.0, 0.5), (1.2, 0.3, 2.0), (-0.7, 2.0, 0.1)])
def test_closed_form_drift_symmetry(mu, v, c):
    ratio = closed_form_eutv(mu, v, c) / closed_form_eutv(-mu, v, c)
    assert ratio == pytest.approx(math.exp(2 * mu * c), rel=1e-12)


@pytest.mark.parametrize("v", [0.5, 1.0, 3.0])
def test_closed_form_small_c_blow_up(v):
    c = 1e-4
    assert closed_form_eutv(0.3, v, c) * c == pytest.approx(1 / (2 * v), rel=0.01)


@pytest.mark.parametrize("v, c", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -0.5)])
def test_domain_errors(v, c):
    with pytest.raises(DomainError):
        closed_form_eutv(0.0, v, c)
    with pytest.raises(DomainError):
        upcrossing_law(0.0, v, c, 0.0)


class TestUpcrossingLaw:
    def test_positive_level(self):
        law = upcrossing_law(0.0, 0.5, 0.5, 0.5)
        assert law.p_once == pytest.approx(math.exp(-1), abs=1e-12)
        assert law.ratio == pytest.approx(math.exp(-1), abs=1e-12)
        assert law.mean == pytest.approx(0.58198, abs=5e-6)

    def test_negative_level(self):
        assert upcrossing_law(0.0, 0.5, 0.5, -1.0).p_once == pytest.approx(0.22313, abs=5e-6)

    @pytest.mark.parametrize("mu", [-0.8, 0.0, 0.4])
    def test_branches_meet_at_zero(self, mu):
        v, c = 0.7, 0.3
        s = math.sqrt(mu * mu + 2 * v)
        at_zero = math.exp(mu * c - c * s)
        assert upcrossing_law(mu, v, c, 0.0).p_once == pytest.approx(at_zero, rel=1e-14)
        assert upcrossing_law(mu, v, c, -1e-12).p_once == pytest.approx(at_zero, rel=1e-9)

    @pytest.mark.parametrize("mu, y", [(0.0, 0.5), (0.6, -0.4), (-1.0, 2.0)])
    def test_mean_is_geometric_sum(self, mu, y):
        law = upcrossing_law(mu, 1.0, 0.4, y)
        series = sum(law.p_once * law.ratio ** (n - 1) for n in range(1, 400))
        assert law.mean == pytest.approx(series, rel=1e-12)

    def test_ranges(self):
        for y in (-2.0, -0.1, 0.0, 1.0):
            law = upcrossing_law(0.2, 0.8, 0.3, y)
            assert 0 < law.p_once <= 1
            assert 0 < law.ratio < 1


class TestConfig:
    def test_validation(self):
        for bad in (dict(v=0), dict(c=0), dict(dt=-1), dict(n_paths=0), dict(mu=float("nan"))):
            with pytest.raises(DomainError):
                KilledBMConfig(**bad)

    def test_read(self):
        cfg = read_config("# experiment\nmu = 0.5\nv: 1\nc=0.25\ndt = 1e-4\nn_paths = 1e4\nseed = 7\ny = -0.5\nn-max = 4\n")
        assert cfg == KilledBMConfig(mu=0.5, v=1, c=0.25, dt=1e-4, n_paths=10000, seed=7, y=-0.5, n_max=4)

    @pytest.mark.parametrize("text", ["mu 0.5\n", "colour = red\n", "v = fast\n"])
    def test_read_errors(self, text):
        with pytest.raises(ParseError):
            read_config(text)


class TestSimulation:
    cfg = KilledBMConfig(mu=0.3, v=1.0, c=0.5, **FAST)

    def test_starts_at_zero_and_is_deterministic(self):
        a = simulate_killed_bm(self.cfg, 5)
        b = simulate_killed_bm(self.cfg, 5)
        assert a.values[0] == 0.0
        assert a == b
        assert a != simulate_killed_bm(self.cfg, 6)

    def test_length_matches_killing_time(self):
        for i in range(20):
            tau = _rng(self.cfg.seed, i).exponential(1 / self.cfg.v)
            path = simulate_killed_bm(self.cfg, i)
            assert len(path) == math.floor(tau / self.cfg.dt) + 1
            assert path.times[-1] == pytest.approx((len(path) - 1) * self.cfg.dt)

    def test_increment_moments(self):
        cfg = self.cfg.replace(v=0.01, dt=1e-2)
        steps = np.concatenate([np.diff(simulate_killed_bm(cfg, i).values) for i in range(30)])
        assert steps.size > 5000
        se = math.sqrt(cfg.dt / steps.size)
        assert abs(steps.mean() - cfg.mu * cfg.dt) < 5 * se
        assert steps.var() == pytest.approx(cfg.dt, rel=0.1)

    def test_index_range(self):
        with pytest.raises(DomainError):
            simulate_killed_bm(self.cfg, self.cfg.n_paths)


class TestEstimators:
    def test_huge_c_gives_zero(self):
        est = mc_expected_utv(KilledBMConfig(mu=0, v=1, c=50, **FAST))
        assert est.mean == 0.0
        assert est.std_error == 0.0

    def test_std_error_shrinks_with_n(self):
        base = KilledBMConfig(mu=0, v=2.0, c=0.5, dt=1e-3, n_paths=1000, seed=3)
        small = mc_expected_utv(base)
        large = mc_expected_utv(base.replace(n_paths=2000))
        assert large.std_error / small.std_error == pytest.approx(1 / math.sqrt(2), rel=0.15)
        assert large.n == 2000 and large.target == closed_form_eutv(0, 2.0, 0.5)

    def test_thread_count_does_not_matter(self):
        cfg = KilledBMConfig(mu=0.2, v=1.0, c=0.3, **FAST)
        a = mc_expected_utv(cfg, threads=1)
        b = mc_expected_utv(cfg, threads=3)
        assert a == b

    def test_multi_matches_single(self):
        cfg = KilledBMConfig(mu=0.2, v=1.0, c=0.3, **FAST)
        multi = mc_expected_utv_multi(cfg, [0.3, 0.6])
        assert multi[0] == mc_expected_utv(cfg)
        assert multi[1] == mc_expected_utv(cfg.replace(c=0.6))

    def test_fubini_consistency(self):
        cfg = KilledBMConfig(mu=0.0, v=2.0, c=0.4, dt=1e-3, n_paths=40, seed=5)
        direct, via_profile = [], []
        for i in range(cfg.n_paths):
            path = simulate_killed_bm(cfg, i)
            direct.append(truncated_variations(path, cfg.c).utv)
            via_profile.append(profile_integral(crossing_profile(path, cfg.c, "up")))
        assert via_profile == pytest.approx(direct, rel=1e-9, abs=1e-12)
        assert np.mean(direct) == pytest.approx(mc_expected_utv(cfg).mean, rel=1e-12)

    def test_counts_match_reference_counter(self):
        cfg = KilledBMConfig(mu=0.0, v=2.0, c=0.2, dt=1e-3, n_paths=30, seed=9)
        counts = mc_upcrossing_counts(cfg, -0.1)
        ref = [count_crossings(simulate_killed_bm(cfg, i), cfg.c, -0.1, "up")[0]
               for i in range(cfg.n_paths)]
        assert counts.tolist() == ref

    def test_tail_monotone(self):
        cfg = KilledBMConfig(mu=0.0, v=0.5, c=0.2, **FAST)
        tail = mc_crossing_tail(cfg, y=0.0, n_max=6)
        assert len(tail) == 6
        assert np.all(np.diff(tail) <= 0)
        assert tail[0] > 0

    def test_unreachable_level(self):
        cfg = KilledBMConfig(mu=0.0, v=0.5, c=0.5, **FAST)
        assert mc_crossing_tail(cfg, y=100.0, n_max=3).tolist() == [0.0, 0.0, 0.0]

    def test_tail_needs_two_levels(self):
        with pytest.raises(DomainError):
            mc_crossing_tail(KilledBMConfig(**FAST), y=0.0, n_max=1)

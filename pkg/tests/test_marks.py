import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from senbd.marks import MarkDistribution
from senbd.rng import Xoshiro256

from oracles import log_series_pmf

OMEGAS = [0.01, 1.0, 10.0]


def _series(omega, power, upto=4000):
    d = MarkDistribution(omega)
    return math.fsum(m ** power * d.pmf(m) for m in range(1, upto))


@pytest.mark.parametrize("omega", OMEGAS)
def test_pmf_is_log_series(omega):
    d = MarkDistribution(omega)
    for m in range(1, 21):
        assert d.pmf(m) == pytest.approx(log_series_pmf(m, omega), rel=1e-12)


def test_pmf_examples():
    assert MarkDistribution(0.0).pmf(1) == 1.0
    assert MarkDistribution(0.0).pmf(2) == 0.0
    assert MarkDistribution(1.0).pmf(1) == pytest.approx(1 / (2 * math.log(2)), rel=1e-14)
    assert math.fsum(MarkDistribution(1.0).pmf(m) for m in range(1, 201)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        MarkDistribution(1.0).pmf(0)


@pytest.mark.parametrize("omega", [0.0] + OMEGAS)
def test_moments_match_series(omega):
    d = MarkDistribution(omega)
    assert d.mean() == pytest.approx(_series(omega, 1), rel=1e-11)
    assert d.second_moment() == pytest.approx(_series(omega, 2), rel=1e-11)


def test_moment_values():
    assert MarkDistribution(1.0).mean() == pytest.approx(1.442695040888963, rel=1e-14)
    assert MarkDistribution(10.0).mean() == pytest.approx(4.170323914242463, rel=1e-12)
    assert MarkDistribution(1.0).second_moment() == pytest.approx(2.885390081777927, rel=1e-14)
    assert MarkDistribution(10.0).second_moment() == pytest.approx(45.87356305666709, rel=1e-12)


@pytest.mark.parametrize("omega", OMEGAS)
def test_moment_ratio_identity(omega):
    d = MarkDistribution(omega)
    assert abs(d.second_moment() / d.mean() - (omega + 1)) <= 1e-12


@given(st.floats(min_value=1e-6, max_value=1e3))
def test_rate_factor_times_mean_is_one_over_q_complement(omega):
    # nu = c * lambda, and E[m] = omega / log(1 + omega) = 1 / c
    d = MarkDistribution(omega)
    assert d.rate_factor() * d.mean() == pytest.approx(1.0, rel=1e-13)


def test_unit_marks():
    rng = Xoshiro256(1)
    assert np.all(MarkDistribution(0.0).sample_many(1000, rng) == 1)


def test_empirical_mean_omega_one():
    x = MarkDistribution(1.0).sample_many(1_000_000, Xoshiro256(5))
    assert abs(x.mean() / 1.442695040888963 - 1) < 0.01


def test_empirical_pmf1_omega_ten():
    d = MarkDistribution(10.0)
    x = d.sample_many(1_000_000, Xoshiro256(6))
    assert d.pmf(1) == pytest.approx((10 / 11) / math.log(11), rel=1e-14)
    assert abs(np.mean(x == 1) / d.pmf(1) - 1) < 0.02


@pytest.mark.parametrize("omega", OMEGAS)
def test_chi_square(omega):
    d = MarkDistribution(omega)
    x = d.sample_many(100_000, Xoshiro256(17))
    obs = np.array([np.sum(x == m) for m in range(1, 5)] + [np.sum(x >= 5)], dtype=float)
    p = np.array([d.pmf(m) for m in range(1, 5)])
    p = np.append(p, 1 - p.sum())
    exp = p * x.size
    keep = exp > 5
    obs = np.append(obs[keep], obs[~keep].sum())
    exp = np.append(exp[keep], exp[~keep].sum())
    if exp[-1] == 0:
        obs, exp = obs[:-1], exp[:-1]
    if len(exp) < 2:
        assert np.all(x <= 2)
        return
    assert stats.chisquare(obs, exp).pvalue > 0.001


def test_invalid_omega():
    with pytest.raises(ValueError):
        MarkDistribution(-1.0)
    with pytest.raises(ValueError):
        MarkDistribution(float("inf"))

import math

import pytest
from hypothesis import given, strategies as st
from scipy import special, stats

from senbd.special import gammainc, gammaincc, inv_gamma_cdf, inv_gamma_quantile

shapes = st.floats(min_value=0.1, max_value=60.0)
xs = st.floats(min_value=0.0, max_value=200.0)


@given(shapes, xs)
def test_incomplete_gamma_matches_scipy(a, x):
    assert gammainc(a, x) == pytest.approx(special.gammainc(a, x), rel=1e-12, abs=1e-300)
    assert gammaincc(a, x) == pytest.approx(special.gammaincc(a, x), rel=1e-11, abs=1e-300)


@given(shapes, xs)
def test_p_plus_q_is_one(a, x):
    assert gammainc(a, x) + gammaincc(a, x) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("shape", [1.0, 2.0, 11.0])
@pytest.mark.parametrize("p", [0.005, 0.5, 0.995])
def test_quantile_round_trip(shape, p):
    tau = inv_gamma_quantile(shape, p)
    assert abs(inv_gamma_cdf(tau, shape) - p) <= 1e-9


@given(st.floats(min_value=0.5, max_value=30.0), st.floats(min_value=1e-6, max_value=1 - 1e-6))
def test_quantile_matches_scipy(shape, p):
    assert inv_gamma_quantile(shape, p) == pytest.approx(stats.invgamma.ppf(p, shape), rel=1e-8)


def test_shape_one_closed_form():
    # CDF is exp(-1/tau)
    assert inv_gamma_quantile(1.0, 0.5) == pytest.approx(1.0 / math.log(2.0), rel=1e-12)
    assert inv_gamma_quantile(1.0, math.exp(-1.0)) == pytest.approx(1.0, rel=1e-12)


def test_quantile_monotone_towards_zero():
    ps = [10.0 ** -k for k in range(1, 12)]
    taus = [inv_gamma_quantile(2.0, p) for p in ps]
    assert all(a > b > 0 for a, b in zip(taus, taus[1:]))


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_quantile_rejects_bad_probability(p):
    with pytest.raises(ValueError):
        inv_gamma_quantile(2.0, p)

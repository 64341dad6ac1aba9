import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from senbd.dt_process import (DtConfig, DtRunner, DtState, discrete_kernel_jump, dt_step,
                              sample_nbd, sample_nbd_many, simulate_dt)
from senbd.kernel import ExponentialMixture
from senbd.rng import Xoshiro256, derive_seed


def test_discrete_jump():
    assert discrete_kernel_jump(1.0, 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-15)
    assert discrete_kernel_jump(0.5, 2.0) == pytest.approx(0.19673467014368329, rel=1e-14)
    assert discrete_kernel_jump(1.0, 1e12) < 1e-11


def test_nbd_degenerate():
    rng = Xoshiro256(1)
    assert all(sample_nbd(2.0, 1.0, rng) == 0 for _ in range(100))


def test_nbd_moments():
    x = sample_nbd_many(2.0, 0.5, 1_000_000, Xoshiro256(2))
    assert abs(x.mean() / 2.0 - 1) < 0.01
    assert abs(x.var() / 4.0 - 1) < 0.02


@pytest.mark.parametrize("lam", [0.05, 1.0, 7.0])
def test_small_omega_is_poisson(lam):
    omega = 1e-4
    x = sample_nbd_many(lam / omega, 1 / (omega + 1), 400_000, Xoshiro256(3))
    assert abs(x.mean() / lam - 1) < 0.01 + 4 * math.sqrt(1 / (lam * x.size))
    assert abs(x.var() / lam - 1) < 0.01 + 4 * math.sqrt(2 / x.size)


def _cfg(**kw):
    base = dict(nu0=0.01, omega=1.0, kernel=ExponentialMixture.from_pairs([(0.9, 1.0)]),
                steps=1000, seed=5)
    base.update(kw)
    return DtConfig(**base)


def test_step_decays_on_zero_count():
    cfg = _cfg(nu0=1e-9)
    s = DtState(np.array([0.5]), 0, Xoshiro256(0))
    s2, x = dt_step(s, cfg)
    if x == 0:
        assert s2.zhat[0] == pytest.approx(0.5 * math.exp(-1))
    assert s2.t == 1


@given(st.integers(0, 2**32))
def test_zhat_nonnegative(seed):
    cfg = _cfg(seed=seed)
    s = DtState(np.zeros(1), 0, Xoshiro256(seed))
    for _ in range(30):
        s, x = dt_step(s, cfg)
        assert x >= 0 and np.all(s.zhat >= 0)


def test_runner_matches_stepwise():
    cfg = _cfg(steps=500, seed=9)
    t, x, lam, _ = simulate_dt(cfg)
    s = DtState(np.zeros(1), 0, Xoshiro256(9))
    for i in range(500):
        s, xi = dt_step(s, cfg)
        assert xi == x[i]
        assert s.lambda_hat(cfg.nu0) == pytest.approx(lam[i], rel=1e-12)


def test_stride_thins_rows():
    t, _, _, _ = simulate_dt(_cfg(steps=1000), stride=7)
    assert t.size == 1000 // 7
    assert np.all(t % 7 == 0)


@pytest.mark.parametrize("n", [0.5, 0.9])
def test_stationary_mean(n):
    kern = ExponentialMixture.from_pairs([(n, 1.0)])
    means = [DtRunner(DtConfig(0.2, 1.0, kern, 1_000_000, derive_seed(41, i)), stride=10**6)
             for i in range(3)]
    for r in means:
        list(r)
    assert abs(np.mean([r.mean_lambda for r in means]) / (0.2 / (1 - n)) - 1) < 0.05


def test_config_errors():
    with pytest.raises(ValueError, match="omega"):
        _cfg(omega=0.0)
    with pytest.raises(ValueError, match="steps"):
        _cfg(steps=0)
    assert DtConfig.from_dict(_cfg().to_dict()) == _cfg()

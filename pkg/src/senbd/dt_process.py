"""Discrete-time self-exciting negative-binomial process.

Each step draws X_{t+1} ~ NBD(lambda_t / omega, 1 / (omega + 1)) and updates

    zhat_k <- exp(-1/tau_k) zhat_k + n_k (1 - exp(-1/tau_k)) X_{t+1},
    lambda_{t+1} = nu0 + sum_k zhat_k.

The unconditional stationary mean of lambda is nu0 / (1 - n).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .kernel import ExponentialMixture, kernel_from_json
from .rng import Xoshiro256, gamma, poisson, state_from_seed


def discrete_kernel_jump(n_k, tau_k):
    """Jump coefficient n_k (1 - e^{-1/tau_k}) of the discrete recursion."""
    if not tau_k > 0:
        raise ValueError("tau_k must be > 0")
    return -n_k * math.expm1(-1.0 / tau_k)


@njit(cache=True)
def _nbd(s, alpha, scale):
    # gamma-Poisson mixture; scale = (1 - p) / p
    if scale == 0.0:
        return 0
    return poisson(s, gamma(s, alpha) * scale)


def sample_nbd(alpha, p, rng: Xoshiro256):
    """One NBD(alpha, p) draw: mean alpha (1-p)/p, variance alpha (1-p)/p^2."""
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    return int(_nbd(rng.state, float(alpha), (1.0 - p) / p))


@njit(cache=True)
def _nbd_many(s, alpha, scale, out):
    for i in range(out.shape[0]):
        out[i] = _nbd(s, alpha, scale)


def sample_nbd_many(alpha, p, size, rng: Xoshiro256):
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    out = np.empty(int(size), dtype=np.int64)
    _nbd_many(rng.state, float(alpha), (1.0 - p) / p, out)
    return out


@dataclass
class DtConfig:
    nu0: float
    omega: float
    kernel: ExponentialMixture
    steps: int
    seed: int

    def __post_init__(self):
        if not self.nu0 > 0:
            raise ValueError(f"nu0: must be > 0, got {self.nu0}")
        if not self.omega > 0:
            raise ValueError(f"omega: must be > 0 for the discrete process, got {self.omega}")
        if int(self.steps) < 1:
            raise ValueError(f"steps: must be a positive integer, got {self.steps}")
        self.steps = int(self.steps)

    def to_dict(self):
        return {"nu0": self.nu0, "omega": self.omega, "kernel": self.kernel.to_json(),
                "steps": self.steps, "seed": int(self.seed)}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["nu0"]), float(d["omega"]), kernel_from_json(d["kernel"]),
                   int(d["steps"]), int(d["seed"]))


@dataclass
class DtState:
    zhat: np.ndarray
    t: int = 0
    rng: Xoshiro256 = field(default_factory=Xoshiro256)

    def lambda_hat(self, nu0):
        return nu0 + float(np.sum(self.zhat))


def dt_step(state: DtState, config: DtConfig):
    """One step of the recursion; returns (new_state, X)."""
    lam = state.lambda_hat(config.nu0)
    x = int(_nbd(state.rng.state, lam / config.omega, config.omega))
    decay = np.exp(-1.0 / config.kernel.tau_array)
    jump = -config.kernel.n_array * np.expm1(-1.0 / config.kernel.tau_array)
    zhat = decay * state.zhat + jump * x
    return DtState(zhat, state.t + 1, state.rng), x


@njit(cache=True)
def _dt_chunk(zhat, s, nu0, omega, decay, jump, n_steps, stride, t0, out_t, out_x, out_l, acc):
    """Run n_steps; rows are kept when the (1-based) step index is a multiple of stride."""
    K = zhat.shape[0]
    n_out = 0
    lam = nu0
    for k in range(K):
        lam += zhat[k]
    for i in range(n_steps):
        x = _nbd(s, lam / omega, omega)
        lam = nu0
        for k in range(K):
            zhat[k] = decay[k] * zhat[k] + jump[k] * x
            lam += zhat[k]
        acc[0] += lam
        acc[1] += lam * lam
        t = t0 + i + 1
        if t % stride == 0:
            out_t[n_out] = t
            out_x[n_out] = x
            out_l[n_out] = lam
            n_out += 1
    return n_out


class DtRunner:
    """Chunked driver yielding (t, X, lambda_hat) arrays; keeps running moments."""

    def __init__(self, config: DtConfig, stride=1, chunk=1 << 18):
        self.config = config
        self.stride = int(stride)
        if self.stride < 1:
            raise ValueError("stride must be >= 1")
        self.chunk = int(chunk)
        self.zhat = np.zeros(config.kernel.K)
        self.rng_state = state_from_seed(config.seed)
        self.t = 0
        self.acc = np.zeros(2)
        tau = config.kernel.tau_array
        self._decay = np.exp(-1.0 / tau)
        self._jump = -config.kernel.n_array * np.expm1(-1.0 / tau)

    @property
    def mean_lambda(self):
        return self.acc[0] / self.t if self.t else float("nan")

    @property
    def var_lambda(self):
        m = self.mean_lambda
        return self.acc[1] / self.t - m * m if self.t else float("nan")

    def __iter__(self):
        return self

    def __next__(self):
        remaining = self.config.steps - self.t
        if remaining <= 0:
            raise StopIteration
        n = min(self.chunk, remaining)
        cap = n // self.stride + 1
        out_t = np.empty(cap, dtype=np.int64)
        out_x = np.empty(cap, dtype=np.int64)
        out_l = np.empty(cap)
        k = _dt_chunk(self.zhat, self.rng_state, float(self.config.nu0), float(self.config.omega),
                      self._decay, self._jump, n, self.stride, self.t,
                      out_t, out_x, out_l, self.acc)
        self.t += n
        return out_t[:k], out_x[:k], out_l[:k]


def simulate_dt(config: DtConfig, stride=1):
    """Run the whole horizon in memory; returns (t, X, lambda_hat, mean_lambda)."""
    runner = DtRunner(config, stride=stride)
    parts = list(runner)
    cols = [np.concatenate([p[i] for p in parts]) for i in range(3)]
    return cols[0], cols[1], cols[2], runner.mean_lambda

"""xoshiro256** generator seeded through splitmix64, usable from numba code.

The generator state is a ``uint64[4]`` array that jitted kernels mutate in
place, so a run can be suspended and resumed without losing its position in
the stream.
"""
import math

import numpy as np
from numba import njit

_U = np.uint64
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


@njit(cache=True)
def splitmix64(x):
    """Return (next_x, output) for one splitmix64 step."""
    x = x + _GOLDEN
    z = x
    z = (z ^ (z >> _U(30))) * _MIX1
    z = (z ^ (z >> _U(27))) * _MIX2
    return x, z ^ (z >> _U(31))


@njit(cache=True)
def _rotl(x, k):
    return (x << _U(k)) | (x >> _U(64 - k))


@njit(cache=True)
def seed_state(seed):
    s = np.empty(4, dtype=np.uint64)
    x = _U(seed)
    for i in range(4):
        x, s[i] = splitmix64(x)
    return s


@njit(cache=True)
def next_u64(s):
    result = _rotl(s[1] * _U(5), 7) * _U(9)
    t = s[1] << _U(17)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


@njit(cache=True)
def uniform(s):
    # strictly inside (0, 1): 52 random bits plus half an ulp
    return ((next_u64(s) >> _U(12)) + 0.5) * 2.0**-52


@njit(cache=True)
def exponential(s):
    return -math.log(uniform(s))


@njit(cache=True)
def normal(s):
    # Marsaglia polar method, one variate per call
    while True:
        u = 2.0 * uniform(s) - 1.0
        v = 2.0 * uniform(s) - 1.0
        r = u * u + v * v
        if 0.0 < r < 1.0:
            return u * math.sqrt(-2.0 * math.log(r) / r)


@njit(cache=True)
def gamma(s, shape):
    """Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 via the U**(1/shape) boost."""
    boost = 1.0
    if shape < 1.0:
        boost = uniform(s) ** (1.0 / shape)
        shape += 1.0
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        x = normal(s)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = uniform(s)
        if u < 1.0 - 0.0331 * x * x * x * x:
            return d * v * boost
        if math.log(u) < 0.5 * x * x + d * (1.0 - v + math.log(v)):
            return d * v * boost


@njit(cache=True)
def poisson(s, lam):
    """Poisson(lam): multiplication method below 10, Hoermann's PTRS above."""
    if lam <= 0.0:
        return 0
    if lam < 10.0:
        limit = math.exp(-lam)
        k = 0
        prod = uniform(s)
        while prod > limit:
            k += 1
            prod *= uniform(s)
        return k
    slam = math.sqrt(lam)
    loglam = math.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)
    while True:
        u = uniform(s) - 0.5
        v = uniform(s)
        us = 0.5 - abs(u)
        k = math.floor((2.0 * a / us + b) * u + lam + 0.43)
        if us >= 0.07 and v <= vr:
            return int(k)
        if k < 0 or (us < 0.013 and v > us):
            continue
        lhs = math.log(v) + math.log(invalpha) - math.log(a / (us * us) + b)
        if lhs <= -lam + k * loglam - math.lgamma(k + 1.0):
            return int(k)


def state_from_seed(seed):
    """Fresh generator state for any Python integer seed (reduced mod 2**64)."""
    return seed_state(np.uint64(int(seed) & _MASK64))


class Xoshiro256:
    """Python handle around a xoshiro256** state array."""

    def __init__(self, seed=0, state=None):
        if state is not None:
            self.state = np.array(state, dtype=np.uint64)
        else:
            self.state = state_from_seed(seed)

    def copy(self):
        return Xoshiro256(state=self.state.copy())

    def next_u64(self):
        return int(next_u64(self.state))

    def random(self):
        return uniform(self.state)

    def exponential(self):
        return exponential(self.state)

    def gamma(self, shape, scale=1.0):
        return gamma(self.state, float(shape)) * scale

    def poisson(self, lam):
        return poisson(self.state, float(lam))


def derive_seed(base_seed, *indices):
    """Mix a base seed with integer indices (cell, run, ...) via splitmix64.

    seed_0 = base; for each index i: seed <- splitmix64_output(seed ^ splitmix64_output(i)).
    """
    seed = int(base_seed) & _MASK64
    for idx in indices:
        seed = _splitmix_out(seed ^ _splitmix_out(int(idx) & _MASK64))
    return seed


def _splitmix_out(x):
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)

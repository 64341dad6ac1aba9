"""Logarithmic-series event sizes.

With q = omega / (omega + 1) the mark law is

    rho(m) = q**m / (m * log(1 + omega)),   m = 1, 2, ...

and omega = 0 is the degenerate unit-mark (pure Hawkes) case.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .rng import Xoshiro256, uniform


@njit(cache=True)
def sample_mark(s, q, p1):
    """Sequential-search inversion; ``p1`` is rho(1). q == 0 means unit marks."""
    if q == 0.0:
        return 1
    u = uniform(s)
    m = 1
    p = p1
    cdf = p
    while u > cdf:
        p *= q * m / (m + 1.0)
        m += 1
        nxt = cdf + p
        if nxt == cdf:
            # cdf saturated below u through rounding
            break
        cdf = nxt
    return m


@njit(cache=True)
def _sample_many(s, q, p1, out):
    for i in range(out.shape[0]):
        out[i] = sample_mark(s, q, p1)


@dataclass(frozen=True)
class MarkDistribution:
    omega: float = 0.0

    def __post_init__(self):
        if not (self.omega >= 0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be finite and >= 0, got {self.omega}")

    @property
    def q(self):
        return self.omega / (self.omega + 1.0)

    @property
    def log1p_omega(self):
        return math.log1p(self.omega)

    def rate_factor(self):
        """log(1 + omega) / omega: converts lambda into the event rate (1 at omega = 0)."""
        if self.omega == 0:
            return 1.0
        return self.log1p_omega / self.omega

    def pmf(self, m):
        m = int(m)
        if m < 1:
            raise ValueError(f"marks are positive integers, got {m}")
        if self.omega == 0:
            return 1.0 if m == 1 else 0.0
        return math.exp(m * math.log(self.q) - math.log(m) - math.log(self.log1p_omega))

    def mean(self):
        if self.omega == 0:
            return 1.0
        return self.omega / self.log1p_omega

    def second_moment(self):
        if self.omega == 0:
            return 1.0
        return self.omega * (self.omega + 1.0) / self.log1p_omega

    def _p1(self):
        return self.q / self.log1p_omega if self.omega > 0 else 1.0

    def sample(self, rng: Xoshiro256):
        return int(sample_mark(rng.state, self.q, self._p1()))

    def sample_many(self, size, rng: Xoshiro256):
        out = np.empty(int(size), dtype=np.int64)
        _sample_many(rng.state, self.q, self._p1(), out)
        return out

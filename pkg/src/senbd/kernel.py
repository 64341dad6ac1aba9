"""Exponential-mixture memory kernels.

A kernel is a finite sum of normalized exponentials,

    n h(t) = sum_k n_k / tau_k * exp(-t / tau_k),

whose weights ``n_k`` add up to the branching ratio. A power-law kernel is
approximated by placing the time constants at midpoint quantiles of an
inverse-gamma law.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import inv_gamma_quantile

__all__ = [
    "ExponentialMixture",
    "powerlaw_mixture",
    "inv_gamma_quantile",
    "parse_kernel",
    "kernel_from_json",
]


@dataclass(frozen=True)
class ExponentialMixture:
    n: tuple[float, ...]
    tau: tuple[float, ...]

    def __post_init__(self):
        n = tuple(float(v) for v in self.n)
        tau = tuple(float(v) for v in self.tau)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "tau", tau)
        if len(n) == 0:
            raise ValueError("kernel needs at least one term")
        if len(n) != len(tau):
            raise ValueError("n and tau must have the same length")
        for k, (nk, tk) in enumerate(zip(n, tau)):
            if not (nk > 0 and math.isfinite(nk)):
                raise ValueError(f"kernel term {k}: weight n must be finite and > 0, got {nk}")
            if not (tk > 0 and math.isfinite(tk)):
                raise ValueError(f"kernel term {k}: tau must be finite and > 0, got {tk}")

    @classmethod
    def from_pairs(cls, pairs):
        pairs = list(pairs)
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @property
    def K(self):
        return len(self.n)

    @property
    def n_array(self):
        return np.asarray(self.n, dtype=np.float64)

    @property
    def tau_array(self):
        return np.asarray(self.tau, dtype=np.float64)

    def pairs(self):
        return list(zip(self.n, self.tau))

    def branching_ratio(self):
        return math.fsum(self.n)

    def alpha(self):
        """First moment sum_k n_k tau_k."""
        return math.fsum(nk * tk for nk, tk in zip(self.n, self.tau))

    def mean_tau(self):
        """Weight-averaged time constant alpha / n."""
        return self.alpha() / self.branching_ratio()

    def is_stationary(self):
        return self.branching_ratio() < 1.0

    def evaluate(self, t):
        """Kernel value n h(t); accepts scalars or arrays of t >= 0."""
        t_arr = np.asarray(t, dtype=np.float64)
        if np.any(t_arr < 0):
            raise ValueError("kernel is only defined for t >= 0")
        out = np.zeros_like(t_arr)
        for nk, tk in zip(self.n, self.tau):
            out = out + (nk / tk) * np.exp(-t_arr / tk)
        return float(out) if out.ndim == 0 else out

    def jump(self, m=1):
        """Excess-intensity increments n_k m / tau_k caused by one event of size m."""
        return self.n_array * m / self.tau_array

    def scaled(self, n_total):
        """Same shape, weights rescaled so that they sum to ``n_total``."""
        f = n_total / self.branching_ratio()
        return ExponentialMixture(tuple(v * f for v in self.n), self.tau)

    def to_json(self):
        return [{"n": nk, "tau": tk} for nk, tk in zip(self.n, self.tau)]


def powerlaw_mixture(gamma, n_total, K):
    """K-term discretization of the power-law kernel gamma (1 + t)^-(gamma + 1).

    Time constants sit at the (i - 1/2)/K quantiles of InvGamma(gamma, 1) and
    share the branching ratio equally. ``gamma > 1`` keeps alpha finite.
    """
    if not gamma > 1:
        raise ValueError(f"gamma must exceed 1 (finite mean time constant), got {gamma}")
    K = int(K)
    if K < 1:
        raise ValueError("K must be >= 1")
    if not n_total > 0:
        raise ValueError("n_total must be > 0")
    taus = tuple(inv_gamma_quantile(gamma, (i - 0.5) / K) for i in range(1, K + 1))
    return ExponentialMixture((n_total / K,) * K, taus)


def parse_kernel(text):
    """Parse the command-line kernel grammar.

    ``"0.5:1,0.49:3"`` gives explicit ``n:tau`` pairs;
    ``"powerlaw:gamma=11,n=0.999,K=100"`` expands through :func:`powerlaw_mixture`.
    """
    text = text.strip()
    if text.startswith("powerlaw:"):
        fields = {}
        for item in text[len("powerlaw:"):].split(","):
            key, sep, val = item.partition("=")
            if not sep:
                raise ValueError(f"bad powerlaw field {item!r}; expected key=value")
            fields[key.strip()] = val.strip()
        missing = {"gamma", "n", "K"} - fields.keys()
        if missing:
            raise ValueError(f"powerlaw kernel missing {sorted(missing)}")
        return powerlaw_mixture(float(fields["gamma"]), float(fields["n"]), int(fields["K"]))
    pairs = []
    for item in text.split(","):
        n_str, sep, tau_str = item.partition(":")
        if not sep:
            raise ValueError(f"bad kernel term {item!r}; expected n:tau")
        pairs.append((float(n_str), float(tau_str)))
    return ExponentialMixture.from_pairs(pairs)


def kernel_from_json(obj):
    """Build a kernel from its config-file form (list of {n, tau} or a powerlaw dict)."""
    if isinstance(obj, dict):
        if obj.get("type") != "powerlaw":
            raise ValueError(f"unknown kernel type {obj.get('type')!r}")
        return powerlaw_mixture(float(obj["gamma"]), float(obj["n"]), int(obj["K"]))
    return ExponentialMixture.from_pairs((float(d["n"]), float(d["tau"])) for d in obj)

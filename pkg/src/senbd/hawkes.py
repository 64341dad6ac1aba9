"""Event-driven sampling of the marked Hawkes process.

The excess intensity is carried as K exponentially decaying components
z_k, so the process is Markov in (t, z). Between events

    lambda(t) = nu0 + sum_k z_k exp(-(t - t_prev) / tau_k)

and the event rate is nu(t) = c * lambda(t) with c = log(1 + omega) / omega.
The main sampler draws unit-exponential compensator increments and inverts
the closed-form compensator for the next event time; the thinning sampler
is an independent rejection-based route to the same law.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from numba import njit

from .kernel import ExponentialMixture, kernel_from_json
from .marks import MarkDistribution, sample_mark
from .rng import Xoshiro256, exponential, state_from_seed, uniform

DEFAULT_RTOL = 1e-10
DEFAULT_CHUNK = 1 << 18

# slots of the float64 run-state vector shared with the jitted kernels
_T, _J, _PEND_DT, _PEND_E, _MAX_RES, _DONE, _N_EVENTS = range(7)


class SolverError(RuntimeError):
    pass


@dataclass
class SimConfig:
    nu0: float
    omega: float
    kernel: ExponentialMixture
    t_max: float
    seed: int
    burn_in: float | None = None
    obs_dt: float = 1.0

    def __post_init__(self):
        if self.burn_in is None:
            self.burn_in = 0.01 * self.t_max
        self.validate()

    def validate(self):
        if not (self.nu0 > 0 and math.isfinite(self.nu0)):
            raise ValueError(f"nu0: must be finite and > 0, got {self.nu0}")
        if not (self.omega >= 0 and math.isfinite(self.omega)):
            raise ValueError(f"omega: must be finite and >= 0, got {self.omega}")
        if not (self.t_max > 0 and math.isfinite(self.t_max)):
            raise ValueError(f"t_max: must be finite and > 0, got {self.t_max}")
        if not 0 <= self.burn_in < self.t_max:
            raise ValueError(f"burn_in: must satisfy 0 <= burn_in < t_max, got {self.burn_in}")
        if not self.obs_dt > 0:
            raise ValueError(f"obs_dt: must be > 0, got {self.obs_dt}")
        if not isinstance(self.seed, (int, np.integer)):
            raise ValueError(f"seed: must be an integer, got {self.seed!r}")

    @property
    def marks(self):
        return MarkDistribution(self.omega)

    def to_dict(self):
        return {
            "nu0": self.nu0,
            "omega": self.omega,
            "kernel": self.kernel.to_json(),
            "t_max": self.t_max,
            "burn_in": self.burn_in,
            "obs_dt": self.obs_dt,
            "seed": int(self.seed),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            nu0=float(d["nu0"]),
            omega=float(d["omega"]),
            kernel=kernel_from_json(d["kernel"]),
            t_max=float(d["t_max"]),
            burn_in=None if d.get("burn_in") is None else float(d["burn_in"]),
            obs_dt=float(d.get("obs_dt", 1.0)),
            seed=int(d["seed"]),
        )


@dataclass
class SimState:
    t: float
    z: np.ndarray
    rng: Xoshiro256 = field(default_factory=Xoshiro256)

    @classmethod
    def empty(cls, K, seed=0):
        return cls(0.0, np.zeros(K), Xoshiro256(seed))

    def copy(self):
        return SimState(self.t, self.z.copy(), self.rng.copy())


@dataclass
class SimResult:
    config: SimConfig
    event_t: np.ndarray
    event_m: np.ndarray
    draws: np.ndarray
    obs_t: np.ndarray
    obs_lambda: np.ndarray
    max_residual: float

    @property
    def n_events(self):
        return self.event_t.shape[0]


# --- state operations -------------------------------------------------------

def intensity(state: SimState, nu0):
    return nu0 + float(np.sum(state.z))


def event_rate(state: SimState, nu0, omega):
    return MarkDistribution(omega).rate_factor() * intensity(state, nu0)


def decay(state: SimState, dt, kernel: ExponentialMixture):
    if dt < 0:
        raise ValueError("dt must be >= 0")
    return SimState(state.t + dt, state.z * np.exp(-dt / kernel.tau_array), state.rng)


def apply_event(state: SimState, m, kernel: ExponentialMixture):
    if m < 1:
        raise ValueError("mark must be >= 1")
    return SimState(state.t, state.z + kernel.jump(m), state.rng)


def compensator_target(draw, omega):
    """omega * draw / log(1 + omega): the lambda-integral an Exp(1) draw maps to."""
    if omega == 0:
        return draw
    return draw * omega / math.log1p(omega)


def solve_next_event(state: SimState, nu0, omega, kernel: ExponentialMixture,
                     draw, rtol=DEFAULT_RTOL):
    """Waiting time dt solving nu0 dt + sum z_k tau_k (1 - e^{-dt/tau_k}) = target."""
    if not draw > 0:
        raise ValueError("compensator draw must be > 0")
    if not nu0 > 0:
        raise ValueError("nu0 must be > 0")
    target = compensator_target(draw, omega)
    dt, res = _solve(np.asarray(state.z, dtype=np.float64), kernel.tau_array,
                     float(nu0), target, rtol, 200)
    if dt < 0:
        raise SolverError(f"next-event solver hit its iteration cap (target={target})")
    return dt


@njit(cache=True)
def _residual(x, z, tau, nu0, target):
    f = nu0 * x - target
    df = nu0
    for k in range(z.shape[0]):
        em1 = math.expm1(-x / tau[k])
        f -= z[k] * tau[k] * em1
        df += z[k] * (1.0 + em1)
    return f, df


@njit(cache=True)
def _solve(z, tau, nu0, target, rtol, max_iter):
    """Safeguarded Newton on the concave increasing compensator residual.

    Returns (dt, |residual|); dt = -1 flags that the iteration cap was hit.
    """
    tol = rtol * (target + nu0)
    lo = 0.0
    hi = target / nu0
    f_hi, _ = _residual(hi, z, tau, nu0, target)
    while f_hi < 0.0:
        lo = hi
        hi *= 2.0
        f_hi, _ = _residual(hi, z, tau, nu0, target)
    lam0 = nu0
    for k in range(z.shape[0]):
        lam0 += z[k]
    x = target / lam0
    for _ in range(max_iter):
        f, df = _residual(x, z, tau, nu0, target)
        if abs(f) <= tol:
            return x, abs(f)
        if f < 0.0:
            lo = x
        else:
            hi = x
        x_new = x - f / df
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        x = x_new
    return -1.0, math.inf


# --- time-rescaling sampler ------------------------------------------------

@njit(cache=True)
def _run_chunk(z, s, st, nu0, scale, q, p1, n_k, tau_k, t_max, burn_in, obs_dt,
               rtol, ev_t, ev_m, ev_e, obs_t, obs_l):
    """Advance until t_max or a buffer fills; returns (events, observations) written.

    ``st`` holds the resumable run state; a solved-but-unapplied event is
    kept pending there when an output buffer fills mid-interval.
    """
    K = z.shape[0]
    n_ev = 0
    n_obs = 0
    t = st[_T]
    j = st[_J]
    while True:
        if st[_PEND_DT] >= 0.0:
            dt = st[_PEND_DT]
            e = st[_PEND_E]
        else:
            e = exponential(s)
            target = e * scale
            dt, res = _solve(z, tau_k, nu0, target, rtol, 200)
            if dt < 0.0:
                st[_T] = t
                st[_J] = j
                return -1, -1
            rel = res / (target + nu0)
            if rel > st[_MAX_RES]:
                st[_MAX_RES] = rel
            st[_PEND_DT] = dt
            st[_PEND_E] = e
        t_next = t + dt
        t_end = min(t_next, t_max)
        while True:
            tj = burn_in + j * obs_dt
            if tj > t_end:
                break
            if n_obs == obs_t.shape[0]:
                st[_T] = t
                st[_J] = j
                return n_ev, n_obs
            lam = nu0
            for k in range(K):
                lam += z[k] * math.exp(-(tj - t) / tau_k[k])
            obs_t[n_obs] = tj
            obs_l[n_obs] = lam
            n_obs += 1
            j += 1
        if t_next > t_max:
            st[_DONE] = 1.0
            st[_T] = t
            st[_J] = j
            return n_ev, n_obs
        if n_ev == ev_t.shape[0]:
            st[_T] = t
            st[_J] = j
            return n_ev, n_obs
        # decay by the representable step so stored times replay exactly
        dt_eff = t_next - t
        m = sample_mark(s, q, p1)
        for k in range(K):
            z[k] = z[k] * math.exp(-dt_eff / tau_k[k]) + n_k[k] * m / tau_k[k]
        t = t_next
        ev_t[n_ev] = t
        ev_m[n_ev] = m
        ev_e[n_ev] = e
        n_ev += 1
        st[_N_EVENTS] += 1.0
        st[_PEND_DT] = -1.0


class TimeRescalingSampler:
    """Resumable, chunked driver for the time-rescaling sampler.

    Iterating yields ``(event_t, event_m, draws, obs_t, obs_lambda)`` chunks
    so arbitrarily long runs can be streamed to disk with bounded memory.
    """

    def __init__(self, config: SimConfig, chunk=DEFAULT_CHUNK, rtol=DEFAULT_RTOL):
        self.config = config
        self.chunk = int(chunk)
        self.rtol = float(rtol)
        self.z = np.zeros(config.kernel.K)
        self.rng_state = state_from_seed(config.seed)
        self.st = np.zeros(7)
        self.st[_PEND_DT] = -1.0
        self._buffers = (
            np.empty(self.chunk), np.empty(self.chunk, dtype=np.int64), np.empty(self.chunk),
            np.empty(self.chunk), np.empty(self.chunk),
        )

    @property
    def done(self):
        return self.st[_DONE] > 0

    @property
    def max_residual(self):
        return float(self.st[_MAX_RES])

    @property
    def n_events(self):
        return int(self.st[_N_EVENTS])

    @property
    def t(self):
        return float(self.st[_T])

    def state(self):
        rng = Xoshiro256(state=self.rng_state.copy())
        return SimState(self.t, self.z.copy(), rng)

    def __iter__(self):
        return self

    def __next__(self):
        if self.done:
            raise StopIteration
        cfg = self.config
        marks = cfg.marks
        ev_t, ev_m, ev_e, obs_t, obs_l = self._buffers
        n_ev, n_obs = _run_chunk(
            self.z, self.rng_state, self.st, float(cfg.nu0),
            1.0 / marks.rate_factor(), marks.q, marks._p1(),
            cfg.kernel.n_array, cfg.kernel.tau_array,
            float(cfg.t_max), float(cfg.burn_in), float(cfg.obs_dt), self.rtol,
            ev_t, ev_m, ev_e, obs_t, obs_l,
        )
        if n_ev < 0:
            raise SolverError(f"next-event solver failed near t={self.t}")
        return (ev_t[:n_ev].copy(), ev_m[:n_ev].copy(), ev_e[:n_ev].copy(),
                obs_t[:n_obs].copy(), obs_l[:n_obs].copy())


def simulate(config: SimConfig, rtol=DEFAULT_RTOL, chunk=DEFAULT_CHUNK) -> SimResult:
    """Run the time-rescaling sampler over [0, t_max] and keep everything in memory."""
    sampler = TimeRescalingSampler(config, chunk=chunk, rtol=rtol)
    parts = list(sampler)
    if parts:
        cols = [np.concatenate([p[i] for p in parts]) for i in range(5)]
    else:
        cols = [np.empty(0), np.empty(0, dtype=np.int64), np.empty(0), np.empty(0), np.empty(0)]
    return SimResult(config, cols[0], cols[1], cols[2], cols[3], cols[4],
                     sampler.max_residual)


# --- thinning oracle -------------------------------------------------------

@njit(cache=True)
def _thinning(z, s, nu0, c, q, p1, n_k, tau_k, t_max):
    K = z.shape[0]
    cap = 1024
    ev_t = np.empty(cap)
    ev_m = np.empty(cap, dtype=np.int64)
    n = 0
    t = 0.0
    while True:
        lam_bar = nu0
        for k in range(K):
            lam_bar += z[k]
        # intensity only decays between events, so the current rate dominates
        w = exponential(s) / (c * lam_bar)
        t_cand = t + w
        if t_cand > t_max:
            break
        dt_eff = t_cand - t
        lam = nu0
        for k in range(K):
            z[k] *= math.exp(-dt_eff / tau_k[k])
            lam += z[k]
        t = t_cand
        if uniform(s) * lam_bar <= lam:
            m = sample_mark(s, q, p1)
            for k in range(K):
                z[k] += n_k[k] * m / tau_k[k]
            if n == cap:
                cap *= 2
                new_t = np.empty(cap)
                new_m = np.empty(cap, dtype=np.int64)
                new_t[:n] = ev_t[:n]
                new_m[:n] = ev_m[:n]
                ev_t = new_t
                ev_m = new_m
            ev_t[n] = t
            ev_m[n] = m
            n += 1
    return ev_t[:n], ev_m[:n]


def simulate_thinning(config: SimConfig):
    """Ogata-style thinning sampler; returns (event_t, event_m).

    Uses the same generator family but a different consumption pattern, so
    its paths are independent of :func:`simulate` at equal seeds.
    """
    marks = config.marks
    z = np.zeros(config.kernel.K)
    s = state_from_seed(config.seed)
    return _thinning(z, s, float(config.nu0), marks.rate_factor(), marks.q, marks._p1(),
                     config.kernel.n_array, config.kernel.tau_array, float(config.t_max))


# --- reconstruction from an event list --------------------------------------

@njit(cache=True)
def _intensity_on_grid(ev_t, ev_m, nu0, n_k, tau_k, grid):
    K = n_k.shape[0]
    z = np.zeros(K)
    out = np.empty(grid.shape[0])
    t = 0.0
    i = 0
    for g in range(grid.shape[0]):
        tg = grid[g]
        # events at exactly tg are not yet felt: left limit
        while i < ev_t.shape[0] and ev_t[i] < tg:
            dt = ev_t[i] - t
            for k in range(K):
                z[k] = z[k] * math.exp(-dt / tau_k[k]) + n_k[k] * ev_m[i] / tau_k[k]
            t = ev_t[i]
            i += 1
        lam = nu0
        for k in range(K):
            lam += z[k] * math.exp(-(tg - t) / tau_k[k])
        out[g] = lam
    return out


def observation_grid(config: SimConfig):
    count = int(math.floor((config.t_max - config.burn_in) / config.obs_dt)) + 1
    grid = config.burn_in + np.arange(count) * config.obs_dt
    return grid[grid <= config.t_max]


def intensity_on_grid(event_t, event_m, nu0, kernel: ExponentialMixture, grid):
    """lambda(t) at each grid time, replayed from an event list."""
    return _intensity_on_grid(np.asarray(event_t, dtype=np.float64),
                              np.asarray(event_m, dtype=np.int64), float(nu0),
                              kernel.n_array, kernel.tau_array,
                              np.asarray(grid, dtype=np.float64))


@njit(cache=True)
def _rescaled_intervals(ev_t, ev_m, nu0, c, n_k, tau_k):
    K = n_k.shape[0]
    z = np.zeros(K)
    out = np.empty(ev_t.shape[0])
    t = 0.0
    for i in range(ev_t.shape[0]):
        dt = ev_t[i] - t
        acc = nu0 * dt
        for k in range(K):
            em1 = math.expm1(-dt / tau_k[k])
            acc -= z[k] * tau_k[k] * em1
            z[k] = z[k] * (1.0 + em1) + n_k[k] * ev_m[i] / tau_k[k]
        out[i] = c * acc
        t = ev_t[i]
    return out


def rescaled_intervals(event_t, event_m, nu0, omega, kernel: ExponentialMixture):
    """Compensator increments Lambda(t_i) - Lambda(t_{i-1}), with t_0 = 0."""
    return _rescaled_intervals(np.asarray(event_t, dtype=np.float64),
                               np.asarray(event_m, dtype=np.int64), float(nu0),
                               MarkDistribution(omega).rate_factor(),
                               kernel.n_array, kernel.tau_array)


def with_seed(config: SimConfig, seed):
    return replace(config, seed=int(seed))

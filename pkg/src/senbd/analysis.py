"""Steady-state intensity PDFs, slope fits and the closed-form predictions.

Near criticality the stationary intensity density behaves as

    P(lambda) ~ lambda^(-(1 - 2 nu0 alpha / (omega + 1))) * exp(-2 tau eps lambda / (omega + 1))

with alpha = sum_k n_k tau_k and eps = 1 - n. The exponential factor sets
the cutoff scale (omega + 1) / (2 tau eps).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import stats

from .hawkes import rescaled_intervals
from .kernel import ExponentialMixture
from .marks import MarkDistribution


# --- histogram ---------------------------------------------------------------

@dataclass
class LogHistogram:
    """Weighted histogram on geometric bins spanning [lambda_min, lambda_max)."""

    lambda_min: float
    lambda_max: float
    bins_per_decade: int = 20
    counts: np.ndarray = field(default=None, repr=False)
    underflow: float = 0.0
    overflow: float = 0.0

    def __post_init__(self):
        if not 0 < self.lambda_min < self.lambda_max:
            raise ValueError("need 0 < lambda_min < lambda_max")
        if int(self.bins_per_decade) < 1:
            raise ValueError("bins_per_decade must be >= 1")
        self.bins_per_decade = int(self.bins_per_decade)
        n_bins = max(1, int(math.ceil(
            self.bins_per_decade * math.log10(self.lambda_max / self.lambda_min) - 1e-9)))
        self.edges = self.lambda_min * 10.0 ** (np.arange(n_bins + 1) / self.bins_per_decade)
        # top edge is lambda_max itself so the range is exactly as requested
        self.edges[-1] = self.lambda_max
        if self.counts is None:
            self.counts = np.zeros(n_bins)
        else:
            self.counts = np.asarray(self.counts, dtype=np.float64)
            if self.counts.shape != (n_bins,):
                raise ValueError("counts do not match the bin layout")

    @classmethod
    def for_background(cls, nu0, bins_per_decade=20):
        """Default layout: nu0/10 up to 1e6 nu0."""
        return cls(nu0 / 10.0, 1e6 * nu0, bins_per_decade)

    @property
    def n_bins(self):
        return self.counts.shape[0]

    @property
    def centers(self):
        return np.sqrt(self.edges[:-1] * self.edges[1:])

    @property
    def widths(self):
        return np.diff(self.edges)

    @property
    def total_weight(self):
        return float(self.counts.sum()) + self.underflow + self.overflow

    def record(self, lam, weight=1.0):
        if not lam > 0:
            raise ValueError("intensity values must be > 0")
        if weight < 0:
            raise ValueError("weights must be >= 0")
        if lam < self.lambda_min:
            self.underflow += weight
        elif lam >= self.lambda_max:
            self.overflow += weight
        else:
            i = int(np.searchsorted(self.edges, lam, side="right")) - 1
            self.counts[i] += weight
        return self

    def record_many(self, lam, weights=None):
        lam = np.asarray(lam, dtype=np.float64)
        if np.any(~(lam > 0)):
            raise ValueError("intensity values must be > 0")
        w = np.ones_like(lam) if weights is None else np.asarray(weights, dtype=np.float64)
        if np.any(w < 0):
            raise ValueError("weights must be >= 0")
        below = lam < self.lambda_min
        above = lam >= self.lambda_max
        self.underflow += float(w[below].sum())
        self.overflow += float(w[above].sum())
        inside = ~(below | above)
        idx = np.searchsorted(self.edges, lam[inside], side="right") - 1
        self.counts += np.bincount(idx, weights=w[inside], minlength=self.n_bins)
        return self

    def _check_compatible(self, other):
        if (self.lambda_min, self.lambda_max, self.bins_per_decade) != (
                other.lambda_min, other.lambda_max, other.bins_per_decade):
            raise ValueError("histograms have different bin layouts")

    def merge(self, other):
        self._check_compatible(other)
        return LogHistogram(self.lambda_min, self.lambda_max, self.bins_per_decade,
                            self.counts + other.counts, self.underflow + other.underflow,
                            self.overflow + other.overflow)

    def density(self):
        """(bin_center, pdf) arrays; out-of-range weight stays in the normalization."""
        total = self.total_weight
        if not total > 0:
            raise ValueError("histogram is empty")
        return self.centers, self.counts / (total * self.widths)

    def mass_above(self, lam):
        """Fraction of total weight in bins whose lower edge is >= lam (plus overflow)."""
        sel = self.edges[:-1] >= lam
        return (float(self.counts[sel].sum()) + self.overflow) / self.total_weight

    def quantile(self, q):
        """Upper edge of the bin where the cumulative weight first reaches q."""
        total = self.total_weight
        if not total > 0:
            raise ValueError("histogram is empty")
        cum = (self.underflow + np.cumsum(self.counts)) / total
        i = int(np.searchsorted(cum, q, side="left"))
        if i >= self.n_bins:
            return self.lambda_max
        return float(self.edges[i + 1])

    def to_dict(self):
        return {"lambda_min": self.lambda_min, "lambda_max": self.lambda_max,
                "bins_per_decade": self.bins_per_decade, "counts": self.counts.tolist(),
                "underflow": self.underflow, "overflow": self.overflow}

    @classmethod
    def from_dict(cls, d):
        return cls(d["lambda_min"], d["lambda_max"], d["bins_per_decade"], np.array(d["counts"]),
                   d["underflow"], d["overflow"])


# --- closed-form predictions -------------------------------------------------

def theoretical_exponent(nu0, omega, kernel: ExponentialMixture):
    """Exponent e in P(lambda) ~ lambda^-e near criticality: 1 - 2 nu0 alpha / (omega + 1)."""
    return 1.0 - 2.0 * nu0 * kernel.alpha() / (omega + 1.0)


def exponent_from_alpha(nu0, omega, alpha):
    return 1.0 - 2.0 * nu0 * alpha / (omega + 1.0)


def theoretical_exponent_powerlaw(nu0, omega, gamma):
    """Exponent for the power-law kernel, where alpha = 1 / (gamma - 1)."""
    if not gamma > 1:
        raise ValueError("gamma must exceed 1")
    return 1.0 - 2.0 * nu0 / ((omega + 1.0) * (gamma - 1.0))


def cutoff_scale(tau, epsilon, omega):
    """Intensity (omega + 1) / (2 tau eps) beyond which the subcritical PDF decays exponentially."""
    if not epsilon > 0:
        raise ValueError("no finite cutoff at or above criticality (epsilon <= 0)")
    return (omega + 1.0) / (2.0 * tau * epsilon)


def tail_rate(tau, epsilon, omega):
    """Decay rate 2 tau eps / (omega + 1) of the exponential factor."""
    return 2.0 * tau * epsilon / (omega + 1.0)


def exponent_from_mark_moments(nu0, tau, marks: MarkDistribution):
    """1 - a with a = 2 tau nu0 / (E[m^2] / E[m])."""
    a = 2.0 * tau * nu0 * marks.mean() / marks.second_moment()
    return 1.0 - a


@dataclass(frozen=True)
class TheoryPrediction:
    exponent: float
    exponent_critical: float
    cutoff: float

    @classmethod
    def for_config(cls, nu0, omega, kernel: ExponentialMixture):
        """Prediction at the actual n, plus the n = 1 value with the kernel rescaled.

        The cutoff uses the weight-averaged time constant alpha / n, which
        reduces to tau for a single exponential; it is infinite for n >= 1.
        """
        n = kernel.branching_ratio()
        eps = 1.0 - n
        cut = cutoff_scale(kernel.mean_tau(), eps, omega) if eps > 0 else math.inf
        return cls(theoretical_exponent(nu0, omega, kernel),
                   exponent_from_alpha(nu0, omega, kernel.alpha() / n), cut)


# --- fits --------------------------------------------------------------------

class SlopeFit(NamedTuple):
    slope: float
    stderr: float


def _ols(x, y):
    n = x.shape[0]
    xm = x.mean()
    sxx = np.sum((x - xm) ** 2)
    slope = np.sum((x - xm) * (y - y.mean())) / sxx
    intercept = y.mean() - slope * xm
    resid = y - intercept - slope * x
    dof = n - 2
    stderr = math.sqrt(np.sum(resid ** 2) / dof / sxx) if dof > 0 else math.inf
    return float(slope), float(stderr)


def _wls(x, y, w):
    w = w / w.sum()
    xm = np.sum(w * x)
    ym = np.sum(w * y)
    sxx = np.sum(w * (x - xm) ** 2)
    slope = np.sum(w * (x - xm) * (y - ym)) / sxx
    resid = y - ym - slope * (x - xm)
    dof = x.shape[0] - 2
    stderr = math.sqrt(np.sum(w * resid ** 2) / sxx / dof) if dof > 0 else math.inf
    return float(slope), float(stderr)


def _window_bins(hist: LogHistogram, lo, hi):
    centers, dens = hist.density()
    sel = (centers >= lo) & (centers <= hi) & (hist.counts > 0)
    return centers[sel], dens[sel]


def fit_power_exponent(hist: LogHistogram, lambda_lo, lambda_hi, min_bins=5):
    """OLS slope of log density against log lambda over bins centred in the window."""
    c, d = _window_bins(hist, lambda_lo, lambda_hi)
    if c.shape[0] < min_bins:
        raise ValueError(f"only {c.shape[0]} non-empty bins in [{lambda_lo}, {lambda_hi}]; "
                         f"need {min_bins}")
    return SlopeFit(*_ols(np.log(c), np.log(d)))


def fit_tail_rate(hist: LogHistogram, lambda_lo, lambda_hi=math.inf, power_exponent=0.0,
                  min_bins=5):
    """Semilog slope of log(density * lambda^power_exponent) against lambda.

    Compensating by the power-law factor isolates the exponential decay, so
    the slope estimates -2 tau eps / (omega + 1). Bins are weighted by their
    counts since sparse tail bins carry most of the noise.
    """
    centers, dens = hist.density()
    sel = (centers >= lambda_lo) & (centers <= lambda_hi) & (hist.counts > 0)
    if sel.sum() < min_bins:
        raise ValueError(f"only {sel.sum()} non-empty bins in [{lambda_lo}, {lambda_hi}]; "
                         f"need {min_bins}")
    c = centers[sel]
    y = np.log(dens[sel]) + power_exponent * np.log(c)
    return SlopeFit(*_wls(c, y, hist.counts[sel]))


WINDOW_LO_FACTOR = 10.0
WINDOW_HI_FRACTION = 0.1


def default_fit_window(nu0, omega, kernel: ExponentialMixture, hist: LogHistogram | None = None):
    """[10 nu0, 0.1 * cutoff] below criticality, else [10 nu0, 99.9th percentile].

    The exponential factor steepens the local log-log slope by lambda/cutoff,
    so the upper edge is kept an order of magnitude under the cutoff. Far
    from criticality that leaves no room, and the window runs up to the
    cutoff itself.
    """
    lo = WINDOW_LO_FACTOR * nu0
    pred = TheoryPrediction.for_config(nu0, omega, kernel)
    if math.isfinite(pred.cutoff):
        hi = WINDOW_HI_FRACTION * pred.cutoff
        if hi < 2.0 * lo:
            hi = pred.cutoff
        if not hi > lo:
            raise ValueError(f"cutoff {pred.cutoff:.4g} lies below the window start {lo:.4g}")
        return lo, hi
    if hist is None:
        raise ValueError("a histogram is needed to place the window at criticality")
    return lo, hist.quantile(0.999)


# --- time-rescaling check ----------------------------------------------------

def ks_exponential(intervals):
    """One-sample KS statistic of intervals against Exp(1)."""
    x = np.sort(np.asarray(intervals, dtype=np.float64))
    n = x.shape[0]
    cdf = -np.expm1(-x)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))


def ks_critical(n, alpha):
    """Exact one-sample KS critical value for sample size n at level alpha."""
    return float(stats.kstwo.ppf(1.0 - alpha, n))


def rescaled_intervals_ks(event_t, event_m, nu0, omega, kernel: ExponentialMixture, min_events=100):
    """KS statistic of the compensator increments against Exp(1)."""
    if len(event_t) < min_events:
        raise ValueError(f"need at least {min_events} events, got {len(event_t)}")
    return ks_exponential(rescaled_intervals(event_t, event_m, nu0, omega, kernel))

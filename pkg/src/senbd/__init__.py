"""Self-exciting negative-binomial process and marked Hawkes sampling."""
__version__ = "0.1.0"

from .kernel import ExponentialMixture, parse_kernel, powerlaw_mixture
from .marks import MarkDistribution
from .hawkes import SimConfig, simulate, simulate_thinning, solve_next_event
from .dt_process import DtConfig, simulate_dt
from .analysis import LogHistogram, TheoryPrediction, fit_power_exponent, theoretical_exponent

__all__ = [
    "ExponentialMixture", "parse_kernel", "powerlaw_mixture", "MarkDistribution", "SimConfig",
    "simulate", "simulate_thinning", "solve_next_event", "DtConfig", "simulate_dt",
    "LogHistogram", "TheoryPrediction", "fit_power_exponent", "theoretical_exponent",
]

"""Spread of fitted slopes across seeds for the three near-critical desk configs.

Used to choose the upper edge of the default fit window: compare
``--hi-fraction 0.1`` against ``0.3`` on the single-exponential case.
"""
import argparse
import time

import numpy as np

from senbd.analysis import LogHistogram, TheoryPrediction, default_fit_window, fit_power_exponent
from senbd.hawkes import SimConfig, TimeRescalingSampler
from senbd.kernel import ExponentialMixture, powerlaw_mixture
from senbd.rng import derive_seed

CASES = {
    "single": (0.2, 1.0, lambda: ExponentialMixture((0.999,), (1.0,)), 1e5, 0.1, -0.8),
    "double": (0.01, 0.01, lambda: ExponentialMixture((0.5, 0.499), (1.0, 3.0)), 1e6, 1.0, -0.9604),
    "powerlaw": (1.0, 1.0, lambda: powerlaw_mixture(11.0, 0.999, 100), 1e4, 0.01, -0.9),
}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("case", choices=sorted(CASES))
    p.add_argument("--seeds", type=int, default=8)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--hi-fraction", type=float, default=None,
                   help="upper edge as a fraction of the cutoff (default: library rule)")
    a = p.parse_args()
    nu0, omega, make_kernel, t_max, obs_dt, target = CASES[a.case]
    kernel = make_kernel()
    slopes = []
    for i in range(a.seeds):
        cfg = SimConfig(nu0, omega, kernel, t_max, derive_seed(a.base_seed, i), obs_dt=obs_dt)
        t0 = time.perf_counter()
        hist = LogHistogram.for_background(nu0)
        for *_, obs in TimeRescalingSampler(cfg):
            hist.record_many(obs)
        lo, hi = default_fit_window(nu0, omega, kernel, hist)
        if a.hi_fraction is not None:
            hi = a.hi_fraction * TheoryPrediction.for_config(nu0, omega, kernel).cutoff
        fit = fit_power_exponent(hist, lo, hi)
        slopes.append(fit.slope)
        print(f"seed {i}: slope {fit.slope:.4f} +- {fit.stderr:.4f} window [{lo:.3g}, {hi:.3g}] "
              f"{time.perf_counter() - t0:.1f}s", flush=True)
    s = np.array(slopes)
    print(f"mean {s.mean():.4f} sd {s.std(ddof=1):.4f} target {target}; "
          f"{np.mean(np.abs(s - target) > 0.1):.0%} of seeds outside +-0.1")


if __name__ == "__main__":
    main()

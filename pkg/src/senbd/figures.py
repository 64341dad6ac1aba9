"""Kernel families and parameter grids of the four numerical experiments."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .analysis import (TheoryPrediction, exponent_from_alpha, theoretical_exponent,
                       theoretical_exponent_powerlaw)
from .kernel import ExponentialMixture, powerlaw_mixture

NU0_GRID = (0.01, 0.2, 1.0)
OMEGA_GRID = (0.01, 1.0, 10.0)
N_GRID = (0.9, 0.99, 0.999)


@dataclass(frozen=True)
class KernelFamily:
    """A kernel shape whose branching ratio is set by adjusting its last weight(s)."""

    name: str
    figure: int
    fixed: tuple = ()            # (n_k, tau_k) pairs held constant
    last_tau: float = 1.0        # tau of the term absorbing n - sum(fixed)
    gamma: float | None = None   # set for the inverse-gamma family
    K: int = 100

    def kernel(self, n):
        if self.gamma is not None:
            return powerlaw_mixture(self.gamma, n, self.K)
        rest = n - sum(p[0] for p in self.fixed)
        if not rest > 0:
            raise ValueError(f"{self.name}: n={n} leaves no weight for the last term")
        return ExponentialMixture.from_pairs(list(self.fixed) + [(rest, self.last_tau)])

    def critical_exponent(self, nu0, omega):
        """Exponent at n = 1, as quoted for each panel of the figure."""
        if self.gamma is not None:
            return theoretical_exponent_powerlaw(nu0, omega, self.gamma)
        return theoretical_exponent(nu0, omega, self.kernel(1.0))

    def prediction(self, nu0, omega, n):
        k = self.kernel(n)
        pred = TheoryPrediction.for_config(nu0, omega, k)
        return pred


FAMILIES = {
    "single": KernelFamily("single", 2, (), 1.0),
    "double": KernelFamily("double", 3, ((0.5, 1.0),), 3.0),
    "triple": KernelFamily("triple", 4, ((0.3, 1.0), (0.2, 2.0)), 3.0),
    "powerlaw": KernelFamily("powerlaw", 5, gamma=11.0, K=100),
}
BY_FIGURE = {f.figure: f for f in FAMILIES.values()}


def theory_rows(figures=(2, 3, 4, 5), nu0s=NU0_GRID, omegas=OMEGA_GRID, ns=N_GRID):
    """Rows of predicted exponents/cutoffs; n = 1 rows carry the caption values."""
    rows = []
    for fig in figures:
        fam = BY_FIGURE[fig]
        for nu0, omega in itertools.product(nu0s, omegas):
            rows.append({"figure": fig, "family": fam.name, "nu0": nu0, "omega": omega,
                         "n": 1.0, "exponent": fam.critical_exponent(nu0, omega),
                         "cutoff": math.inf})
            for n in ns:
                pred = fam.prediction(nu0, omega, n)
                rows.append({"figure": fig, "family": fam.name, "nu0": nu0, "omega": omega,
                             "n": n, "exponent": pred.exponent, "cutoff": pred.cutoff})
    return rows


@dataclass
class Campaign:
    """Cartesian grid of runs for one kernel family."""

    family: str
    nu0s: tuple = NU0_GRID
    omegas: tuple = OMEGA_GRID
    ns: tuple = N_GRID
    t_max: float = 1e4
    runs_per_cell: int = 1
    base_seed: int = 0
    obs_dt: float = 1.0
    burn_in: float | None = None
    output_dir: str = "campaign"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family: unknown kernel family {self.family!r}")
        if int(self.runs_per_cell) < 1:
            raise ValueError("runs_per_cell: must be >= 1")

    def cells(self):
        return list(itertools.product(self.nu0s, self.omegas, self.ns))

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        for key in ("nu0s", "omegas", "ns"):
            if key in d:
                d[key] = tuple(float(v) for v in d[key])
        return cls(**d)

    def to_dict(self):
        return {"family": self.family, "nu0s": list(self.nu0s), "omegas": list(self.omegas),
                "ns": list(self.ns), "t_max": self.t_max, "runs_per_cell": self.runs_per_cell,
                "base_seed": self.base_seed, "obs_dt": self.obs_dt, "burn_in": self.burn_in,
                "output_dir": self.output_dir, "extra": self.extra}

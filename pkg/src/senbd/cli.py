"""Command-line front end: simulate, dt-simulate, analyze, theory, validate, campaign."""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats

from . import __version__
from .analysis import (LogHistogram, TheoryPrediction, default_fit_window, fit_power_exponent,
                       fit_tail_rate, ks_critical, ks_exponential)
from .dt_process import DtConfig, DtRunner
from .figures import BY_FIGURE, FAMILIES, N_GRID, NU0_GRID, OMEGA_GRID, Campaign, theory_rows
from .hawkes import (DEFAULT_RTOL, SimConfig, TimeRescalingSampler, intensity_on_grid,
                     observation_grid, rescaled_intervals, simulate, simulate_thinning)
from .kernel import kernel_from_json, parse_kernel
from .rng import derive_seed

OUTPUT_ENV = "SENBD_OUTPUT_DIR"
FLOAT_FMT = "%.17g"
SEED_DERIVATION = ("run seeds are splitmix64 mixes of (base_seed, cell index, run index); "
                   "generator state = xoshiro256** seeded by splitmix64(seed)")


class UsageError(Exception):
    """Bad flags or config values; reported with exit status 2."""


def default_output_dir():
    return Path(os.environ.get(OUTPUT_ENV, "senbd-out"))


# --- config assembly ---------------------------------------------------------

def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"config: file not found: {path}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"config: {path} is not valid JSON ({exc})")


def _kernel_value(value):
    try:
        if isinstance(value, str):
            return parse_kernel(value)
        return kernel_from_json(value)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"kernel: {exc}")


def _merged_fields(args, keys):
    """Config-file values overridden by any flag that was given."""
    base = _load_json(args.config) if getattr(args, "config", None) else {}
    if "tmax" in base and "t_max" not in base:
        base["t_max"] = base.pop("tmax")
    for key in keys:
        val = getattr(args, key, None)
        if val is not None:
            base[key] = val
    return base


def _check_stationary(kernel, allow_critical):
    n = kernel.branching_ratio()
    if n >= 1.0 and not allow_critical:
        raise UsageError(f"kernel: branching ratio n={n:.6g} >= 1 has no stationary state; "
                         "pass --allow-critical to run anyway")


def sim_config_from_args(args):
    d = _merged_fields(args, ("nu0", "omega", "kernel", "t_max", "burn_in", "obs_dt", "seed"))
    for key in ("nu0", "omega", "kernel", "t_max", "seed"):
        if d.get(key) is None:
            raise UsageError(f"{key}: required (flag or config file)")
    kernel = _kernel_value(d["kernel"])
    _check_stationary(kernel, args.allow_critical)
    try:
        return SimConfig(nu0=float(d["nu0"]), omega=float(d["omega"]), kernel=kernel,
                         t_max=float(d["t_max"]), seed=int(d["seed"]),
                         burn_in=None if d.get("burn_in") is None else float(d["burn_in"]),
                         obs_dt=float(d.get("obs_dt", 1.0)))
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc))


def dt_config_from_args(args):
    d = _merged_fields(args, ("nu0", "omega", "kernel", "steps", "seed"))
    for key in ("nu0", "omega", "kernel", "steps", "seed"):
        if d.get(key) is None:
            raise UsageError(f"{key}: required (flag or config file)")
    kernel = _kernel_value(d["kernel"])
    _check_stationary(kernel, args.allow_critical)
    try:
        return DtConfig(float(d["nu0"]), float(d["omega"]), kernel, int(float(d["steps"])),
                        int(d["seed"]))
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc))


def _float_pair(text):
    lo, sep, hi = text.partition(",")
    try:
        lo, hi = float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi got {text!r}")
    if not (sep and 0 < lo < hi):
        raise argparse.ArgumentTypeError(f"window needs 0 < lo < hi, got {text!r}")
    return lo, hi


def _float_list(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _json_float(x):
    return None if x is None or not math.isfinite(x) else float(x)


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --- simulate ----------------------------------------------------------------

def run_simulation(config: SimConfig, out_dir, write_events=True, histogram=None,
                   rtol=DEFAULT_RTOL, extra=None):
    """Stream one run to ``out_dir``; optionally accumulate observations into ``histogram``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    sampler = TimeRescalingSampler(config, rtol=rtol)
    n_obs = 0
    lam_sum = 0.0
    ev_fh = open(out_dir / "events.csv", "w") if write_events else None
    with open(out_dir / "observations.csv", "w") as obs_fh:
        obs_fh.write("t,lambda\n")
        if ev_fh:
            ev_fh.write("t,m\n")
        try:
            for ev_t, ev_m, _, obs_t, obs_l in sampler:
                if ev_fh and ev_t.size:
                    np.savetxt(ev_fh, np.column_stack([ev_t, ev_m]), fmt=[FLOAT_FMT, "%d"],
                               delimiter=",")
                if obs_t.size:
                    np.savetxt(obs_fh, np.column_stack([obs_t, obs_l]), fmt=FLOAT_FMT,
                               delimiter=",")
                    n_obs += obs_t.size
                    lam_sum += float(obs_l.sum())
                    if histogram is not None:
                        histogram.record_many(obs_l)
        finally:
            if ev_fh:
                ev_fh.close()
    manifest = {
        "command": "simulate",
        "version": __version__,
        "config": config.to_dict(),
        "seed": int(config.seed),
        "seed_derivation": SEED_DERIVATION,
        "kernel_pairs": [list(p) for p in config.kernel.pairs()],
        "branching_ratio": config.kernel.branching_ratio(),
        "n_events": sampler.n_events,
        "n_observations": n_obs,
        "mean_lambda": lam_sum / n_obs if n_obs else None,
        "max_solver_residual": sampler.max_residual,
        "wall_time_s": time.perf_counter() - t0,
        "files": {"events": "events.csv" if write_events else None,
                  "observations": "observations.csv"},
    }
    if extra:
        manifest.update(extra)
    _write_json(out_dir / "manifest.json", manifest)
    return manifest


def cmd_simulate(args):
    config = sim_config_from_args(args)
    out = Path(args.out) if args.out else default_output_dir() / f"simulate-seed{config.seed}"
    m = run_simulation(config, out, write_events=not args.no_events)
    print(f"{m['n_events']} events, {m['n_observations']} observations, "
          f"{m['wall_time_s']:.2f}s -> {out}")
    return 0


# --- dt-simulate -------------------------------------------------------------

def cmd_dt_simulate(args):
    config = dt_config_from_args(args)
    if args.stride < 1:
        raise UsageError("stride: must be >= 1")
    out = Path(args.out) if args.out else default_output_dir() / f"dt-seed{config.seed}"
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    runner = DtRunner(config, stride=args.stride)
    rows = 0
    with open(out / "dt.csv", "w") as fh:
        fh.write("t,X,lambda_hat\n")
        for t, x, lam in runner:
            if t.size:
                np.savetxt(fh, np.column_stack([t, x, lam]), fmt=["%d", "%d", FLOAT_FMT],
                           delimiter=",")
                rows += t.size
    n = config.kernel.branching_ratio()
    manifest = {
        "command": "dt-simulate",
        "version": __version__,
        "config": config.to_dict(),
        "seed": int(config.seed),
        "seed_derivation": SEED_DERIVATION,
        "kernel_pairs": [list(p) for p in config.kernel.pairs()],
        "stride": args.stride,
        "rows": rows,
        "mean_lambda": runner.mean_lambda,
        "var_lambda": runner.var_lambda,
        "stationary_mean": config.nu0 / (1.0 - n) if n < 1 else None,
        "wall_time_s": time.perf_counter() - t0,
        "files": {"steps": "dt.csv"},
    }
    _write_json(out / "manifest.json", manifest)
    print(f"{config.steps} steps, mean lambda {runner.mean_lambda:.6g} -> {out}")
    return 0


# --- analyze -----------------------------------------------------------------

def read_observations(path, block=1 << 20):
    """Yield lambda arrays from a ``t,lambda`` CSV in bounded-size blocks."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "t,lambda":
            raise ValueError(f"{path}: expected header 't,lambda', got {header!r}")
        while True:
            lines = list(itertools.islice(fh, block))
            if not lines:
                return
            arr = np.loadtxt(lines, delimiter=",", ndmin=2)
            if arr.shape[1] != 2:
                raise ValueError(f"{path}: expected two columns")
            yield arr[:, 1]


def histogram_rows(hist: LogHistogram):
    centers, dens = hist.density()
    return centers, dens, hist.counts


def analyze_histogram(hist, config: SimConfig, window=None):
    """Fit report for a filled histogram against the closed-form predictions."""
    pred = TheoryPrediction.for_config(config.nu0, config.omega, config.kernel)
    lo, hi = window if window else default_fit_window(config.nu0, config.omega, config.kernel,
                                                        hist)
    fit = fit_power_exponent(hist, lo, hi)
    report = {
        "slope": fit.slope,
        "stderr": fit.stderr,
        "window_lo": lo,
        "window_hi": hi,
        "theory_exponent": pred.exponent,
        "theory_exponent_critical": pred.exponent_critical,
        "theory_cutoff": _json_float(pred.cutoff),
        "n_observations": hist.total_weight,
    }
    if math.isfinite(pred.cutoff):
        eps = 1.0 - config.kernel.branching_ratio()
        report["theory_tail_slope"] = -2.0 * config.kernel.mean_tau() * eps / (config.omega + 1)
        report["mass_above_5x_cutoff"] = hist.mass_above(5.0 * pred.cutoff)
        try:
            tail = fit_tail_rate(hist, pred.cutoff, power_exponent=pred.exponent)
            report["tail_slope"], report["tail_stderr"] = tail.slope, tail.stderr
        except ValueError:
            report["tail_slope"] = report["tail_stderr"] = None
    return report


def cmd_analyze(args):
    obs_path = Path(args.observations)
    if obs_path.is_dir():
        obs_path = obs_path / "observations.csv"
    if not obs_path.is_file():
        print(f"error: observation file not found: {obs_path}", file=sys.stderr)
        return 1
    man_path = Path(args.manifest) if args.manifest else obs_path.parent / "manifest.json"
    try:
        with open(man_path) as fh:
            config = SimConfig.from_dict(json.load(fh)["config"])
    except FileNotFoundError:
        print(f"error: manifest not found: {man_path}", file=sys.stderr)
        return 1
    except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        print(f"error: corrupt manifest {man_path}: {exc}", file=sys.stderr)
        return 1
    hist = LogHistogram.for_background(config.nu0, args.bins_per_decade)
    try:
        for lam in read_observations(obs_path):
            hist.record_many(lam)
    except ValueError as exc:
        print(f"error: corrupt observation file: {exc}", file=sys.stderr)
        return 1
    if hist.total_weight == 0:
        print(f"error: {obs_path} holds no observations", file=sys.stderr)
        return 1
    out = Path(args.out) if args.out else obs_path.parent
    out.mkdir(parents=True, exist_ok=True)
    write_histogram(out / "histogram.csv", hist)
    try:
        report = analyze_histogram(hist, config, args.window)
    except ValueError as exc:
        print(f"error: fit failed: {exc}", file=sys.stderr)
        return 1
    _write_json(out / "fit.json", report)
    print(f"slope {report['slope']:.4f} +- {report['stderr']:.4f} over "
          f"[{report['window_lo']:.4g}, {report['window_hi']:.4g}]; "
          f"theory {-report['theory_exponent']:.4f}")
    return 0


def write_histogram(path, hist: LogHistogram):
    centers, dens, counts = histogram_rows(hist)
    with open(path, "w") as fh:
        fh.write("bin_center,density,count\n")
        np.savetxt(fh, np.column_stack([centers, dens, counts]),
                   fmt=[FLOAT_FMT, FLOAT_FMT, "%.17g"], delimiter=",")


# --- theory ------------------------------------------------------------------

THEORY_COLUMNS = ("figure", "family", "nu0", "omega", "n", "exponent", "cutoff")


def custom_theory_rows(kernel, nu0s, omegas):
    rows = []
    for nu0, omega in itertools.product(nu0s, omegas):
        pred = TheoryPrediction.for_config(nu0, omega, kernel)
        rows.append({"figure": "", "family": "custom", "nu0": nu0, "omega": omega,
                     "n": kernel.branching_ratio(), "exponent": pred.exponent,
                     "cutoff": pred.cutoff})
    return rows


def cmd_theory(args):
    nu0s = args.nu0 or NU0_GRID
    omegas = args.omega or OMEGA_GRID
    if any(v < 0 for v in nu0s) or any(v < 0 for v in omegas):
        raise UsageError("nu0/omega: grid values must be >= 0")
    if args.kernel:
        rows = custom_theory_rows(_kernel_value(args.kernel), nu0s, omegas)
    else:
        rows = theory_rows(args.figure or (2, 3, 4, 5), nu0s, omegas, args.n or N_GRID)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=THEORY_COLUMNS)
            w.writeheader()
            for r in rows:
                w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    print(f"{'fig':>3} {'family':>8} {'nu0':>6} {'omega':>6} {'n':>6} {'exponent':>12} "
          f"{'cutoff':>10}")
    for r in rows:
        print(f"{r['figure']!s:>3} {r['family']:>8} {r['nu0']:>6g} {r['omega']:>6g} "
              f"{r['n']:>6g} {r['exponent']:>12.6g} {r['cutoff']:>10.4g}")
    return 0


# --- validate ----------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def run_validation(config: SimConfig, pairs=10, alpha_lambda=1e-3, alpha_intervals=1e-2,
                   solver_rtol=DEFAULT_RTOL):
    """Paired sampler comparison plus mark and solver checks; returns a list of Check."""
    grid = observation_grid(config)
    log_a, log_b, iv_a, iv_b, marks = [], [], [], [], []
    max_res = 0.0
    for i in range(pairs):
        ca = SimConfig(config.nu0, config.omega, config.kernel, config.t_max,
                       derive_seed(config.seed, i, 0), config.burn_in, config.obs_dt)
        cb = SimConfig(config.nu0, config.omega, config.kernel, config.t_max,
                       derive_seed(config.seed, i, 1), config.burn_in, config.obs_dt)
        ra = simulate(ca, rtol=solver_rtol)
        max_res = max(max_res, ra.max_residual)
        tb, mb = simulate_thinning(cb)
        log_a.append(np.log(ra.obs_lambda))
        log_b.append(np.log(intensity_on_grid(tb, mb, config.nu0, config.kernel, grid)))
        iv_a.append(rescaled_intervals(ra.event_t, ra.event_m, config.nu0, config.omega,
                                       config.kernel))
        iv_b.append(rescaled_intervals(tb, mb, config.nu0, config.omega, config.kernel))
        marks.append(ra.event_m)
        marks.append(mb)
    checks = []
    p = stats.ks_2samp(np.concatenate(log_a), np.concatenate(log_b)).pvalue
    checks.append(Check("log-intensity two-sample KS", p >= alpha_lambda,
                        f"p={p:.4g} (alpha={alpha_lambda})"))
    for label, iv in (("time-rescaling", iv_a), ("thinning", iv_b)):
        iv = np.concatenate(iv)
        d = ks_exponential(iv)
        crit = ks_critical(iv.size, alpha_intervals)
        checks.append(Check(f"{label} rescaled-interval KS", d <= crit,
                            f"D={d:.4g} crit={crit:.4g} n={iv.size}"))
    mk = config.marks
    m = np.concatenate(marks).astype(np.float64)
    ratio = mk.second_moment() / mk.mean()
    checks.append(Check("mark moment identity", abs(ratio - (config.omega + 1)) <= 1e-12,
                        f"E[m^2]/E[m]={ratio!r}"))
    if config.omega == 0:
        checks.append(Check("unit marks", bool(np.all(m == 1)), f"max mark {m.max():g}"))
    else:
        sd = math.sqrt(mk.second_moment() - mk.mean() ** 2)
        z = (m.mean() - mk.mean()) / (sd / math.sqrt(m.size))
        checks.append(Check("empirical mark mean", abs(z) <= 5.0,
                            f"mean={m.mean():.5g} exact={mk.mean():.5g} z={z:.2f}"))
    checks.append(Check("solver residual", max_res <= 1e-10, f"max relative residual {max_res:.3g}"))
    return checks


def cmd_validate(args):
    config = sim_config_from_args(args)
    checks = run_validation(config, pairs=args.pairs, solver_rtol=args.solver_rtol)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    if args.report:
        _write_json(args.report, {"config": config.to_dict(), "pairs": args.pairs,
                                  "checks": [c.__dict__ for c in checks]})
    return 0 if all(c.passed for c in checks) else 1


# --- campaign ----------------------------------------------------------------

def _campaign_run(job):
    cfg_dict, run_dir, write_events = job
    config = SimConfig.from_dict(cfg_dict)
    hist = LogHistogram.for_background(config.nu0)
    run_simulation(config, run_dir, write_events=write_events, histogram=hist)
    _write_json(Path(run_dir) / "histogram.json", hist.to_dict())
    return run_dir


def campaign_jobs(camp: Campaign):
    fam = FAMILIES[camp.family]
    root = Path(camp.output_dir)
    jobs = []
    for c, (nu0, omega, n) in enumerate(camp.cells()):
        for r in range(camp.runs_per_cell):
            cfg = SimConfig(nu0, omega, fam.kernel(n), camp.t_max,
                            derive_seed(camp.base_seed, c, r), camp.burn_in, camp.obs_dt)
            jobs.append((c, r, cfg, root / f"cell{c:03d}" / f"run{r:03d}"))
    return jobs


def cmd_campaign(args):
    d = _load_json(args.config) if args.config else {}
    for key, flag in (("family", "family"), ("nu0s", "nu0"), ("omegas", "omega"), ("ns", "n"),
                      ("t_max", "t_max"), ("runs_per_cell", "runs"), ("base_seed", "seed"),
                      ("obs_dt", "obs_dt")):
        val = getattr(args, flag)
        if val is not None:
            d[key] = val
    if "base_seed" not in d:
        raise UsageError("seed: required (flag or config file)")
    if "family" not in d:
        raise UsageError("family: required (flag or config file)")
    d.setdefault("output_dir", str(Path(args.out) if args.out else
                                   default_output_dir() / f"campaign-{d['family']}"))
    try:
        camp = Campaign.from_dict(d)
        jobs = campaign_jobs(camp)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc))
    root = Path(camp.output_dir)
    root.mkdir(parents=True, exist_ok=True)
    _write_json(root / "campaign.json", {**camp.to_dict(), "seed_derivation": SEED_DERIVATION})
    payload = [(cfg.to_dict(), str(path), args.events) for _, _, cfg, path in jobs]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            list(pool.map(_campaign_run, payload))
    else:
        for job in payload:
            _campaign_run(job)
    # sequential merge of per-run histograms, one fit per cell
    summary = []
    for c, cell in enumerate(camp.cells()):
        cell_jobs = [j for j in jobs if j[0] == c]
        hist = None
        for _, _, _, path in cell_jobs:
            with open(path / "histogram.json") as fh:
                h = LogHistogram.from_dict(json.load(fh))
            hist = h if hist is None else hist.merge(h)
        cell_dir = root / f"cell{c:03d}"
        write_histogram(cell_dir / "histogram.csv", hist)
        try:
            report = analyze_histogram(hist, cell_jobs[0][2])
        except ValueError as exc:
            cfg = cell_jobs[0][2]
            pred = TheoryPrediction.for_config(cfg.nu0, cfg.omega, cfg.kernel)
            report = {"error": str(exc), "theory_exponent": pred.exponent,
                      "theory_cutoff": _json_float(pred.cutoff)}
        report.update({"nu0": cell[0], "omega": cell[1], "n": cell[2]})
        _write_json(cell_dir / "fit.json", report)
        summary.append(report)
    with open(root / "summary.csv", "w", newline="") as fh:
        cols = ["nu0", "omega", "n", "slope", "stderr", "theory_exponent", "theory_cutoff"]
        w = csv.DictWriter(fh, fieldnames=cols, extrasaction="ignore")
        w.writeheader()
        w.writerows(summary)
    print(f"{len(jobs)} runs over {len(camp.cells())} cells -> {root}")
    return 0


# --- parser ------------------------------------------------------------------

def _add_sim_flags(p):
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--nu0", type=float, help="background intensity")
    p.add_argument("--omega", type=float, help="mark overdispersion (0 = unit marks)")
    p.add_argument("--kernel", help="n:tau[,n:tau...] or powerlaw:gamma=G,n=N,K=K")
    p.add_argument("--seed", type=int, help="RNG seed (required, flag or config file)")
    p.add_argument("--allow-critical", action="store_true",
                   help="accept kernels with branching ratio >= 1")


def build_parser():
    parser = argparse.ArgumentParser(prog="senbd", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="time-rescaling simulation to events/observations CSV")
    _add_sim_flags(p)
    p.add_argument("--tmax", dest="t_max", type=float, help="horizon")
    p.add_argument("--burn-in", dest="burn_in", type=float, help="default 1%% of tmax")
    p.add_argument("--obs-dt", dest="obs_dt", type=float, help="observation spacing (default 1)")
    p.add_argument("--out", help=f"output directory (default under ${OUTPUT_ENV})")
    p.add_argument("--no-events", action="store_true", help="skip events.csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("dt-simulate", help="discrete-time NBD recursion to CSV")
    _add_sim_flags(p)
    p.add_argument("--steps", type=float, help="number of unit steps")
    p.add_argument("--stride", type=int, default=1, help="keep every stride-th row")
    p.add_argument("--out", help=f"output directory (default under ${OUTPUT_ENV})")
    p.set_defaults(func=cmd_dt_simulate)

    p = sub.add_parser("analyze", help="histogram and slope fit of an observation CSV")
    p.add_argument("observations", help="observations.csv or the run directory")
    p.add_argument("--manifest", help="run manifest (default: next to the observations)")
    p.add_argument("--window", type=_float_pair, help="fit window lo,hi")
    p.add_argument("--bins-per-decade", type=int, default=20)
    p.add_argument("--out", help="output directory (default: next to the observations)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("theory", help="table of predicted exponents and cutoffs")
    p.add_argument("--figure", type=int, nargs="*", choices=sorted(BY_FIGURE))
    p.add_argument("--nu0", type=_float_list, help="comma-separated grid")
    p.add_argument("--omega", type=_float_list, help="comma-separated grid")
    p.add_argument("--n", type=_float_list, help="branching ratios below 1")
    p.add_argument("--kernel", help="custom kernel instead of the figure families")
    p.add_argument("--output", help="also write the table as CSV")
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("validate", help="cross-check samplers, marks and solver")
    p.add_argument("--nu0", type=float, default=0.2)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--kernel", default="0.9:1")
    p.add_argument("--tmax", dest="t_max", type=float, default=1e4)
    p.add_argument("--obs-dt", dest="obs_dt", type=float, default=10.0)
    p.add_argument("--burn-in", dest="burn_in", type=float, default=None)
    p.add_argument("--pairs", type=int, default=10)
    p.add_argument("--seed", type=int, default=2026)
    p.add_argument("--allow-critical", action="store_true")
    p.add_argument("--report", help="write the check results as JSON")
    p.add_argument("--solver-rtol", type=float, default=DEFAULT_RTOL, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("campaign", help="grid of runs for one kernel family, merged per cell")
    p.add_argument("--config", help="JSON campaign file; flags override its values")
    p.add_argument("--family", choices=sorted(FAMILIES))
    p.add_argument("--nu0", type=_float_list)
    p.add_argument("--omega", type=_float_list)
    p.add_argument("--n", type=_float_list)
    p.add_argument("--tmax", dest="t_max", type=float)
    p.add_argument("--obs-dt", dest="obs_dt", type=float)
    p.add_argument("--runs", type=int, help="runs per cell")
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--events", action="store_true", help="also keep per-run events.csv")
    p.add_argument("--out", help=f"output directory (default under ${OUTPUT_ENV})")
    p.set_defaults(func=cmd_campaign)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"senbd {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Ensemble runner and simulation-vs-theory comparison harness.

Reproduces the model's validation program: agreement of the agent-based
simulation with the mass-action SIR curve, empirical contact-rate checks,
the pi/4 chord-profile reduction, critical-density scans, and sweeps over
the communication radius. Runs are embarrassingly parallel and every result
is deterministic given (spec, seed_base) regardless of parallelism degree.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .abm import ConfigError, SimConfig, SimOutput, run_simulation
from .kinetics import KineticParams, beta_basic, beta_chord, critical_density
from .sir import SirParams, SirState, final_size, integrate_sir, peak_infectives

__all__ = [
    "EnsembleSpec",
    "ComparisonMetrics",
    "ThresholdPoint",
    "ProfileRatioResult",
    "derive_seed",
    "run_ensemble",
    "compare_sim_ode",
    "r_sweep",
    "threshold_scan",
    "profile_ratio_experiment",
    "fit_growth_rate",
    "OUTBREAK_FRACTION",
]

# a run counts as a major outbreak when its ever-infected fraction exceeds this
OUTBREAK_FRACTION = 0.10

# growth-rate fits use the window from I = 10 up to I = n / GROWTH_WINDOW_DIV
GROWTH_WINDOW_LO = 10.0
GROWTH_WINDOW_DIV = 20.0


@dataclass(frozen=True)
class EnsembleSpec:
    """A batch of independent runs; run k uses a seed derived from
    (seed_base, k), so the ensemble is reproducible and order-independent."""

    base: SimConfig
    runs: int
    seed_base: int
    parallelism: int = 1

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.parallelism < 1:
            raise ValueError(f"parallelism must be >= 1, got {self.parallelism}")


@dataclass(frozen=True)
class ComparisonMetrics:
    """Quantitative agreement between the ensemble-mean simulation curve and
    the mass-action ODE. Error norms are fractions of the population size."""

    linf_norm: float            # max_t |I_sim_mean - I_ode| / n
    peak_time_err: float        # |t_peak_sim - t_peak_ode| / t_peak_ode
    peak_height_err: float      # |I_peak_sim - I_peak_ode| / n
    t_peak_sim: float
    t_peak_ode: float
    i_peak_sim: float
    i_peak_ode: float
    final_size_sim_mean: float  # ever-infected count, outbreak runs
    final_size_sim_sd: float
    final_size_eq19: float
    growth_rate_sim: float | None  # /day; None when no run admits a fit
    beta_model: float
    n_outbreaks: int
    n_runs: int


@dataclass(frozen=True)
class ThresholdPoint:
    density_factor: float       # rho / rho_c
    rho: float
    outbreak_probability: float
    mean_final_fraction: float          # over all runs
    outbreak_mean_final_fraction: float  # over outbreak runs only (nan if none)


@dataclass(frozen=True)
class ProfileRatioResult:
    growth_ratio: float | None      # (growth_chord + delta) / (growth_uniform + delta)
    growth_uniform: float | None
    growth_chord: float | None
    entry_acceptance_ratio: float   # per-entry acceptance / p, direct counting
    n_entries: int
    expected: float                 # pi/4


def derive_seed(seed_base: int, k: int) -> int:
    """Deterministic child seed for run k of an ensemble."""
    return int(np.random.SeedSequence([seed_base, k]).generate_state(1)[0])


def _run_one(args) -> SimOutput:
    k, config = args
    try:
        return run_simulation(config)
    except ConfigError as exc:
        raise ConfigError([f"run {k}: {v}" for v in exc.violations]) from exc


def run_ensemble(spec: EnsembleSpec) -> list[SimOutput]:
    """All runs of the ensemble, ordered by run index."""
    jobs = [(k, replace(spec.base, seed=derive_seed(spec.seed_base, k)))
            for k in range(spec.runs)]
    if spec.parallelism == 1:
        return [_run_one(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=spec.parallelism) as pool:
        return list(pool.map(_run_one, jobs))


def model_beta(config: SimConfig) -> float:
    """The analytic transmission rate matching the config's trial profile."""
    params = KineticParams(config.rho, config.R, config.speed.mean,
                           config.p, config.delta)
    return beta_chord(params) if config.profile == "chord" else beta_basic(params)


def fit_growth_rate(times: np.ndarray, i_curve: np.ndarray, n: int) -> float | None:
    """Least-squares slope of log I(t) over the early-growth window
    I in [10, n/20]; None when the curve never spans the window."""
    lo, hi = GROWTH_WINDOW_LO, n / GROWTH_WINDOW_DIV
    if hi <= lo:
        return None
    above = np.flatnonzero(i_curve >= lo)
    if len(above) == 0:
        return None
    start = above[0]
    crossed = np.flatnonzero(i_curve[start:] >= hi)
    if len(crossed) == 0:
        return None
    stop = start + crossed[0] + 1
    window = slice(start, stop)
    t, y = times[window], i_curve[window]
    mask = y > 0
    if mask.sum() < 2:
        return None
    slope = np.polyfit(t[mask], np.log(y[mask]), 1)[0]
    return float(slope)


def _ode_infectives(config: SimConfig, beta: float, times: np.ndarray):
    params = SirParams(beta, config.delta, config.n)
    init = SirState(config.n - config.initial_infected,
                    config.initial_infected, 0.0)
    series = integrate_sir(params, init, float(times[-1]), dt=float(times[1] - times[0]))
    return series


def compare_sim_ode(spec: EnsembleSpec) -> ComparisonMetrics:
    """Ensemble-mean infective curve against the mass-action ODE.

    The ODE uses beta_basic or beta_chord per the config's profile, with the
    config's delta, n, and initial infectives. The simulation mean is taken
    over major-outbreak runs (ever-infected fraction > 10%) aligned on
    absolute time; minor stochastic fizzles, which the deterministic ODE
    cannot represent, are excluded from the curve but reported via the
    outbreak count.
    """
    outputs = run_ensemble(spec)
    cfg = spec.base
    n = cfg.n
    beta = model_beta(cfg)
    times = outputs[0].times

    outbreaks = [o for o in outputs if o.ever_infected_fraction > OUTBREAK_FRACTION]
    if outbreaks:
        i_mean = np.mean([o.i for o in outbreaks], axis=0)
        finals = np.array([n * o.ever_infected_fraction for o in outbreaks])
    else:
        i_mean = np.mean([o.i for o in outputs], axis=0)
        finals = np.array([n * o.ever_infected_fraction for o in outputs])

    ode = _ode_infectives(cfg, beta, times)
    i_ode = ode.i
    linf = float(np.max(np.abs(i_mean - i_ode)) / n)

    t_peak_ode, i_peak_ode = peak_infectives(ode)
    k = int(np.argmax(i_mean))
    t_peak_sim, i_peak_sim = float(times[k]), float(i_mean[k])
    peak_time_err = (abs(t_peak_sim - t_peak_ode) / t_peak_ode
                     if t_peak_ode > 0 else 0.0)
    peak_height_err = abs(i_peak_sim - i_peak_ode) / n

    rates = [fit_growth_rate(o.times, o.i, n) for o in outbreaks]
    rates = [r for r in rates if r is not None]
    growth = float(np.mean(rates)) if rates else None

    return ComparisonMetrics(
        linf_norm=linf,
        peak_time_err=peak_time_err,
        peak_height_err=peak_height_err,
        t_peak_sim=t_peak_sim,
        t_peak_ode=t_peak_ode,
        i_peak_sim=i_peak_sim,
        i_peak_ode=i_peak_ode,
        final_size_sim_mean=float(np.mean(finals)),
        final_size_sim_sd=float(np.std(finals, ddof=1)) if len(finals) > 1 else 0.0,
        final_size_eq19=final_size(SirParams(beta, cfg.delta, n)),
        growth_rate_sim=growth,
        beta_model=beta,
        n_outbreaks=len(outbreaks),
        n_runs=len(outputs),
    )


def r_sweep(base: SimConfig, radii, runs: int, seed_base: int | None = None,
            parallelism: int = 1):
    """One comparison row per communication radius.

    Returns a list of (R, ComparisonMetrics | None, diagnostic) tuples;
    radii whose configuration is invalid are skipped with the diagnostic
    recorded. When base.dt is None the step defaults rescale with R.
    """
    if seed_base is None:
        seed_base = base.seed
    rows = []
    for R in radii:
        cfg = replace(base, R=float(R))
        errors, _ = cfg.validate()
        if errors:
            rows.append((float(R), None, "; ".join(errors)))
            continue
        metrics = compare_sim_ode(EnsembleSpec(cfg, runs, seed_base, parallelism))
        rows.append((float(R), metrics, ""))
    return rows


def threshold_scan(base: SimConfig, density_factors, runs: int,
                   seed_base: int | None = None,
                   parallelism: int = 1) -> list[ThresholdPoint]:
    """Outbreak probability and final fraction at densities factor * rho_c,
    with rho_c = delta / (2 R v_bar p) from the base parameters."""
    if seed_base is None:
        seed_base = base.seed
    rho_c = critical_density(base.R, base.speed.mean, base.p, base.delta)
    points = []
    for factor in density_factors:
        if factor <= 0:
            raise ValueError(f"density factor must be positive, got {factor}")
        cfg = replace(base, rho=factor * rho_c)
        outputs = run_ensemble(EnsembleSpec(cfg, runs, seed_base, parallelism))
        fractions = np.array([o.ever_infected_fraction for o in outputs])
        big = fractions > OUTBREAK_FRACTION
        points.append(ThresholdPoint(
            density_factor=float(factor),
            rho=cfg.rho,
            outbreak_probability=float(np.mean(big)),
            mean_final_fraction=float(np.mean(fractions)),
            outbreak_mean_final_fraction=(float(np.mean(fractions[big]))
                                          if big.any() else float("nan")),
        ))
    return points


def profile_ratio_experiment(base: SimConfig, runs: int,
                             seed_base: int | None = None,
                             parallelism: int = 1,
                             min_entries: int = 100_000) -> ProfileRatioResult:
    """Measured chord-to-uniform transmission reduction, two ways.

    Growth route: ensembles under both profiles with identical seeds; the
    ratio (growth_chord + delta) / (growth_uniform + delta) estimates
    beta_chord / beta_basic = pi/4. Entry route: a transmission-disabled run
    supplies >= min_entries entry impacts, each given a chord-weighted
    Bernoulli trial; the acceptance fraction divided by p also estimates pi/4.
    """
    if seed_base is None:
        seed_base = base.seed
    delta = base.delta

    def ensemble_growth(profile: str) -> float | None:
        cfg = replace(base, profile=profile)
        outputs = run_ensemble(EnsembleSpec(cfg, runs, seed_base, parallelism))
        rates = [fit_growth_rate(o.times, o.i, cfg.n) for o in outputs]
        rates = [r for r in rates if r is not None]
        return float(np.mean(rates)) if rates else None

    g_uniform = ensemble_growth("uniform")
    g_chord = ensemble_growth("chord")
    ratio = None
    if g_uniform is not None and g_chord is not None and g_uniform + delta != 0:
        ratio = (g_chord + delta) / (g_uniform + delta)

    # direct per-entry acceptance counting on a transmission-disabled run
    impacts = _collect_impacts(base, seed_base, min_entries)
    p = base.p if base.p > 0 else 0.1
    R = base.R
    rng = np.random.default_rng(derive_seed(seed_base, 1_000_003))
    probs = p * np.sqrt(np.clip(R * R - impacts ** 2, 0.0, None)) / R
    accepted = rng.random(len(impacts)) < probs
    acceptance_ratio = float(np.mean(accepted)) / p

    return ProfileRatioResult(
        growth_ratio=ratio,
        growth_uniform=g_uniform,
        growth_chord=g_chord,
        entry_acceptance_ratio=acceptance_ratio,
        n_entries=len(impacts),
        expected=math.pi / 4.0,
    )


def _collect_impacts(base: SimConfig, seed_base: int, min_entries: int) -> np.ndarray:
    """Entry impact parameters from transmission-disabled runs, at least
    min_entries of them (extends the observation window as needed)."""
    from .kinetics import contact_rate_population

    cr = contact_rate_population(base.speed,
                                 KineticParams(base.rho, base.R, base.speed.mean,
                                               0.0, base.delta))
    expected_per_day = max(cr * base.n / 2.0, 1.0)
    t_obs = max(1.2 * min_entries / expected_per_day, 10 * base.step)
    chunks = []
    total = 0
    for attempt in range(8):
        cfg = replace(base, p=0.0, track_all_contacts=True, t_end=t_obs,
                      seed=derive_seed(seed_base, 500_000 + attempt))
        out = run_simulation(cfg)
        chunks.append(out.entry_impacts)
        total += len(out.entry_impacts)
        if total >= min_entries:
            break
    return np.concatenate(chunks)

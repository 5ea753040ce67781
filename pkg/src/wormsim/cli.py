"""Command-line interface: analytics, single runs, and experiments.

Subcommands:
    analytic                closed-form rates, threshold verdict, final size
    simulate                one agent-based run -> series/events CSV + manifest
    experiment <name>       compare | rsweep | threshold | profile-ratio | contact-rate

Config files are flat ``key = value`` text with explicit unit suffixes
(``speed = "2 km/day"``); '#' starts a comment. Every output is accompanied
by a manifest that is itself a valid config file, so a run can be reproduced
exactly with ``wormsim simulate --config <manifest>``. Exit codes: 0 success,
1 usage/configuration error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .abm import ConfigError, SimConfig, measure_contact_rate, run_simulation
from .kinetics import (Constant, KineticParams, MaxwellBoltzmann2D, beta_basic,
                       beta_chord, contact_rate_population, critical_density,
                       mean_spacing, r0)
from .sir import SirParams, epidemic_threshold, final_size
from .experiments import (EnsembleSpec, compare_sim_ode, profile_ratio_experiment,
                          r_sweep, threshold_scan)
from .units import (UnitError, parse_density, parse_dimensionless, parse_length,
                    parse_rate, parse_speed, parse_time)

EXPERIMENTS = ("compare", "rsweep", "threshold", "profile-ratio", "contact-rate")


class UsageError(ValueError):
    pass


# -- config files -----------------------------------------------------------

def parse_kv_file(path: Path) -> dict[str, str]:
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        kv[key.strip()] = value.strip().strip('"').strip("'")
    return kv


def build_sim_config(kv: dict[str, str]) -> SimConfig:
    """SimConfig from key-value text; everything converted to meters/days."""
    try:
        required = ("n", "density", "radius", "p", "delta", "speed", "t_end")
        missing = [k for k in required if k not in kv]
        if missing:
            raise UsageError(f"missing config keys: {', '.join(missing)}")
        speed_value = parse_speed(kv["speed"])
        model_name = kv.get("speed_model", "constant").lower()
        if model_name == "constant":
            speed = Constant(speed_value)
        elif model_name in ("maxwell", "maxwell-boltzmann", "rayleigh"):
            speed = MaxwellBoltzmann2D(speed_value)
        else:
            raise UsageError(f"unknown speed_model {model_name!r}")
        return SimConfig(
            n=int(kv["n"]),
            rho=parse_density(kv["density"]),
            R=parse_length(kv["radius"]),
            p=parse_dimensionless(kv["p"]),
            delta=parse_rate(kv["delta"]),
            speed=speed,
            profile=kv.get("profile", "uniform"),
            dt=parse_time(kv["dt"]) if "dt" in kv else None,
            t_end=parse_time(kv["t_end"]),
            seed=int(kv["seed"]) if "seed" in kv else 0,
            initial_infected=int(kv.get("initial_infected", 1)),
        )
    except (UnitError, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(str(exc)) from exc


def config_to_kv(config: SimConfig) -> dict[str, str]:
    """Serialize a SimConfig as unit-tagged key-value text (internal units)."""
    kv = {
        "n": str(config.n),
        "density": f"{config.rho!r} /m^2",
        "radius": f"{config.R!r} m",
        "p": repr(config.p),
        "delta": f"{config.delta!r} /day",
        "speed": f"{config.speed.mean!r} m/day",
        "speed_model": ("constant" if isinstance(config.speed, Constant)
                        else "maxwell"),
        "profile": config.profile,
        "t_end": f"{config.t_end!r} day",
        "seed": str(config.seed),
        "initial_infected": str(config.initial_infected),
    }
    if config.dt is not None:
        kv["dt"] = f"{config.dt!r} day"
    return kv


def write_manifest(path: Path, config: SimConfig, command: str,
                   source_file: Path | None = None,
                   extra: dict[str, str] | None = None) -> None:
    lines = [
        "# wormsim run manifest (valid config file; rerun with "
        "'wormsim simulate --config <this file>')",
        f"# version = {__version__}",
        f"# command = {command}",
        f"# created = {datetime.now(timezone.utc).isoformat()}",
        "# csv_schema = series:t,s,i,p events:t,source,target,impact_m",
    ]
    if source_file is not None:
        digest = hashlib.sha256(source_file.read_bytes()).hexdigest()
        lines.append(f"# input_sha256 = {digest}")
    for key, value in config_to_kv(config).items():
        value_out = f'"{value}"' if " " in value else value
        lines.append(f"{key} = {value_out}")
    for key, value in (extra or {}).items():
        lines.append(f"{key} = {value}")
    path.write_text("\n".join(lines) + "\n")


def _params_hash(config: SimConfig) -> str:
    text = ";".join(f"{k}={v}" for k, v in sorted(config_to_kv(config).items()))
    return hashlib.sha256(text.encode()).hexdigest()[:10]


# -- analytic ---------------------------------------------------------------

def _add_analytic_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--density", required=True,
                     help='device density, e.g. "3000 /km^2" or "0.003 /m^2"')
    sub.add_argument("--speed", required=True, help='mean speed, e.g. "2 km/day"')
    sub.add_argument("--radius", required=True, help='contact radius, e.g. "5 m"')
    sub.add_argument("--p", required=True, help="transmission probability")
    sub.add_argument("--delta", required=True, help='recovery rate, e.g. "1 /day"')
    sub.add_argument("--n", type=float, default=10000.0, help="population size")
    sub.add_argument("--csv", type=Path, help="also write the report as CSV")


def cmd_analytic(args) -> int:
    rho = parse_density(args.density)
    v_bar = parse_speed(args.speed)
    R = parse_length(args.radius)
    p = parse_dimensionless(args.p)
    delta = parse_rate(args.delta)
    params = KineticParams(rho, R, v_bar, p, delta)

    cr = contact_rate_population(Constant(v_bar), params)
    bb, bc = beta_basic(params), beta_chord(params)
    rows = [
        ("contact_rate", cr, "/day"),
        ("beta_basic", bb, "/day"),
        ("beta_chord", bc, "/day"),
        ("mean_spacing", mean_spacing(rho), "m"),
    ]
    if p > 0 and delta > 0:
        rows.append(("critical_density", critical_density(R, v_bar, p, delta), "/m^2"))
    if delta > 0:
        rows += [("r0_basic", r0(bb, delta), ""), ("r0_chord", r0(bc, delta), "")]
        rows += [
            ("final_size_fraction_basic", final_size(SirParams(bb, delta, args.n)) / args.n, ""),
            ("final_size_fraction_chord", final_size(SirParams(bc, delta, args.n)) / args.n, ""),
        ]
    verdict = "epidemic possible" if epidemic_threshold(params) else "no epidemic"
    print(f"inputs: rho={rho:g} /m^2, R={R:g} m, v_bar={v_bar:g} m/day, "
          f"p={p:g}, delta={delta:g} /day, n={args.n:g}")
    for name, value, unit in rows:
        print(f"{name:28s} {value:14.6g} {unit}")
    print(f"{'threshold_verdict':28s} {verdict}  (2*R*rho*v_bar*p "
          f"{'>' if epidemic_threshold(params) else '<='} delta)")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("quantity,value,unit\n")
            for name, value, unit in rows:
                fh.write(f"{name},{value:.10g},{unit}\n")
            fh.write(f"threshold_verdict,{verdict},\n")
    return 0


# -- simulate ---------------------------------------------------------------

def _config_from_args(args) -> tuple[SimConfig, Path | None]:
    kv: dict[str, str] = {}
    source = None
    if args.config:
        source = Path(args.config)
        kv.update(parse_kv_file(source))
    for key in ("n", "density", "radius", "p", "delta", "speed", "speed_model",
                "profile", "dt", "t_end", "initial_infected"):
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            kv[key] = str(value)
    if args.seed is not None:
        kv["seed"] = str(args.seed)
    elif "seed" not in kv:
        seed = int(np.random.SeedSequence().generate_state(1)[0])
        kv["seed"] = str(seed)
        print(f"warning: no seed given; generated seed {seed} "
              f"(recorded in manifest)", file=sys.stderr)
    return build_sim_config(kv), source


def _add_override_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", type=Path, help="key=value config file")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--out", type=Path, default=Path("."), help="output directory")
    for key, help_text in [
        ("n", "agent count"), ("density", "agents per area, unit-tagged"),
        ("radius", "contact radius"), ("p", "transmission probability"),
        ("delta", "recovery rate"), ("speed", "mean speed"),
        ("speed_model", "constant | maxwell"), ("profile", "uniform | chord"),
        ("dt", "time step"), ("t_end", "run length"),
        ("initial_infected", "index infectives"),
    ]:
        sub.add_argument(f"--{key.replace('_', '-')}", default=None, help=help_text)


def cmd_simulate(args) -> int:
    config, source = _config_from_args(args)
    errors, _ = config.validate()
    if errors:
        for e in errors:
            print(f"config error: {e}", file=sys.stderr)
        return 1
    out_dir = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    output = run_simulation(config)
    stem = f"run_{_params_hash(config)}_{config.seed}"
    output.series_to_csv(out_dir / f"{stem}_series.csv")
    output.events_to_csv(out_dir / f"{stem}_events.csv")
    write_manifest(out_dir / f"{stem}_manifest.txt", config,
                   command="simulate", source_file=source)
    print(f"wrote {stem}_series.csv, {stem}_events.csv, {stem}_manifest.txt "
          f"in {out_dir}")
    print(f"final counts: S={output.counts[-1, 0]}, I={output.counts[-1, 1]}, "
          f"P={output.counts[-1, 2]}; ever infected "
          f"{output.ever_infected_fraction:.3f}")
    return 0


# -- experiment -------------------------------------------------------------

def _parse_list(text: str, parser) -> list[float]:
    parts = [part for part in text.replace(",", " ").split() if part]
    if not parts:
        raise UsageError("empty list")
    # a trailing bare unit applies to every element: "10 20 40 m"
    unit = ""
    if parts and not parts[-1][0].isdigit() and not parts[-1][0] in "+-.":
        unit = " " + parts.pop()
        if not parts:
            raise UsageError("empty list")
    return [parser(part + unit) for part in parts]


def cmd_experiment(args) -> int:
    if args.name not in EXPERIMENTS:
        print(f"unknown experiment {args.name!r}; valid names: "
              f"{', '.join(EXPERIMENTS)}", file=sys.stderr)
        return 1
    kv = parse_kv_file(Path(args.spec)) if args.spec else {}
    sim_kv = {k: v for k, v in kv.items()
              if k in ("n", "density", "radius", "p", "delta", "speed",
                       "speed_model", "profile", "dt", "t_end", "seed",
                       "initial_infected")}
    if args.seed is not None:
        sim_kv["seed"] = str(args.seed)
    base = build_sim_config(sim_kv)
    runs = args.runs if args.runs is not None else int(kv.get("runs", 10))
    parallelism = (args.parallel if args.parallel is not None
                   else int(kv.get("parallelism", 1)))
    seed_base = base.seed
    out_dir = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{args.name.replace('-', '_')}_{_params_hash(base)}_{seed_base}"
    summary: list[str] = [f"experiment = {args.name}", f"runs = {runs}",
                          f"seed_base = {seed_base}"]

    if args.name == "compare":
        metrics = compare_sim_ode(EnsembleSpec(base, runs, seed_base, parallelism))
        _write_metrics_csv(out_dir / f"{stem}.csv", [("", metrics)])
        summary += _metrics_lines(metrics)
    elif args.name == "rsweep":
        if "radii" not in kv:
            print("rsweep requires 'radii' in the spec file, e.g. "
                  'radii = "10 20 40 m"', file=sys.stderr)
            return 1
        radii = _parse_list(kv["radii"], parse_length)
        rows = r_sweep(base, radii, runs, seed_base, parallelism)
        _write_metrics_csv(out_dir / f"{stem}.csv",
                           [(f"{R:g}", m) for R, m, _ in rows if m is not None])
        for R, m, diag in rows:
            if m is None:
                summary.append(f"R = {R:g} m skipped: {diag}")
            else:
                summary.append(f"R = {R:g} m: linf = {m.linf_norm:.4f}, "
                               f"t_peak = {m.t_peak_sim:.3f} d")
    elif args.name == "threshold":
        factors = _parse_list(kv.get("factors", "0.5 1.5 3.0"),
                              parse_dimensionless)
        points = threshold_scan(base, factors, runs, seed_base, parallelism)
        with open(out_dir / f"{stem}.csv", "w") as fh:
            fh.write("density_factor,rho_per_m2,outbreak_probability,"
                     "mean_final_fraction,outbreak_mean_final_fraction\n")
            for pt in points:
                fh.write(f"{pt.density_factor:g},{pt.rho:.10g},"
                         f"{pt.outbreak_probability:.4f},"
                         f"{pt.mean_final_fraction:.6f},"
                         f"{pt.outbreak_mean_final_fraction:.6f}\n")
        for pt in points:
            summary.append(f"factor {pt.density_factor:g}: outbreak_prob = "
                           f"{pt.outbreak_probability:.3f}, mean_final_frac = "
                           f"{pt.mean_final_fraction:.4f}")
    elif args.name == "profile-ratio":
        result = profile_ratio_experiment(base, runs, seed_base, parallelism)
        summary += [
            f"growth_ratio = {result.growth_ratio}",
            f"growth_uniform = {result.growth_uniform}",
            f"growth_chord = {result.growth_chord}",
            f"entry_acceptance_ratio = {result.entry_acceptance_ratio:.5f}",
            f"n_entries = {result.n_entries}",
            f"expected = {result.expected:.5f}",
        ]
        if result.growth_ratio is None:
            summary.append("warning: growth fit failed in at least one arm")
    elif args.name == "contact-rate":
        t_obs = parse_time(kv.get("t_obs", "1 day"))
        stats = measure_contact_rate(replace(base, p=0.0), t_obs)
        analytic = contact_rate_population(
            base.speed, KineticParams(base.rho, base.R, base.speed.mean,
                                      0.0, base.delta))
        summary += [
            f"empirical_contact_rate = {stats.mean_rate:.4f} /day",
            f"ci95_halfwidth = {stats.ci_halfwidth:.4f} /day",
            f"analytic_contact_rate = {analytic:.4f} /day",
            f"relative_error = {abs(stats.mean_rate - analytic) / analytic:.5f}",
            f"total_entries = {stats.total_entries}",
            f"t_obs = {stats.t_obs:g} day",
        ]

    (out_dir / f"{stem}_summary.txt").write_text("\n".join(summary) + "\n")
    write_manifest(out_dir / f"{stem}_manifest.txt", base,
                   command=f"experiment {args.name}",
                   source_file=Path(args.spec) if args.spec else None,
                   extra={"runs": str(runs), "parallelism": str(parallelism)})
    print("\n".join(summary))
    print(f"wrote {stem}_summary.txt and {stem}_manifest.txt in {out_dir}")
    return 0


def _metrics_lines(m) -> list[str]:
    lines = [
        f"beta_model = {m.beta_model:.6g} /day",
        f"linf_norm = {m.linf_norm:.5f}",
        f"peak_time_err = {m.peak_time_err:.5f}",
        f"peak_height_err = {m.peak_height_err:.5f}",
        f"t_peak_sim = {m.t_peak_sim:.4f} day   t_peak_ode = {m.t_peak_ode:.4f} day",
        f"final_size_sim = {m.final_size_sim_mean:.1f} +/- {m.final_size_sim_sd:.1f}",
        f"final_size_eq19 = {m.final_size_eq19:.1f}",
        f"outbreak_runs = {m.n_outbreaks}/{m.n_runs}",
    ]
    if m.growth_rate_sim is not None:
        lines.append(f"growth_rate_sim = {m.growth_rate_sim:.4f} /day")
    else:
        lines.append("growth_rate_sim = unavailable (no run admitted a fit)")
    return lines


def _write_metrics_csv(path: Path, rows) -> None:
    with open(path, "w") as fh:
        fh.write("label,beta_model,linf_norm,peak_time_err,peak_height_err,"
                 "t_peak_sim,t_peak_ode,i_peak_sim,i_peak_ode,"
                 "final_size_sim_mean,final_size_sim_sd,final_size_eq19,"
                 "growth_rate_sim,n_outbreaks,n_runs\n")
        for label, m in rows:
            growth = f"{m.growth_rate_sim:.6g}" if m.growth_rate_sim is not None else ""
            fh.write(f"{label},{m.beta_model:.6g},{m.linf_norm:.6g},"
                     f"{m.peak_time_err:.6g},{m.peak_height_err:.6g},"
                     f"{m.t_peak_sim:.6g},{m.t_peak_ode:.6g},"
                     f"{m.i_peak_sim:.6g},{m.i_peak_ode:.6g},"
                     f"{m.final_size_sim_mean:.6g},{m.final_size_sim_sd:.6g},"
                     f"{m.final_size_eq19:.6g},{growth},"
                     f"{m.n_outbreaks},{m.n_runs}\n")


# -- entry point ------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wormsim",
        description="Opportunistic worm spread in mobile device populations")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    analytic = sub.add_parser("analytic", help="closed-form rates and final size")
    _add_analytic_args(analytic)
    analytic.set_defaults(func=cmd_analytic)

    simulate = sub.add_parser("simulate", help="one agent-based run")
    _add_override_args(simulate)
    simulate.set_defaults(func=cmd_simulate)

    experiment = sub.add_parser("experiment", help="ensemble experiments")
    experiment.add_argument("name", help=f"one of: {', '.join(EXPERIMENTS)}")
    experiment.add_argument("--spec", type=Path, help="experiment spec file")
    experiment.add_argument("--out", type=Path, default=Path("."))
    experiment.add_argument("--runs", type=int, default=None)
    experiment.add_argument("--parallel", type=int, default=None)
    experiment.add_argument("--seed", type=int, default=None)
    experiment.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, UnitError, ConfigError) as exc:
        if isinstance(exc, ConfigError):
            for v in exc.violations:
                print(f"config error: {v}", file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

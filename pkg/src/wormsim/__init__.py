"""Opportunistic worm spread between mobile short-range wireless devices.

Analytic kinetic-theory contact and transmission rates, a mass-action SIR
model, an individual-based moving-agent simulator, and an experiment harness
that checks the simulation against the theory.
"""

from .kinetics import (
    Constant,
    KineticParams,
    MaxwellBoltzmann2D,
    SpeedModel,
    beta_basic,
    beta_chord,
    beta_profile,
    contact_rate_pair,
    contact_rate_population,
    critical_density,
    elliptic_e,
    mean_spacing,
    r0,
)
from .sir import (
    SirParams,
    SirSeries,
    SirState,
    epidemic_threshold,
    final_size,
    integrate_sir,
    peak_infectives,
    sir_derivative,
)
from .abm import (
    ConfigError,
    ContactStats,
    PairEpisode,
    SimConfig,
    SimOutput,
    detect_entry,
    impact_histogram,
    init_population,
    measure_contact_rate,
    run_simulation,
)
from .experiments import (
    ComparisonMetrics,
    EnsembleSpec,
    ProfileRatioResult,
    ThresholdPoint,
    compare_sim_ode,
    profile_ratio_experiment,
    r_sweep,
    run_ensemble,
    threshold_scan,
)

__version__ = "0.1.0"

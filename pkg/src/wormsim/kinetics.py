"""Closed-form contact and transmission rates for mobile short-range devices.

A population of density ``rho`` (agents/m²) moves in straight lines with
azimuthally uniform headings. An agent makes contact whenever another agent
enters its disc of radius ``R``. Averaging the swept-area flux over the
relative heading gives the pairwise contact rate

    CR(v_i, v) = (4/pi) * R * rho * (v_i + v) * E(m),   m = 4 v v_i / (v + v_i)^2

with E the complete elliptic integral of the second kind. For equal speeds
(m = 1, E = 1) this collapses to CR = (8/pi) R rho v. The population-level
rate below applies the same expression with the mean speed v_bar for any speed
model. That is exact when every device moves at the same speed; for 2D
Maxwell-Boltzmann speeds it is a mean-speed approximation, since the true mean
relative speed of two independent Rayleigh-speed agents is sqrt(2) v_bar
rather than (4/pi) v_bar, about 11% higher.

Transmission rates follow by weighting contacts with an infection probability:
uniform per-contact probability p gives beta = (8/pi) R rho v p, while
chord-length weighting p(r) = (p/R) sqrt(R^2 - r^2) of the closest-approach
distance r gives beta = 2 R rho v p, a factor pi/4 lower.

All quantities are in meters and days.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "KineticParams",
    "Constant",
    "MaxwellBoltzmann2D",
    "SpeedModel",
    "elliptic_e",
    "contact_rate_pair",
    "contact_rate_population",
    "beta_basic",
    "beta_chord",
    "beta_profile",
    "critical_density",
    "r0",
    "mean_spacing",
]


@dataclass(frozen=True)
class KineticParams:
    """Inputs to every analytic rate formula.

    rho:   number density, agents per m^2
    R:     contact / communication radius, m
    v_bar: mean population speed, m/day
    p:     per-contact transmission probability
    delta: recovery (patching) rate, per day
    """

    rho: float
    R: float
    v_bar: float
    p: float
    delta: float

    def __post_init__(self):
        for name in ("rho", "R", "v_bar", "p", "delta"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative, got {getattr(self, name)}")
        if self.p > 1:
            raise ValueError(f"p must be <= 1, got {self.p}")


@dataclass(frozen=True)
class Constant:
    """Every agent moves at the same fixed speed (m/day)."""

    v: float

    def __post_init__(self):
        if self.v < 0:
            raise ValueError(f"speed must be nonnegative, got {self.v}")

    @property
    def mean(self) -> float:
        return self.v

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return np.full(n, self.v)


@dataclass(frozen=True)
class MaxwellBoltzmann2D:
    """2D Maxwell-Boltzmann (Rayleigh) speed distribution, parameterized by its mean.

    A Rayleigh(sigma) variate has mean sigma*sqrt(pi/2), so sigma = mean*sqrt(2/pi).
    """

    mean_speed: float

    def __post_init__(self):
        if self.mean_speed <= 0:
            raise ValueError(f"mean speed must be positive, got {self.mean_speed}")

    @property
    def mean(self) -> float:
        return self.mean_speed

    @property
    def sigma(self) -> float:
        return self.mean_speed * math.sqrt(2.0 / math.pi)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.rayleigh(self.sigma, n)


SpeedModel = Constant | MaxwellBoltzmann2D


def elliptic_e(m: float) -> float:
    """Complete elliptic integral of the second kind,
    E(m) = int_0^{pi/2} sqrt(1 - m sin^2 w) dw, for m in [0, 1].

    Computed by the arithmetic-geometric-mean iteration, which converges
    quadratically and is exact at both endpoints (E(0) = pi/2, E(1) = 1).
    """
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"elliptic_e requires m in [0, 1], got {m}")
    if m == 0.0:
        return math.pi / 2.0
    if m == 1.0:
        return 1.0
    a = 1.0
    b = math.sqrt(1.0 - m)
    c_sq_sum = 0.5 * m  # 2^{-1} * c_0^2 with c_0 = sqrt(m)
    pow2 = 1.0
    for _ in range(60):  # quadratic convergence; stalls at one ulp
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        c_sq_sum += pow2 * c * c
        pow2 *= 2.0
        if c <= a * 1e-16:
            break
    k_complete = math.pi / (2.0 * a)
    return k_complete * (1.0 - c_sq_sum)


def contact_rate_pair(v_i: float, v: float, params: KineticParams) -> float:
    """Contact rate (contacts/day) of an agent at speed v_i against a
    background population all moving at speed v. Symmetric in (v_i, v);
    zero if both speeds are zero."""
    if v_i < 0 or v < 0:
        raise ValueError(f"speeds must be nonnegative, got v_i={v_i}, v={v}")
    total = v_i + v
    if total == 0.0:
        return 0.0
    m = 4.0 * (v / total) * (v_i / total)
    # guard round-off pushing m infinitesimally past 1 when v_i == v
    m = min(m, 1.0)
    return (4.0 / math.pi) * params.R * params.rho * total * elliptic_e(m)


def contact_rate_population(speed: SpeedModel, params: KineticParams) -> float:
    """Population mean contact rate (8/pi) R rho v_bar, contacts/day.

    Exact for a single shared speed. For 2D Maxwell-Boltzmann speeds this is
    the model's mean-speed approximation; a direct simulation measures a rate
    higher by sqrt(2)/(4/pi), about 11% (see the module docstring)."""
    return (8.0 / math.pi) * params.R * params.rho * speed.mean


def beta_basic(params: KineticParams) -> float:
    """Transmission rate (per day) with a uniform per-contact probability p:
    beta = (8/pi) R rho v_bar p."""
    return params.p * (8.0 / math.pi) * params.R * params.rho * params.v_bar


def beta_chord(params: KineticParams) -> float:
    """Transmission rate (per day) with chord-length weighting of the
    infection probability: beta = 2 R rho v_bar p, i.e. pi/4 of beta_basic."""
    return 2.0 * params.R * params.rho * params.v_bar * params.p


def beta_profile(params: KineticParams, profile) -> float:
    """Transmission rate (per day) for an arbitrary radial infection
    probability profile(r), r in [0, R]:

        beta = (8/pi) rho v_bar * int_0^R profile(r) dr

    evaluated by adaptive quadrature. The constant profile p recovers
    beta_basic; the chord profile (p/R) sqrt(R^2 - r^2) recovers beta_chord.
    """
    from scipy.integrate import quad

    r_check = np.linspace(0.0, params.R, 101)
    vals = np.array([profile(r) for r in r_check], dtype=float)
    if np.any(vals < 0.0) or np.any(vals > 1.0):
        bad = r_check[(vals < 0.0) | (vals > 1.0)][0]
        raise ValueError(f"profile({bad}) outside [0, 1]")
    integral, _ = quad(profile, 0.0, params.R, epsabs=1e-13, epsrel=1e-12, limit=200)
    return (8.0 / math.pi) * params.rho * params.v_bar * integral


def critical_density(R: float, v_bar: float, p: float, delta: float) -> float:
    """Device density rho_c = delta / (2 R v_bar p) below which no epidemic
    is possible (beta_chord at rho_c equals delta)."""
    if R <= 0 or v_bar <= 0 or p <= 0 or delta <= 0:
        raise ValueError("critical_density requires R, v_bar, p, delta > 0")
    return delta / (2.0 * R * v_bar * p)


def r0(beta: float, delta: float) -> float:
    """Basic reproduction number beta/delta; an epidemic requires r0 > 1."""
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return beta / delta


def mean_spacing(rho: float) -> float:
    """Mean inter-agent spacing l = rho^{-1/2} (m). The analytic rates assume
    the dilute regime R << l; validators warn when R/l > 0.25."""
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    return rho**-0.5
